"""Exact scalar tower and linear algebra.

Rationals are ``fractions.Fraction`` (arbitrary precision, always reduced,
positive denominator -- exactly the invariants we need, so we use the
stdlib type directly).  On top of that sit sparse multivariate polynomials
(:class:`MultiPoly`) and fractions of those (:class:`RationalFunction`).
Every operation is exact; floating point never appears.

The linear solver works over any field whose elements support +, -, *, /
and truthiness (Fraction and RationalFunction both qualify).  Pivoting is
deterministic (lowest row, lowest column first) so echelon forms are
reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not a rational constant: {c!r}")


class MultiPoly:
    """Sparse polynomial over Q in an ordered tuple of named variables.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fractions.  The zero polynomial has an empty term map.  Instances are
    treated as immutable; arithmetic aligns variable sets automatically.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms):
        vars = tuple(vars)
        nv = len(vars)
        clean = {}
        for expo, c in terms.items():
            expo = tuple(expo)
            if len(expo) != nv:
                raise ValueError(f"exponent arity {len(expo)} != {nv} variables")
            c = _as_fraction(c)
            if c:
                clean[expo] = c
        self.vars = vars
        self.terms = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def const(cls, c, vars=()):
        c = _as_fraction(c)
        if not c:
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, name):
        return cls((name,), {(1,): Fraction(1)})

    @classmethod
    def zero(cls, vars=()):
        return cls(vars, {})

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        if name not in self.vars:
            return 0 if self.terms else -1
        if not self.terms:
            return -1
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def coefficient_in(self, name, power):
        """Coefficient of name**power, a polynomial in the same variables."""
        i = self.vars.index(name)
        out = {}
        for expo, c in self.terms.items():
            if expo[i] == power:
                e = list(expo)
                e[i] = 0
                out[tuple(e)] = out.get(tuple(e), Fraction(0)) + c
        return MultiPoly(self.vars, out)

    # -- variable-set plumbing ----------------------------------------------

    def with_vars(self, vars):
        """Re-express in a superset (or reordering) of the variables."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            if v not in vars:
                if self.degree_in(v) > 0:
                    raise ValueError(f"cannot drop live variable {v}")
                idx.append(None)
            else:
                idx.append(vars.index(v))
        out = {}
        for expo, c in self.terms.items():
            e = [0] * len(vars)
            for j, p in enumerate(expo):
                if p:
                    e[idx[j]] = p
            key = tuple(e)
            out[key] = out.get(key, Fraction(0)) + c
        return MultiPoly(vars, out)

    def restrict_vars(self):
        """Drop variables that never occur."""
        live = [v for v in self.vars if self.degree_in(v) > 0]
        return self.with_vars(tuple(live))

    def _aligned(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented, NotImplemented
        if self.vars == other.vars:
            return self, other
        merged = tuple(dict.fromkeys(self.vars + other.vars))
        return self.with_vars(merged), other.with_vars(merged)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        out = dict(a.terms)
        for expo, c in b.terms.items():
            s = out.get(expo, Fraction(0)) + c
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        return MultiPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return MultiPoly(self.vars, {})
            return MultiPoly(self.vars, {e: c * v for e, v in self.terms.items()})
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(key, Fraction(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    del out[key]
        return MultiPoly(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        r = self.restrict_vars()
        return hash((r.vars, tuple(sorted(r.terms.items()))))

    # -- substitution -----------------------------------------------------------

    def substitute(self, assignment):
        """Exact substitution of a subset of variables.

        Values may be Fractions, ints or MultiPolys; the result is a
        MultiPoly in the union of the surviving and the substituted-in
        variables.
        """
        for v in assignment:
            if v not in self.vars:
                raise KeyError(f"unknown variable {v}")
        keep = [v for v in self.vars if v not in assignment]
        extra = []
        values = {}
        for v, val in assignment.items():
            if isinstance(val, (int, Fraction)):
                values[v] = MultiPoly.const(val)
            elif isinstance(val, MultiPoly):
                values[v] = val
                extra.extend(x for x in val.vars if x not in extra)
            else:
                raise TypeError(f"bad substitution value for {v}: {val!r}")
        out_vars = tuple(dict.fromkeys(tuple(keep) + tuple(extra)))
        total = MultiPoly.zero(out_vars)
        pow_cache = {}
        for expo, c in self.terms.items():
            term = MultiPoly.const(c, out_vars)
            for v, p in zip(self.vars, expo):
                if p == 0:
                    continue
                if v in values:
                    key = (v, p)
                    if key not in pow_cache:
                        pow_cache[key] = (values[v] ** p).with_vars(out_vars)
                    term = term * pow_cache[key]
                else:
                    mono = tuple(p if x == v else 0 for x in out_vars)
                    term = term * MultiPoly(out_vars, {mono: Fraction(1)})
            total = total + term
        return total

    def evaluate(self, assignment):
        """Full evaluation to a Fraction; every live variable must be assigned."""
        r = self.substitute({v: _as_fraction(assignment[v]) for v in self.vars if v in assignment})
        return r.constant_value()

    # -- univariate helpers ----------------------------------------------------

    def as_univariate(self, name):
        """Dense coefficient list [c0, c1, ...] in ``name``; other variables must be dead."""
        for v in self.vars:
            if v != name and self.degree_in(v) > 0:
                raise ValueError(f"not univariate in {name}: contains {v}")
        d = self.degree_in(name)
        if d < 0:
            return [Fraction(0)]
        i = self.vars.index(name) if name in self.vars else None
        coeffs = [Fraction(0)] * (d + 1)
        for expo, c in self.terms.items():
            coeffs[expo[i] if i is not None else 0] += c
        return coeffs

    @classmethod
    def from_univariate(cls, name, coeffs):
        return cls((name,), {(i,): c for i, c in enumerate(coeffs) if c})

    # -- printing ----------------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self._sorted_terms():
            factors = []
            for v, p in zip(self.vars, expo):
                if p == 1:
                    factors.append(v)
                elif p > 1:
                    factors.append(f"{v}^{p}")
            mono = "*".join(factors)
            if not mono:
                parts.append((c, str(abs(c)) if c.denominator == 1 else f"{abs(c)}"))
                continue
            if abs(c) == 1:
                parts.append((c, mono))
            else:
                parts.append((c, f"{abs(c)}*{mono}"))
        out = ""
        for i, (c, text) in enumerate(parts):
            if i == 0:
                out = ("-" if c < 0 else "") + text
            else:
                out += (" - " if c < 0 else " + ") + text
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


# -- univariate polynomial utilities ---------------------------------------------


def univar_gcd(p, q, name):
    """Monic gcd of two univariate polynomials (coefficient lists ok too)."""
    a = p.as_univariate(name) if isinstance(p, MultiPoly) else list(p)
    b = q.as_univariate(name) if isinstance(q, MultiPoly) else list(q)

    def trim(c):
        while c and not c[-1]:
            c.pop()
        return c

    a, b = trim(a), trim(b)
    while b:
        a, b = b, trim(_poly_mod(a, b))
    if not a:
        return MultiPoly.zero((name,))
    lead = a[-1]
    return MultiPoly.from_univariate(name, [c / lead for c in a])


def _poly_mod(a, b):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        if not a[-1]:
            a.pop()
            continue
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return a


def squarefree_part(p, name):
    """p / gcd(p, p') for univariate p, normalized monic."""
    coeffs = p.as_univariate(name)
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    g = univar_gcd(p, MultiPoly.from_univariate(name, deriv), name)
    q, r = _poly_divmod(coeffs, g.as_univariate(name))
    assert not any(r), "gcd does not divide"
    lead = next(c for c in reversed(q) if c)
    return MultiPoly.from_univariate(name, [c / lead for c in q])


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        if not a[-1]:
            a.pop()
            continue
        f = a[-1] / lb
        shift = len(a) - 1 - db
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
    return q, a


def rational_roots(p, name):
    """All rational roots of a univariate polynomial, with multiplicities.

    Returns a sorted list of (root, multiplicity).  Exact: candidates come
    from the rational root theorem and are verified by exact division.
    """
    coeffs = p.as_univariate(name)
    if not any(coeffs):
        raise ValueError("zero polynomial has every root")
    roots = []
    # multiplicity of the root 0 = valuation
    val = 0
    while not coeffs[val]:
        val += 1
    if val:
        roots.append((Fraction(0), val))
        coeffs = coeffs[val:]
    # integer-scale
    denlcm = 1
    for c in coeffs:
        denlcm = denlcm * c.denominator // _gcd(denlcm, c.denominator)
    ints = [int(c * denlcm) for c in coeffs]
    lead, trail = ints[-1], ints[0]
    cands = set()
    for pnum in _divisors(abs(trail)):
        for qden in _divisors(abs(lead)):
            cands.add(Fraction(pnum, qden))
            cands.add(Fraction(-pnum, qden))
    cur = list(coeffs)
    for cand in sorted(cands):
        mult = 0
        while True:
            if len(cur) <= 1:
                break
            if _eval_coeffs(cur, cand):
                break
            cur = _deflate(cur, cand)
            mult += 1
        if mult:
            roots.append((cand, mult))
    return sorted(roots)


def _eval_coeffs(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root):
    """Synthetic division of p by (x - root); caller guarantees divisibility."""
    d = len(coeffs) - 1
    out = [Fraction(0)] * d
    out[d - 1] = coeffs[d]
    for i in range(d - 1, 0, -1):
        out[i - 1] = coeffs[i] + root * out[i]
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# -- rational functions -----------------------------------------------------------


class RationalFunction:
    """Fraction of two MultiPolys.

    Reduction: content is always pulled out; when numerator and denominator
    are univariate in one common variable the gcd is divided out as well
    (that covers every rational function this package ever builds -- they
    are all univariate in alpha).  The denominator is normalized to have
    leading coefficient 1 in the canonical term order.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if isinstance(num, (int, Fraction)):
            num = MultiPoly.const(num)
        if isinstance(den, (int, Fraction)):
            den = MultiPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num, den = num._aligned(den)
        if num.is_zero():
            den = MultiPoly.const(1, num.vars)
        else:
            live_n = {v for v in num.vars if num.degree_in(v) > 0}
            live_d = {v for v in den.vars if den.degree_in(v) > 0}
            live = live_n | live_d
            if len(live) == 1 and not den.is_constant():
                (v,) = live
                g = univar_gcd(num, den, v)
                if g.degree_in(v) > 0:
                    num = _exact_univar_div(num, g, v)
                    den = _exact_univar_div(den, g, v)
        lead = den._sorted_terms()[0][1] if den.terms else Fraction(1)
        num = num * (Fraction(1) / lead)
        den = den * (Fraction(1) / lead)
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiPoly):
            return cls(x, MultiPoly.const(1, x.vars))
        return cls(MultiPoly.const(x), MultiPoly.const(1))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            return RationalFunction.from_scalar(other)
        if isinstance(other, RationalFunction):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.from_scalar(other) / self

    def inverse(self):
        return RationalFunction(self.den, self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _exact_univar_div(p, g, name):
    other_vars = tuple(v for v in p.vars if v != name)
    if all(p.degree_in(v) == 0 for v in other_vars):
        q, r = _poly_divmod(p.as_univariate(name), g.as_univariate(name))
        assert not any(r)
        return MultiPoly.from_univariate(name, q).with_vars(p.vars)
    raise ValueError("exact division only implemented for univariate input")


def as_field(x):
    """Lift ints / Fractions / MultiPolys into a field element."""
    if isinstance(x, (RationalFunction, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, MultiPoly):
        return RationalFunction.from_scalar(x)
    raise TypeError(f"cannot treat {x!r} as a field element")


# -- top-level operations -------------------------------------------------------


def poly_eval(p, assignment):
    """Exact substitution of Rationals or MultiPolys into a MultiPoly."""
    return p.substitute(assignment)


@dataclass
class LinearSolution:
    """Result of an exact linear solve: particular solution + nullspace.

    ``consistent`` is False iff the system has no solution; then
    ``particular`` is None.  The nullspace basis is in reduced form: each
    vector has 1 in its own free column and zeros in the other free columns.
    """

    consistent: bool
    particular: list | None
    nullspace: list
    rank: int
    pivots: list


def sparse_rref(rows, ncols):
    """Reduced row echelon form of sparse rows (dicts col -> value).

    Deterministic: pivots are chosen as the lowest available column, rows
    in input order; returns (pivot_columns, rref_rows).
    """
    work = [dict(r) for r in rows if r]
    pivots = []
    rref = []
    for col in range(ncols):
        pr = None
        for i, r in enumerate(work):
            if col in r:
                pr = i
                break
        if pr is None:
            continue
        row = work.pop(pr)
        inv = row[col]
        row = {c: v / inv for c, v in row.items()}
        for other in rref:
            if col in other:
                f = other[col]
                for c, v in row.items():
                    s = other.get(c, 0) - f * v
                    if s:
                        other[c] = s
                    else:
                        other.pop(c, None)
        nxt = []
        for r in work:
            if col in r:
                f = r[col]
                for c, v in row.items():
                    s = r.get(c, 0) - f * v
                    if s:
                        r[c] = s
                    else:
                        r.pop(c, None)
            if r:
                nxt.append(r)
        work = nxt
        rref.append(row)
        pivots.append(col)
        if not work:
            break
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [rref[i] for i in order]


def solve_linear_system(rows, rhs, ncols=None):
    """Solve rows . x = rhs exactly over a field.

    ``rows`` are sparse vectors (dicts col -> value) sharing one ambient
    dimension; ``rhs`` is a dense list, one entry per row.  Inconsistency
    is a legal return, not an error.
    """
    rows = [dict(r) for r in rows]
    if ncols is None:
        ncols = 1 + max((max(r) for r in rows if r), default=-1)
    if len(rhs) != len(rows):
        raise ValueError("rhs length mismatch")
    RHS = ncols  # augmented column
    aug = []
    for r, b in zip(rows, rhs):
        rr = {c: as_field(v) for c, v in r.items() if v}
        b = as_field(b)
        if b:
            rr[RHS] = b
        aug.append(rr)
    pivots, rref = sparse_rref(aug, ncols + 1)
    if RHS in pivots:
        return LinearSolution(False, None, _nullspace(pivots, rref, ncols, RHS),
                              rank=len([p for p in pivots if p != RHS]),
                              pivots=[p for p in pivots if p != RHS])
    particular = [0] * ncols
    for p, row in zip(pivots, rref):
        particular[p] = row.get(RHS, 0)
    return LinearSolution(True, particular, _nullspace(pivots, rref, ncols, RHS),
                          rank=len(pivots), pivots=list(pivots))


def _nullspace(pivots, rref, ncols, rhs_col):
    piv = [p for p in pivots if p != rhs_col]
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = {free: as_field(1)}
        for p, row in zip(pivots, rref):
            if p == rhs_col:
                continue
            c = row.get(free)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def matrix_rank(rows, ncols=None):
    if ncols is None:
        ncols = 1 + max((max(r) for r in rows if r), default=-1)
    field_rows = [{c: as_field(v) for c, v in r.items() if v} for r in rows]
    pivots, _ = sparse_rref(field_rows, ncols)
    return len(pivots)


def matrix_inverse(mat):
    """Exact inverse of a dense square matrix; entries lifted to a field."""
    n = len(mat)
    rows = []
    for i in range(n):
        r = {j: as_field(mat[i][j]) for j in range(n) if _nonzero(mat[i][j])}
        for j in range(n, 2 * n):
            if j - n == i:
                r[j] = as_field(1)
        rows.append(r)
    pivots, rref = sparse_rref(rows, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    inv = [[as_field(0)] * n for _ in range(n)]
    for p, row in zip(pivots, rref):
        for j in range(n):
            inv[p][j] = row.get(n + j, as_field(0))
    return inv


def matrix_det(mat):
    """Exact determinant by fraction-full elimination over the lifted field."""
    n = len(mat)
    a = [[as_field(mat[i][j]) for j in range(n)] for i in range(n)]
    det = as_field(1)
    for col in range(n):
        pr = None
        for i in range(col, n):
            if a[i][col]:
                pr = i
                break
        if pr is None:
            return as_field(0)
        if pr != col:
            a[col], a[pr] = a[pr], a[col]
            det = -det
        det = det * a[col][col]
        inv = as_field(1) / a[col][col]
        for i in range(col + 1, n):
            if a[i][col]:
                f = a[i][col] * inv
                for j in range(col, n):
                    a[i][j] = a[i][j] - f * a[col][j]
    return det


def _nonzero(x):
    if isinstance(x, (int, Fraction)):
        return bool(x)
    return bool(x)
