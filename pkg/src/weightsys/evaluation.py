"""Weight-system evaluation: state sums and Verma highest-weight values.

A skeleton diagram is first STU-reduced to chord diagrams; a chord diagram
is then contracted by a right-to-left sweep along the circle.  Each chord
carries one Casimir term (x, y, w): y acts at the later endpoint, x is held
pending until the earlier endpoint.  The sweep keeps a map from pending
assignments to module states, merging branches with equal pendings -- this
is exact sparse tensor contraction along a path, and the rotation of the
cut is chosen to keep the number of simultaneously open chords small.

Koszul signs: permuting the Casimir factors into circle order costs exactly
one factor of -1 per *crossing* pair of chords whose terms are both odd
(nested and disjoint pairs contribute nothing because the two legs of one
Casimir term always have equal parity).  The sign is applied when a chord
opens, against the already-open odd chords it crosses.

Two independent carriers implement the module interface: the Verma module
of highest weight n*lambda0 (states are PBW monomials in the lowering
operators, coefficients polynomial in n and alpha), and any
finite-dimensional representation (states are basis vectors; the full
endomorphism is accumulated so the scalar can be Schur-checked).
"""

from __future__ import annotations

from fractions import Fraction

from .diagrams import DiagramError, LinComb, chord_endpoints, chord_reduce, chi_bar, insert_at_vertex
from .scalars import MultiPoly, RationalFunction

STATE_SUM_VERTEX_LIMIT = 12  # cost guard for dim-17 contractions

# counters for the degree-bound invariant (checked on every Verma call)
DEGREE_BOUND_CHECKS = 0
DEGREE_BOUND_VIOLATIONS = 0


class CostBoundError(RuntimeError):
    pass


class SchurCheckError(AssertionError):
    pass


# ------------------------------------------------------------ representations


class Representation:
    """Matrices per algebra basis element over the algebra's scalar ring.

    ``columns[x][j]`` is the sparse column {i: coeff} of rho(b_x) e_j.
    """

    def __init__(self, L, columns, parity, name):
        self.L = L
        self.columns = columns
        self.parity = parity
        self.dim = len(parity)
        self.name = name


def _mat_mul(cols_a, cols_b, dim):
    """Columns of A·B from columns of A and B."""
    out = []
    for j in range(dim):
        acc = {}
        for k, c in cols_b[j].items():
            for i, v in cols_a[k].items():
                s = acc.get(i, 0) + c * v
                if s:
                    acc[i] = s
                else:
                    acc.pop(i, None)
        out.append(acc)
    return out


def adjoint_rep(L):
    """rho(x) = ad x on the algebra itself."""
    columns = [[L.bracket(x, j) for j in range(L.dim)] for x in range(L.dim)]
    return Representation(L, columns, L.parity, name=f"adjoint({L.name})")


def bracket_relation_defects(rep):
    """All pairs where the super bracket relation fails for rep's matrices."""
    L = rep.L
    n = L.dim
    dim = rep.dim
    bad = []
    for i in range(n):
        for j in range(n):
            lhs = [dict() for _ in range(dim)]
            for k, c in L.bracket(i, j).items():
                for col in range(dim):
                    for r, v in rep.columns[k][col].items():
                        s = lhs[col].get(r, 0) + c * v
                        if s:
                            lhs[col][r] = s
                        else:
                            lhs[col].pop(r, None)
            ab = _mat_mul(rep.columns[i], rep.columns[j], dim)
            ba = _mat_mul(rep.columns[j], rep.columns[i], dim)
            sgn = -1 if (L.parity[i] and L.parity[j]) else 1
            ok = True
            for col in range(dim):
                acc = dict(ab[col])
                for r, v in ba[col].items():
                    acc[r] = acc.get(r, 0) - sgn * v
                for r, v in lhs[col].items():
                    acc[r] = acc.get(r, 0) - v
                if any(v for v in acc.values()):
                    ok = False
            if not ok:
                bad.append((L.basis_names[i], L.basis_names[j]))
    return bad


def supertrace(rep, x):
    acc = 0
    for j in range(rep.dim):
        v = rep.columns[x][j].get(j, 0)
        acc = acc + (-v if rep.parity[j] else v)
    return acc


# ------------------------------------------------------------- module carriers


class VermaCarrier:
    """PBW states of the Verma module of highest weight n * lambda0.

    Monomials are exponent tuples over the lowering operators in PBW order;
    odd exponents stay in {0, 1} (an odd square rewrites through [x,x]/2).
    Coefficients live in Q[n] or Q[n, alpha].
    """

    def __init__(self, L, lambda0):
        rd = L.rootdata
        self.L = L
        self.lambda0 = tuple(lambda0)
        self.neg = rd.negative_order
        self.neg_index = {b: i for i, b in enumerate(self.neg)}
        self.cartan_index = {h: i for i, h in enumerate(rd.cartan)}
        self.r = len(self.neg)
        self.vars = ("n", "alpha") if L.symbolic else ("n",)
        self.one = MultiPoly.const(1, self.vars)
        n_mono = tuple(1 if v == "n" else 0 for v in self.vars)
        self.lam = {h: MultiPoly(self.vars, {n_mono: Fraction(self.lambda0[i])})
                    for h, i in self.cartan_index.items()}
        self.zero_mono = (0,) * self.r
        self._memo = {}

    def lift(self, c):
        if isinstance(c, MultiPoly):
            return c.with_vars(self.vars)
        return MultiPoly.const(c, self.vars)

    def start(self):
        return {self.zero_mono: self.one}

    def extract(self, vec):
        return vec.get(self.zero_mono, MultiPoly.zero(self.vars))

    def act(self, x, mono):
        """x . (mono v_lambda) as a normal-ordered state, memoized."""
        key = (x, mono)
        got = self._memo.get(key)
        if got is not None:
            return got
        out = {}
        first = next((i for i, e in enumerate(mono) if e), None)
        if first is None:
            if x in self.neg_index:
                m = list(mono)
                m[self.neg_index[x]] = 1
                out[tuple(m)] = self.one
            elif x in self.cartan_index:
                out[mono] = self.lam[x]
            # positive root vectors annihilate v_lambda
        else:
            xi = self.neg_index.get(x)
            if xi is not None and xi < first:
                m = list(mono)
                m[xi] = 1
                out[tuple(m)] = self.one
            elif xi == first:
                y = self.neg[first]
                if not self.L.parity[y]:
                    m = list(mono)
                    m[first] += 1
                    out[tuple(m)] = self.one
                else:
                    # odd square: x.x = [x,x]/2 (zero for our instances, but
                    # kept general)
                    rest = list(mono)
                    rest[first] -= 1
                    rest = tuple(rest)
                    for z, cz in self.L.bracket(x, x).items():
                        czl = self.lift(cz) * Fraction(1, 2)
                        for m2, c2 in self.act(z, rest).items():
                            _accum(out, m2, czl * c2)
            else:
                y = self.neg[first]
                rest = list(mono)
                rest[first] -= 1
                rest = tuple(rest)
                sgn = -1 if (self.L.parity[x] and self.L.parity[y]) else 1
                for m2, c2 in self.act(x, rest).items():
                    c2s = c2 if sgn == 1 else -c2
                    for m3, c3 in self.act(y, m2).items():
                        _accum(out, m3, c2s * c3)
                for z, cz in self.L.bracket(x, y).items():
                    czl = self.lift(cz)
                    for m2, c2 in self.act(z, rest).items():
                        _accum(out, m2, czl * c2)
        self._memo[key] = out
        return out

    def apply(self, x, vec, scale=None):
        out = {}
        for mono, c in vec.items():
            if scale is not None:
                c = c * scale
            for m2, c2 in self.act(x, mono).items():
                _accum(out, m2, c * c2)
        return out


class EndoCarrier:
    """States (input column, basis index) of a finite-dimensional rep; the
    final state of the sweep is the full endomorphism."""

    def __init__(self, rep, ring_vars):
        self.rep = rep
        self.vars = ring_vars
        self.one = MultiPoly.const(1, ring_vars) if ring_vars else Fraction(1)

    def lift(self, c):
        if self.vars:
            if isinstance(c, MultiPoly):
                return c.with_vars(self.vars)
            return MultiPoly.const(c, self.vars)
        return Fraction(c) if not isinstance(c, MultiPoly) else c

    def start(self):
        return {(j, j): self.one for j in range(self.rep.dim)}

    def extract(self, vec):
        return vec

    def apply(self, x, vec, scale=None):
        out = {}
        cols = self.rep.columns[x]
        for (col, idx), c in vec.items():
            if scale is not None:
                c = c * scale
            for i, v in cols[idx].items():
                _accum(out, (col, i), c * self.lift(v))
        return out


def _accum(d, k, v):
    s = d.get(k)
    if s is None:
        if v:
            d[k] = v
    else:
        s = s + v
        if s:
            d[k] = s
        else:
            del d[k]


# --------------------------------------------------------------- the sweep


def _casimir_terms(L, carrier):
    terms = []
    for i, j, c in L.casimir:
        terms.append((i, j, carrier.lift(c), L.parity[i]))
    return terms


def _plan_rotation(chords, n, branch):
    """Rotate the cut to minimize the open-width cost of the sweep."""
    best, best_cost = None, None
    for r in range(max(n, 1)):
        rot = sorted(tuple(sorted(((p - r) % n, (q - r) % n))) for p, q in chords)
        width = 0
        cost = 0
        opens = {q for _, q in rot}
        closes = {p for p, _ in rot}
        for pos in range(n - 1, -1, -1):
            if pos in opens:
                width += 1
                cost += branch ** width
            if pos in closes:
                cost += branch ** width
                width -= 1
        if best_cost is None or cost < best_cost:
            best, best_cost = rot, cost
    return best or []


def sweep_chords(L, carrier, chords, n_positions, rotation=None):
    """Contract a chord diagram given as endpoint pairs on n positions."""
    terms = _casimir_terms(L, carrier)
    if rotation is None:
        chords = _plan_rotation(chords, n_positions, len(terms))
    else:
        chords = sorted(tuple(sorted(((p - rotation) % n_positions,
                                      (q - rotation) % n_positions)))
                        for p, q in chords)
    open_at = {q: ci for ci, (p, q) in enumerate(chords)}
    close_at = {p: ci for ci, (p, q) in enumerate(chords)}
    states = {(): carrier.start()}
    for pos in range(n_positions - 1, -1, -1):
        nxt = {}
        if pos in open_at:
            ci = open_at[pos]
            p_c = chords[ci][0]
            for pend, vec in states.items():
                odd_crossers = sum(1 for (c2, t2) in pend
                                   if terms[t2][3] and chords[c2][0] > p_c)
                for ti, (xi, yi, w, par) in enumerate(terms):
                    scale = w
                    if par and (odd_crossers & 1):
                        scale = -w
                    vec2 = carrier.apply(yi, vec, scale=scale)
                    if vec2:
                        _merge(nxt, pend + ((ci, ti),), vec2)
        elif pos in close_at:
            ci = close_at[pos]
            for pend, vec in states.items():
                ti = next(t for c, t in pend if c == ci)
                vec2 = carrier.apply(terms[ti][0], vec)
                pend2 = tuple((c, t) for c, t in pend if c != ci)
                if vec2:
                    _merge(nxt, pend2, vec2)
        else:
            raise DiagramError("position is neither a chord opening nor closing")
        states = nxt
        if not states:
            break
    final = states.get((), {})
    return carrier.extract(final)


def _merge(states, pend, vec):
    cur = states.get(pend)
    if cur is None:
        states[pend] = vec
    else:
        for k, v in vec.items():
            _accum(cur, k, v)


# ------------------------------------------------------------ public surface


_VERMA_CARRIERS = {}
_VERMA_VALUES = {}
_STATESUM_VALUES = {}


def _verma_carrier(L, lambda0):
    key = (L.name, tuple(lambda0))
    if key not in _VERMA_CARRIERS:
        _VERMA_CARRIERS[key] = VermaCarrier(L, lambda0)
    return _VERMA_CARRIERS[key]


def eval_verma(d, L, lambda0):
    """Scalar action of a skeleton diagram on the Verma module of weight
    n*lambda0, as an exact polynomial in n (and alpha, symbolically).

    The degree bound deg_n <= (number of skeleton vertices) is asserted on
    every call.
    """
    global DEGREE_BOUND_CHECKS, DEGREE_BOUND_VIOLATIONS
    carrier = _verma_carrier(L, lambda0)
    if isinstance(d, LinComb):
        total = MultiPoly.zero(carrier.vars)
        for diag, c in d:
            total = total + eval_verma(diag, L, lambda0) * Fraction(c)
        return total
    if d.skel is None:
        raise DiagramError("weight systems evaluate skeleton diagrams")
    value = MultiPoly.zero(carrier.vars)
    for chord_diag, c in chord_reduce(d):
        value = value + _verma_chord_value(chord_diag, L, carrier) * Fraction(c)
    DEGREE_BOUND_CHECKS += 1
    if value.degree_in("n") > len(d.skel):
        DEGREE_BOUND_VIOLATIONS += 1
        raise AssertionError(
            f"degree bound violated: deg_n={value.degree_in('n')} > {len(d.skel)} skeleton vertices")
    return value


def _verma_chord_value(chord_diag, L, carrier):
    key = (L.name, carrier.lambda0, chord_diag.canonical_key())
    got = _VERMA_VALUES.get(key)
    if got is None:
        chords = chord_endpoints(chord_diag)
        got = sweep_chords(L, carrier, chords, 2 * len(chords))
        _VERMA_VALUES[key] = got
    return got


def eval_state_sum(d, L, rep=None, rotation=None):
    """Scalar by which a skeleton diagram acts in a finite-dimensional rep.

    The full endomorphism is computed and Schur-checked to be an exact
    scalar multiple of the identity; the scalar is returned.
    """
    if rep is None:
        rep = adjoint_rep(L)
    if isinstance(d, LinComb):
        total = 0
        for diag, c in d:
            total = eval_state_sum(diag, L, rep, rotation=rotation) * Fraction(c) + total
        return total
    if d.skel is None:
        raise DiagramError("weight systems evaluate skeleton diagrams")
    if rep.dim > 8 and d.n_vertices > STATE_SUM_VERTEX_LIMIT:
        raise CostBoundError(
            f"state sum over dim {rep.dim} limited to {STATE_SUM_VERTEX_LIMIT} vertices")
    total = 0
    for chord_diag, c in chord_reduce(d):
        total = _statesum_chord_value(chord_diag, L, rep, rotation) * Fraction(c) + total
    return total


def _statesum_chord_value(chord_diag, L, rep, rotation=None):
    key = (L.name, rep.name, chord_diag.canonical_key(), rotation)
    got = _STATESUM_VALUES.get(key)
    if got is None:
        ring_vars = ("alpha",) if L.symbolic else ()
        carrier = EndoCarrier(rep, ring_vars)
        chords = chord_endpoints(chord_diag)
        endo = sweep_chords(L, carrier, chords, 2 * len(chords), rotation=rotation)
        got = _schur_scalar(endo, rep.dim, carrier)
        _STATESUM_VALUES[key] = got
    return got


def _schur_scalar(endo, dim, carrier):
    zero = carrier.lift(0)
    scalar = endo.get((0, 0), zero)
    for (col, idx), v in endo.items():
        if col != idx and v:
            raise SchurCheckError(f"off-diagonal entry at {(col, idx)}: {v}")
    for j in range(dim):
        if endo.get((j, j), zero) != scalar:
            raise SchurCheckError(f"diagonal mismatch at column {j}")
    return scalar


def adjoint_weight(L):
    """Highest weight of the adjoint representation, in H* coordinates."""
    return L.rootdata.highest_root


# ------------------------------------------------------------- insertion ratios


def exact_ratio(num, den):
    """num / den for two polynomials that must be exactly proportional with a
    ratio free of n; returns the ratio (Fraction or RationalFunction in
    alpha), or raises ValueError if the proportionality fails."""
    if isinstance(num, Fraction) and isinstance(den, Fraction):
        if not den:
            raise ZeroDivisionError("zero denominator value")
        return num / den
    num = num if isinstance(num, MultiPoly) else MultiPoly.const(num)
    den = den if isinstance(den, MultiPoly) else MultiPoly.const(den)
    num, den = num._aligned(den)
    if den.is_zero():
        raise ZeroDivisionError("zero denominator value")
    dn = max(num.degree_in("n"), den.degree_in("n")) if "n" in den.vars else 0
    num_coeffs = [num.coefficient_in("n", k) for k in range(dn + 1)] if "n" in num.vars else [num]
    den_coeffs = [den.coefficient_in("n", k) for k in range(dn + 1)] if "n" in den.vars else [den]
    ref = next(k for k in range(len(den_coeffs)) if den_coeffs[k])
    for i in range(len(den_coeffs)):
        lhs = num_coeffs[i] * den_coeffs[ref]
        rhs = num_coeffs[ref] * den_coeffs[i]
        if lhs != rhs:
            raise ValueError("values are not proportional by an n-free ratio")
    ratio = RationalFunction(num_coeffs[ref], den_coeffs[ref])
    if ratio.den.is_constant() and ratio.num.is_constant():
        return ratio.num.constant_value() / ratio.den.constant_value()
    return ratio


def ratio_character(piece, probes):
    """Measure the character value of an insertion piece from probe ratios.

    Each probe is (base_diagram, algebra, mode, weight_or_rep): the base is
    a connected skeleton-free diagram of degree >= 2; the measured ratio is
    W(chi_bar(piece . base)) / W(chi_bar(base)).  All ratios for one probe
    list must agree exactly; the common value and a report are returned.
    """
    ratios = []
    report = []
    for base, L, mode, aux in probes:
        if base.nt == 0:
            raise DiagramError("probe needs a trivalent vertex to insert at")
        inserted = insert_at_vertex(base, 0, piece)
        num_src = chi_bar(inserted)
        den_src = chi_bar(base)
        if mode == "verma":
            den = eval_verma(den_src, L, aux)
            num = eval_verma(num_src, L, aux)
        elif mode == "statesum":
            den = eval_state_sum(den_src, L, aux)
            num = eval_state_sum(num_src, L, aux)
        else:
            raise ValueError(f"unknown mode {mode}")
        if (den.is_zero() if isinstance(den, MultiPoly) else not den):
            raise ValueError("probe has zero weight-system value")
        r = exact_ratio(num, den)
        ratios.append(r)
        report.append({"base_degree": str(base.degree), "algebra": L.name,
                       "mode": mode, "ratio": str(r)})
    first = ratios[0]
    consistent = all(r == first for r in ratios[1:])
    if not consistent:
        raise ValueError(f"inconsistent insertion ratios: {[str(r) for r in ratios]}")
    return first, report
