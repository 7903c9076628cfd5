"""Leading coefficients of weight-system polynomials from root data.

For a sequence of representations with highest weight n*lambda0, the value
of a skeleton diagram is polynomial in n of degree at most the number of
skeleton vertices.  For the k-legged wheel on the circle the coefficient of
n^k has the closed root-system expression

    2 * sum over positive roots beta of (-1)^{parity(beta)} <lambda0, beta>^k,

computed here exactly (symbolically in alpha for the D(2,1,alpha) family).
Combining with the k! relation between the wheel and the symmetrized wheel
gives the nonvanishing search implemented in :func:`find_n0`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalars import MultiPoly, rational_roots, squarefree_part

DEFAULT_LAMBDA0 = (3, 1, 1)


@dataclass
class LeadingCoefficientQuery:
    k: int
    lambda0: tuple = DEFAULT_LAMBDA0
    alpha: object = None  # None = symbolic, Fraction otherwise

    def __post_init__(self):
        if self.k % 2 or self.k < 2:
            raise ValueError("k must be even and >= 2")


def top_coefficient(q, rootdata=None):
    """2 * sum_{beta in Delta+} (-1)^{deg beta} <lambda0, beta>^k, exact.

    With alpha symbolic the result is a polynomial in alpha; at a rational
    alpha it is a Fraction.  ``rootdata`` defaults to D(2,1,alpha)'s.
    """
    if rootdata is None:
        rootdata = _d21_rootdata(q.alpha)
    lam0 = q.lambda0
    total = 0
    for coords, parity, _ in rootdata.positive_roots:
        ip = rootdata.inner(lam0, coords)
        term = ip ** q.k
        total = (-term if parity else term) + total
    return 2 * total


_D21_CACHE = {}


def _d21_rootdata(alpha):
    key = alpha
    if key not in _D21_CACHE:
        from .superalgebras import d21

        _D21_CACHE[key] = d21(alpha).rootdata
    return _D21_CACHE[key]


def closed_form_value(k):
    """2 (6^k + 2 - 4^k - 2*3^k - 2^k)."""
    return 2 * (6 ** k + 2 - 4 ** k - 2 * 3 ** k - 2 ** k)


def closed_form_check(ks=range(2, 41, 2)):
    """At alpha = 1 the root-system sum equals the closed form for every even
    k; the value is 0 at k = 2 and positive for k >= 4."""
    rows = []
    ok = True
    for k in ks:
        computed = top_coefficient(LeadingCoefficientQuery(k, alpha=Fraction(1)))
        closed = closed_form_value(k)
        match = computed == closed
        positive = closed > 0
        row_ok = match and (closed == 0 if k == 2 else positive)
        ok = ok and row_ok
        rows.append({"k": k, "computed": str(computed), "closed_form": str(closed),
                     "match": match, "positive": positive})
    return {"ok": ok, "rows": rows}


_SUN_VERMA_CACHE = {}


def sun_verma_polynomial(k, lambda0=DEFAULT_LAMBDA0):
    """eval of the symmetrized k-wheel on the symbolic D(2,1,alpha) Verma
    module of weight n*lambda0, cached (this is the expensive computation)."""
    key = (k, tuple(lambda0))
    if key not in _SUN_VERMA_CACHE:
        from .diagrams import chi_bar, wheel
        from .evaluation import eval_verma
        from .superalgebras import d21

        _SUN_VERMA_CACHE[key] = eval_verma(chi_bar(wheel(k)), d21(), lambda0)
    return _SUN_VERMA_CACHE[key]


def find_n0(k, lambda0=DEFAULT_LAMBDA0):
    """Nonvanishing certificate for the symmetrized k-wheel.

    Computes the full value polynomial p(n, alpha), verifies that its n^k
    coefficient equals k! times the root-system leading coefficient
    (identically in alpha), and returns the least n0 >= 1 at which
    p(n0, alpha) is not the zero polynomial, together with the finite
    exclusion set of rational alpha roots and a squarefree certificate.

    When the leading coefficient vanishes identically (k = 2) no n0 is
    certified and the report says so.
    """
    import math

    q = LeadingCoefficientQuery(k)
    top = top_coefficient(q)
    p = sun_verma_polynomial(k, lambda0)
    lead = p.coefficient_in("n", k) if not p.is_zero() else MultiPoly.zero(("alpha",))
    want = math.factorial(k) * top
    if not (lead == want if isinstance(want, MultiPoly) else lead == MultiPoly.const(want, lead.vars)):
        raise AssertionError("n^k coefficient disagrees with the root-system formula")

    report = {"k": k, "top_coefficient": str(top),
              "n_k_coefficient_equals_k_factorial_times_top": True}
    top_zero = top.is_zero() if isinstance(top, MultiPoly) else not top
    if top_zero:
        report.update({"n0": None,
                       "certified": False,
                       "note": "leading coefficient vanishes identically; "
                               "no n0 certified through it"})
        return report

    deg_n = p.degree_in("n")
    n0 = None
    for cand in range(1, deg_n + 2):
        at = p.substitute({"n": Fraction(cand)})
        if not at.is_zero():
            n0 = cand
            break
    assert n0 is not None  # nonzero polynomial has at most deg_n roots
    at = p.substitute({"n": Fraction(n0)}).restrict_vars()
    roots = rational_roots(at, "alpha") if not at.is_constant() else []
    sq = squarefree_part(at, "alpha") if not at.is_constant() else None
    report.update({
        "n0": n0,
        "certified": True,
        "value_at_n0": str(at),
        "excluded_rational_alpha": [[str(r), m] for r, m in roots],
        "squarefree_part": str(sq) if sq is not None else "1",
        "note": "value at n0 is nonzero for every alpha outside the root set "
                "of the squarefree part",
    })
    return report
