"""Tests for the exact scalar tower and the linear solver."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weightsys.scalars import (
    MultiPoly,
    RationalFunction,
    matrix_det,
    matrix_inverse,
    matrix_rank,
    poly_eval,
    rational_roots,
    solve_linear_system,
    squarefree_part,
)


def P(name):
    return MultiPoly.variable(name)


rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))


def small_polys(var_names=("x", "y")):
    monos = st.tuples(st.integers(0, 3), st.integers(0, 3))
    return st.dictionaries(monos, rationals, max_size=4).map(
        lambda d: MultiPoly(var_names, d)
    )


@settings(max_examples=60, deadline=None)
@given(small_polys(), small_polys(), small_polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + (-p)).is_zero()
    assert p + q == q + p
    assert p * q == q * p


@settings(max_examples=40, deadline=None)
@given(small_polys(), small_polys(), rationals, rationals)
def test_substitution_is_ring_hom(p, q, a, b):
    sub = {"x": a, "y": b}
    assert (p * q).substitute(sub) == p.substitute(sub) * q.substitute(sub)
    assert (p + q).substitute(sub) == p.substitute(sub) + q.substitute(sub)


def test_poly_eval_examples():
    alpha = P("alpha")
    # alpha^2 + alpha at alpha = 1
    p = alpha * alpha + alpha
    assert poly_eval(p, {"alpha": Fraction(1)}) == 2

    # renaming-style substitution: sigma3 -> -alpha - alpha^2
    s3 = P("sigma3")
    image = -alpha - alpha * alpha
    assert poly_eval(s3, {"sigma3": image}) == image

    # (1 + alpha) * n^k at alpha = 1, k = 2  ->  2 n^2
    n = P("n")
    p = (1 + alpha) * n ** 2
    assert poly_eval(p, {"alpha": Fraction(1)}) == 2 * n ** 2


def test_partial_substitution_keeps_other_vars():
    a, n = P("alpha"), P("n")
    p = (a + 1) * n + a ** 3
    q = p.substitute({"alpha": Fraction(2)})
    assert q == 3 * n + 8


def test_degree_bookkeeping():
    a, n = P("alpha"), P("n")
    p = (a * n) ** 3 + n
    assert p.degree() == 6
    assert p.degree_in("n") == 3
    assert p.coefficient_in("n", 3) == a ** 3
    assert MultiPoly.zero().degree() == -1


def test_canonical_str_is_deterministic():
    a, n = P("alpha"), P("n")
    p = 2 * n ** 2 - n * a + Fraction(1, 2)
    assert str(p) == "2*n^2 - n*alpha + 1/2"
    q = Fraction(1, 2) + 2 * n ** 2 - a * n
    assert str(q) == str(p)


def test_solver_identity_case():
    rows = [{0: 1}, {1: 1}, {2: 1}]
    sol = solve_linear_system(rows, [1, 0, 0])
    assert sol.consistent
    assert sol.particular == [1, 0, 0]
    assert sol.nullspace == []


def test_solver_symmetry_case():
    sol = solve_linear_system([{0: 1, 1: 1}], [0])
    assert sol.consistent
    assert len(sol.nullspace) == 1
    vec = sol.nullspace[0]
    assert vec[0] == -vec[1]


def test_solver_inconsistent_is_a_legal_return():
    sol = solve_linear_system([{0: 1}, {0: 1}], [1, 2])
    assert not sol.consistent
    assert sol.particular is None


def test_degree2_stu_consistency_system():
    # The three expansions of the one-internal-vertex degree-2 diagram, in
    # coordinates (noncrossing, crossing) of the two chord classes: each
    # expansion is (1, -1), so the system has rank 1 and the pairwise
    # differences have rank 0, consistent with the diagram-module dimension
    # #classes - 0 = 2 for the degree-2 piece.  Values frozen from the
    # brute-force expansion in the diagram tests.
    rows = [{0: 1, 1: -1}, {0: 1, 1: -1}, {0: 1, 1: -1}]
    assert matrix_rank(rows, 2) == 1
    diffs = [{0: 0, 1: 0}, {0: 0, 1: 0}]
    assert matrix_rank(diffs, 2) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(rationals, min_size=3, max_size=3))
def test_solver_residuals_are_exactly_zero(mat, rhs):
    rows = [{j: v for j, v in enumerate(r) if v} for r in mat]
    sol = solve_linear_system(rows, rhs, ncols=3)
    if sol.consistent:
        for r, b in zip(rows, rhs):
            acc = sum((v * sol.particular[j] for j, v in r.items()), Fraction(0))
            assert acc == b
    for vec in sol.nullspace:
        for r in rows:
            acc = sum((v * vec.get(j, 0) for j, v in r.items()), Fraction(0))
            assert acc == 0


def test_rational_function_reduction():
    a = P("alpha")
    f = RationalFunction(a ** 2 - 1, a - 1)
    assert f == RationalFunction(a + 1, MultiPoly.const(1))
    g = RationalFunction(1, a) + RationalFunction(1, a + 1)
    assert g == RationalFunction(2 * a + 1, a * (a + 1))
    assert (f - f).is_zero()
    with pytest.raises(ZeroDivisionError):
        RationalFunction(a, MultiPoly.zero(("alpha",)))


def test_matrix_inverse_over_rational_functions():
    a = P("alpha")
    mat = [[a, 1], [0, a + 1]]
    inv = matrix_inverse(mat)
    # check M * M^-1 = I
    for i in range(2):
        for j in range(2):
            acc = sum((RationalFunction.from_scalar(mat[i][k]) * inv[k][j]
                       for k in range(2)), RationalFunction.from_scalar(0))
            assert acc == (1 if i == j else 0)
    det = matrix_det(mat)
    assert det == RationalFunction.from_scalar(a * (a + 1))


def test_solver_over_rational_function_field():
    a = P("alpha")
    # x + alpha*y = alpha^2 ; x - y = 0  ->  x = y = alpha^2/(1+alpha)
    sol = solve_linear_system([{0: MultiPoly.const(1, ("alpha",)), 1: a},
                               {0: MultiPoly.const(1, ("alpha",)), 1: MultiPoly.const(-1, ("alpha",))}],
                              [a ** 2, MultiPoly.zero(("alpha",))], ncols=2)
    assert sol.consistent
    want = RationalFunction(a ** 2, a + 1)
    assert sol.particular[0] == want
    assert sol.particular[1] == want


def test_rational_roots_with_multiplicity():
    a = P("alpha")
    p = a ** 3 * (a + 1) ** 2 * (2 * a - 3) * (a ** 2 + 1)
    roots = rational_roots(p, "alpha")
    assert roots == [(Fraction(-1), 2), (Fraction(0), 3), (Fraction(3, 2), 1)]
    sq = squarefree_part(p, "alpha")
    assert rational_roots(sq, "alpha") == [(Fraction(-1), 1), (Fraction(0), 1), (Fraction(3, 2), 1)]
    assert sq.degree_in("alpha") == 5
