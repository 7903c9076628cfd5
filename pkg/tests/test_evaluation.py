"""Weight-system evaluation: two methods, invariances, insertion ratios."""

from fractions import Fraction

import pytest

from weightsys.diagrams import (
    all_chord_diagrams,
    chi_bar,
    chord_diagram_from_word,
    empty_circle,
    insert_at_vertex,
    stu_eligible_legs,
    stu_expand,
    triangle,
    wheel,
    wheel_on_circle,
)
from weightsys.evaluation import (
    SchurCheckError,
    VermaCarrier,
    adjoint_rep,
    adjoint_weight,
    bracket_relation_defects,
    eval_state_sum,
    eval_verma,
    exact_ratio,
    ratio_character,
    supertrace,
    sweep_chords,
)
from weightsys.scalars import MultiPoly
from weightsys.superalgebras import d21, sl2
import weightsys.evaluation as evaluation


@pytest.fixture(scope="module")
def L():
    return sl2()


@pytest.fixture(scope="module")
def D2():
    return d21(Fraction(2))


@pytest.fixture(scope="module")
def D_sym():
    return d21()


def test_bare_circle_is_one(L):
    assert eval_state_sum(empty_circle(), L) == 1
    assert eval_verma(empty_circle(), L, (2,)) == 1


def test_single_chord_sl2_two_methods(L):
    one = chord_diagram_from_word([(0, 1)], 2)
    v = eval_verma(one, L, adjoint_weight(L))
    n = MultiPoly.variable("n")
    assert v == 2 * n ** 2 + 2 * n
    assert eval_state_sum(one, L) == 4
    assert v.substitute({"n": Fraction(1)}) == 4


def test_single_chord_d21_adjoint_vanishes(D_sym):
    one = chord_diagram_from_word([(0, 1)], 2)
    assert eval_state_sum(one, D_sym) == 0
    v = eval_verma(one, D_sym, adjoint_weight(D_sym))
    assert v.substitute({"n": Fraction(1)}).is_zero()


def test_adjoint_rep_properties(L, D2):
    rep = adjoint_rep(L)
    assert bracket_relation_defects(rep) == []
    h = L.index("h")
    assert sorted(rep.columns[h][j].get(j, 0) for j in range(3)) == [-2, 0, 2]
    assert supertrace(rep, h) == 0
    repD = adjoint_rep(D2)
    assert bracket_relation_defects(repD) == []
    assert supertrace(repD, D2.index("H1")) == 0


@pytest.mark.parametrize("alpha", [Fraction(2), Fraction(3), Fraction(1, 2)])
def test_two_method_agreement_degree2(alpha):
    D = d21(alpha)
    lam = adjoint_weight(D)
    for d in all_chord_diagrams(1) + all_chord_diagrams(2):
        v = eval_verma(d, D, lam).substitute({"n": Fraction(1)})
        assert v == eval_state_sum(d, D)


def test_stu_invariance_of_evaluation(D2):
    # eval(d) equals the evaluation of any one-step STU expansion of d
    lam = (3, 1, 1)
    t2 = wheel_on_circle(2)
    base = eval_verma(t2, D2, lam)
    for u in stu_eligible_legs(t2):
        total = MultiPoly.zero(("n",))
        for term, c in stu_expand(t2, u):
            total = total + eval_verma(term, D2, lam) * Fraction(c)
        assert total == base
    # degree 3: a glued triangle-insertion, expanded along each eligible leg
    (d3, c3), = list(insert_at_vertex(wheel(2), 0, triangle()))
    glued = next(iter(chi_bar(d3, c3)))[0]
    base = eval_verma(glued, D2, lam)
    for u in stu_eligible_legs(glued):
        total = MultiPoly.zero(("n",))
        for term, c in stu_expand(glued, u):
            total = total + eval_verma(term, D2, lam) * Fraction(c)
        assert total == base


def test_cut_rotation_invariance(D_sym):
    # reordering the processing of (odd) Casimir legs by moving the cut
    carrier = VermaCarrier(D_sym, (3, 1, 1))
    chords = [(0, 2), (1, 3)]
    vals = [sweep_chords(D_sym, carrier, chords, 4, rotation=r) for r in range(4)]
    assert all(v == vals[0] for v in vals[1:])


def test_degree_bound_is_asserted(D2):
    before = evaluation.DEGREE_BOUND_CHECKS
    eval_verma(wheel_on_circle(2), D2, (3, 1, 1))
    assert evaluation.DEGREE_BOUND_CHECKS > before
    assert evaluation.DEGREE_BOUND_VIOLATIONS == 0


def test_exact_ratio():
    n = MultiPoly.variable("n")
    a = MultiPoly.variable("alpha")
    num = (a + 1) * (n ** 2 + 2 * n)
    den = (n ** 2 + 2 * n).with_vars(("n", "alpha"))
    r = exact_ratio(num, den)
    assert r == a + 1
    assert exact_ratio(3 * n, 2 * n) == Fraction(3, 2)
    with pytest.raises(ValueError):
        exact_ratio(n ** 2, n + 1)


def test_triangle_ratio_constant_on_sl2(L):
    t = triangle()
    s2 = wheel(2)
    (s3, c3), = list(insert_at_vertex(s2, 0, t))
    probes = [(s2, L, "verma", (2,)), (s3, L, "verma", (2,)),
              (s2, L, "statesum", adjoint_rep(L))]
    value, report = ratio_character(t, probes)
    assert value == -2
    assert len(report) == 3


def test_triangle_kills_wheel_values_on_d21(D2):
    # chi(t) = 0 for this family: W(t.S4) = 0 while W(S4) != 0
    s4 = wheel(4)
    den = eval_verma(chi_bar(s4), D2, (3, 1, 1))
    assert not den.is_zero()
    (ins, c), = list(insert_at_vertex(s4, 0, triangle()))
    num = eval_verma(chi_bar(ins, c), D2, (3, 1, 1))
    assert num.is_zero()
    # ... and on the zero-value probes the multiplicative relation 0 = 0*W holds
    for base in (wheel(2),):
        w_base = eval_verma(chi_bar(base), D2, (3, 1, 1))
        (tins, tc), = list(insert_at_vertex(base, 0, triangle()))
        w_ins = eval_verma(chi_bar(tins, tc), D2, (3, 1, 1))
        assert w_ins == w_base * 0


def test_symmetrized_wheel_at_alpha_one():
    # coefficient of n^4 at alpha = 1 is 4! * 1728
    D1 = d21(Fraction(1))
    p = eval_verma(chi_bar(wheel(4)), D1, (3, 1, 1))
    assert p.coefficient_in("n", 4) == 41472


def test_triangle_character_vanishes_identically(D_sym):
    # the symbolic cross-check: the degree-1 component of Q[sigma2, sigma3]
    # is zero, so the measured triangle character must be zero identically
    s4 = wheel(4)
    (ins, c), = list(insert_at_vertex(s4, 0, triangle()))
    num = eval_verma(chi_bar(ins, c), D_sym, (3, 1, 1))
    assert num.is_zero()
    den = eval_verma(chi_bar(s4), D_sym, (3, 1, 1))
    assert not den.is_zero()


def test_ladder_acts_consistently(L, D2):
    # behavioral check of the x-family representative: insertion ratios are
    # probe independent on sl2, and zero values propagate multiplicatively
    # on D(2,1,2)
    from weightsys.diagrams import ladder

    x3 = ladder(3)
    s2 = wheel(2)
    (ts2, c1), = list(insert_at_vertex(s2, 0, triangle()))
    ratios = []
    for base, sgn in ((s2, 1), (ts2, c1)):
        (ins, ci), = list(insert_at_vertex(base, 0, x3))
        num = eval_verma(chi_bar(ins, ci * sgn), L, (2,))
        den = eval_verma(chi_bar(base, sgn), L, (2,))
        ratios.append(exact_ratio(num, den))
    assert ratios[0] == ratios[1] == -8
    (insd, cid), = list(insert_at_vertex(s2, 0, x3))
    assert eval_verma(chi_bar(insd, cid), D2, (3, 1, 1)).is_zero()


def test_schur_check_guards_the_state_sum(L):
    rep = adjoint_rep(L)
    # corrupt one matrix entry: the Schur check must catch it
    bad_cols = [[dict(col) for col in cols] for cols in rep.columns]
    bad_cols[0][0][1] = bad_cols[0][0].get(1, 0) + 1
    broken = evaluation.Representation(L, bad_cols, rep.parity, name="broken")
    with pytest.raises((SchurCheckError, AssertionError)):
        eval_state_sum(chord_diagram_from_word([(0, 1)], 2), L, broken)


def test_statesum_cost_guard(D2):
    with pytest.raises(evaluation.CostBoundError):
        eval_state_sum(wheel_on_circle(8), D2)
