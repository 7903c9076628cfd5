"""Structural tests for sl2 and D(2,1,alpha)."""

import json
from fractions import Fraction

import pytest

from weightsys.scalars import MultiPoly, RationalFunction
from weightsys.superalgebras import (
    cartan_form_block,
    corrupt,
    d21,
    sl2,
    specialize_vogel_ring,
    validate,
)


@pytest.fixture(scope="module")
def D_sym():
    return d21()


@pytest.fixture(scope="module")
def D2():
    return d21(Fraction(2))


def test_sl2_defining_relations():
    L = sl2()
    e, h, f = L.index("e"), L.index("h"), L.index("f")
    assert L.bracket(h, e) == {e: 2}
    assert L.bracket(e, f) == {h: 1}
    rep = validate(L)
    assert rep["ok"], rep


def test_dimension_counts(D_sym):
    assert D_sym.dim == 17
    assert sum(D_sym.parity) == 8
    assert D_sym.parity.count(0) == 9


def test_defining_bracket_entries(D_sym):
    # [H1, v_{1,-1,-1}] = v_{1,-1,-1}
    h1, v = D_sym.index("H1"), D_sym.index("vpmm")
    assert D_sym.bracket(h1, v) == {v: MultiPoly.const(1, ("alpha",))}
    # [E1, F1] = H1, [E1, F2] = 0
    assert D_sym.bracket(D_sym.index("E1"), D_sym.index("F1")) == {D_sym.index("H1"): MultiPoly.const(1, ("alpha",))}
    assert D_sym.bracket(D_sym.index("E1"), D_sym.index("F2")) == {}


def test_simple_generators_close_onto_h1(D_sym):
    # [e1, f1] = ((alpha+1) H1 + H2 + alpha H3) / 2
    a = MultiPoly.variable("alpha")
    e1, f1 = D_sym.index("vpmm"), D_sym.index("vmpp")
    got = D_sym.bracket(e1, f1)
    assert got[D_sym.index("H1")] == (a + 1) * Fraction(1, 2)
    assert got[D_sym.index("H2")] == MultiPoly.const(Fraction(1, 2), ("alpha",))
    assert got[D_sym.index("H3")] == a * Fraction(1, 2)


def test_degenerate_alpha_rejected():
    with pytest.raises(ValueError):
        d21(0)
    with pytest.raises(ValueError):
        d21(-1)


def test_full_validation_symbolic(D_sym):
    rep = validate(D_sym)
    assert rep["ok"], {k: v for k, v in rep.items() if isinstance(v, dict) and not v["ok"]}


def test_full_validation_numeric(D2):
    assert validate(D2)["ok"]


def test_corrupted_constant_reports_witness(D_sym):
    bad = corrupt(D_sym, D_sym.index("E1"), D_sym.index("F1"), D_sym.index("H2"),
                  MultiPoly.const(1, ("alpha",)))
    rep = validate(bad, check_form=False)
    assert not rep["super_jacobi"]["ok"]
    assert rep["super_jacobi"]["failures"]


def test_cartan_form_block_matches_stated_matrix(D_sym):
    a = MultiPoly.variable("alpha")
    block = cartan_form_block(D_sym)
    assert block[0][0] == RationalFunction(MultiPoly.const(2), a + 1)
    assert block[1][1] == RationalFunction.from_scalar(-2)
    assert block[2][2] == RationalFunction(MultiPoly.const(-2), a)
    for i in range(3):
        for j in range(3):
            if i != j:
                assert block[i][j] == 0


def test_hstar_form_is_inverse_of_cartan_block(D_sym):
    # diag((1+alpha)/2, -1/2, -alpha/2)
    a = MultiPoly.variable("alpha")
    hs = D_sym.rootdata.hstar_form
    assert hs[0][0] == (a + 1) * Fraction(1, 2)
    assert hs[1][1] == MultiPoly.const(Fraction(-1, 2), ("alpha",))
    assert hs[2][2] == a * Fraction(-1, 2)


def test_positive_system_shape(D_sym):
    roots = D_sym.rootdata.positive_roots
    assert len(roots) == 7
    even = [r for r in roots if r[1] == 0]
    odd = [r for r in roots if r[1] == 1]
    assert sorted(r[0] for r in even) == [(0, 0, 2), (0, 2, 0), (2, 0, 0)]
    assert sorted(r[0] for r in odd) == [(1, -1, -1), (1, -1, 1), (1, 1, -1), (1, 1, 1)]


def test_highest_root_in_simple_coordinates(D_sym):
    rd = D_sym.rootdata
    simple_roots = [rd.root_of_basis[triple[0]] for triple in rd.simple]
    combo = [2 * simple_roots[0][i] + simple_roots[1][i] + simple_roots[2][i]
             for i in range(3)]
    assert tuple(combo) == rd.highest_root == (2, 0, 0)


def test_vogel_ring_specialization():
    a = MultiPoly.variable("a")
    b = MultiPoly.variable("b")
    c = MultiPoly.variable("c")
    al = MultiPoly.variable("alpha")
    s = (a + b + c).with_vars(("a", "b", "c"))
    assert specialize_vogel_ring(s).is_zero()
    sig2 = (a * b + a * c + b * c).with_vars(("a", "b", "c"))
    assert specialize_vogel_ring(sig2) == -1 - al - al ** 2
    sig3 = (a * b * c).with_vars(("a", "b", "c"))
    assert specialize_vogel_ring(sig3) == -al - al ** 2


def test_validation_report_serializes_to_json(D2):
    rep = validate(D2)
    blob = json.dumps({k: (v if not isinstance(v, dict)
                           else {"ok": v["ok"], "failures": [list(map(str, w)) for w in v["failures"]]})
                       for k, v in rep.items()}, sort_keys=True)
    assert json.loads(blob)["super_jacobi"]["ok"]
