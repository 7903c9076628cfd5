"""Symmetric-polynomial character calculus and the certificate."""

import random
from fractions import Fraction

import pytest

from weightsys.characters import (
    FACTOR_LABELS,
    build_D_element,
    build_P,
    chi0_image_test,
    chi_prime_D,
    elementary,
    from_elementary,
    is_symmetric,
    load_family_table,
    parse_Q,
    p_factors,
    q_degree_and_t_check,
    specialize_alpha,
    sym_vars,
    to_elementary,
    vanishing_table,
)
from weightsys.scalars import MultiPoly


@pytest.fixture(scope="module")
def P():
    return build_P()


def test_P_degree_and_symmetry(P):
    assert P.degree() == 15
    assert is_symmetric(P)
    assert len(p_factors()) == len(FACTOR_LABELS) == 15


def test_P_at_unit_point(P):
    # t=3; prod(t+a)=64, prod(t-a)=8, prod(a+2b)=729, prod(3a-2t)=-27
    assert P.evaluate({"lam": 1, "mu": 1, "nu": 1}) == -10077696


def test_elementary_conversion_roundtrip():
    rng = random.Random(3)
    lam, mu, nu = sym_vars()
    for _ in range(5):
        q = MultiPoly(("e1", "e2", "e3"),
                      {(rng.randrange(3), rng.randrange(3), rng.randrange(2)):
                       Fraction(rng.randrange(-5, 6) or 1) for _ in range(4)})
        assert to_elementary(from_elementary(q)) == q


def test_image_membership():
    e1, e2, e3 = elementary()
    member, f, g = chi0_image_test(e1 ** 5)
    assert member and f.degree() == 5 and g.is_zero()
    member, f, g = chi0_image_test(build_P() * e2)
    assert member
    # exhibited decomposition reassembles the input
    M = (e1 + sym_vars()[0]) * (e1 + sym_vars()[1]) * (e1 + sym_vars()[2])
    rebuilt = from_elementary(f) + M * from_elementary(g)
    assert rebuilt == build_P() * e2
    member, _, _ = chi0_image_test(e2)
    assert not member


def test_chi_prime_kills_t_multiples():
    e1, e2, e3 = elementary()
    assert chi_prime_D(e1 * e2).is_zero()
    assert chi_prime_D(e1 ** 3).is_zero()


def test_chi_prime_of_P_matches_brute_force(P):
    s = chi_prime_D(P)
    s2 = MultiPoly.variable("sigma2").with_vars(("sigma2", "sigma3"))
    s3 = MultiPoly.variable("sigma3").with_vars(("sigma2", "sigma3"))
    assert s.poly == -27 * s3 ** 3 * (4 * s2 ** 3 + 27 * s3 ** 2)
    assert s.weighted_degree() == 15
    assert s.is_weighted_homogeneous()
    # independent expansion: the squared Vandermonde equals -4 e2^3 - 27 e3^2
    # modulo e1
    lam, mu, nu = sym_vars()
    disc = ((lam - mu) * (mu - nu) * (nu - lam)) ** 2
    de = to_elementary(disc).substitute({"e1": Fraction(0)})
    want = MultiPoly(("e2", "e3"), {(3, 0): Fraction(-4), (0, 2): Fraction(-27)})
    assert de.restrict_vars() == want.restrict_vars()


def test_chi_prime_is_multiplicative():
    rng = random.Random(11)
    e1, e2, e3 = elementary()
    gens = [e1, e2, e3, e2 + e3, e1 * e1 - 3 * e2]
    for _ in range(6):
        p = gens[rng.randrange(len(gens))] * gens[rng.randrange(len(gens))]
        q = gens[rng.randrange(len(gens))]
        lhs = chi_prime_D(p * q)
        rhs = chi_prime_D(p) * chi_prime_D(q)
        assert lhs.poly == rhs.poly


def test_alpha_specialization(P):
    sigma = chi_prime_D(P)
    poly, roots, sq = specialize_alpha(sigma)
    assert poly.degree_in("alpha") == 12
    assert not poly.is_zero()
    # full rational root multiset; alpha = 1 really is a root:
    # 4*sigma2^3 + 27*sigma3^2 at (-3, -2) is -108 + 108 = 0
    assert [(str(r), m) for r, m in roots] == [
        ("-2", 2), ("-1", 3), ("-1/2", 2), ("0", 3), ("1", 2)]
    assert poly.evaluate({"alpha": Fraction(2)}) == -2332800
    assert poly.evaluate({"alpha": Fraction(1)}) == 0
    assert sq.degree_in("alpha") == 5
    # sigma3 image alone vanishes exactly at the excluded parameters 0, -1
    s3 = MultiPoly.variable("sigma3")
    from weightsys.characters import SigmaPoly
    p3, roots3, _ = specialize_alpha(SigmaPoly(s3.with_vars(("sigma2", "sigma3"))))
    assert [(str(r), m) for r, m in roots3] == [("-1", 1), ("0", 1)]


def test_vanishing_table_and_nondegeneracy(P):
    rep = vanishing_table(P)
    assert rep["ok"]
    families = {row["family"]: row for row in rep["rows"]}
    assert families["sl"]["vanishing_factors"] == ["t-nu"]
    assert families["so"]["vanishing_factors"] == ["mu+2*lam"]
    assert families["sp"]["vanishing_factors"] == ["lam+2*mu"]
    for name in ("exc", "g2", "f4", "e6", "e7", "e8"):
        assert families[name]["vanishing_factors"] == ["3*nu-2*t"]
    # multiplicativity: P*Q vanishes too
    e1, e2, e3 = elementary()
    assert vanishing_table(P * e2)["ok"]
    assert vanishing_table(P * (e3 + e2 * e1))["ok"]


def test_q_parsing_and_constraints():
    e1, e2, e3 = elementary()
    assert parse_Q("e2") == e2
    assert parse_Q("e2^2") == e2 * e2
    assert parse_Q("e2*e3") == e2 * e3
    assert q_degree_and_t_check(parse_Q("1")) == (0, False)
    assert q_degree_and_t_check(parse_Q("e2"))[0] == 2
    assert q_degree_and_t_check(parse_Q("t*e2")) == (3, True)


def test_certificates():
    b15 = build_D_element(4, q_spec="1")
    assert b15["d"] == 15 and b15["character_level"]["ok"]
    b17 = build_D_element(4, q_spec="e2")
    assert b17["d"] == 17
    assert b17["character_level"]["alpha_specialization"]["degree"] == 12 + 2
    with pytest.raises(ValueError):
        build_D_element(4, q_spec="t*e2")
    # realizable insertion degrees skip 16
    degrees = {build_D_element(4, q_spec=q)["d"]
               for q in ("1", "e2", "e3", "e2^2", "e2*e3", "e3^2")}
    assert sorted(degrees) == [15, 17, 18, 19, 20, 21]


def test_every_shipped_family_parses():
    fams = load_family_table()
    assert [f.name for f in fams] == ["sl", "so", "sp", "exc", "g2", "f4", "e6", "e7", "e8"]
    assert all(len(f.triple) == 3 for f in fams)
