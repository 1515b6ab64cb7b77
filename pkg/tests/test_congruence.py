import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from congruence_lab import congruence as cg
from congruence_lab.curves import WeierstrassCurve, quadratic_twist
from congruence_lab.errors import NoWitness, SingularCurve, Unsupported
from congruence_lab.ratmath import UniPoly

TAGS = {"ex121": 1, "ex127": 7, "ex1211": 11}


def cleared_integer_roots(coeffs):
    """Rational roots by the rational root theorem after clearing denominators."""
    from math import isqrt, lcm

    cs = [Q(c) for c in coeffs]
    L = lcm(*(c.denominator for c in cs))
    ints = [int(c * L) for c in cs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divs(n):
        small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
        return sorted(set(small + [n // d for d in small]))

    p = UniPoly(ints)
    return {x for a in divs(a0) for b in divs(an) for x in (Q(a, b), Q(-a, b)) if p(x) == 0}


def check_witness(verdict, E, E2):
    """Re-substitute the stored witnesses into their defining polynomials."""
    d = cg.pair_data(E, E2)
    w = verdict.witness
    N, r = verdict.level
    if N in (2, 4):
        assert w.alpha**2 == d.m
        assert w.beta**3 - 3 * d.pi * w.beta - 2 * d.pi * (w.alpha + 1) == 0
    if N == 4:
        g, b, pi = w.gamma, w.beta, d.pi
        assert g**4 - 6 * pi * b * g * g - 16 * pi * pi * g + 3 * pi * pi * (4 * pi - b * b) == 0
        assert w.delta == 3 * (pi - (w.alpha + 1) ** 2)
    if (N, r) == (3, 1):
        assert w.alpha**3 - 3 * d.pi * w.alpha - d.pi * d.sigma == 0
        m, a, b = d.m, w.alpha, w.beta
        assert b**4 - 6 * m * b * b - 8 * m * m * b - 3 * (4 * a + 1) * m * m == 0
    if (N, r) == (3, 2):
        assert w.alpha**3 == d.pi


# -- (2,1)

def test_twist_is_2_congruent():
    E = WeierstrassCurve(1, -1, 0, 4, 3)
    v = cg.test_2_1(E, quadratic_twist(E, 5))
    assert v.congruent
    check_witness(v, E, quadratic_twist(E, 5))


def test_family_is_2_congruent(pairs_at_2):
    E, E2 = pairs_at_2["ex121"]
    v = cg.test_2_1(E, E2)
    assert v.congruent
    check_witness(v, E, E2)


def test_non_2_congruent_pair():
    E, E2 = cg.base_curve(2 * 1728), cg.base_curve(3 * 1728)
    v = cg.test_2_1(E, E2)
    assert not v.congruent and v.obstruction == "no-rational-alpha"
    scan = cg.ap_scan(E, E2, 2, 200)
    assert not scan.passed and scan.failing_prime == 5


def test_cm_j_unsupported():
    E = WeierstrassCurve.short(1, 0)
    with pytest.raises(Unsupported):
        cg.test_2_1(E, WeierstrassCurve(1, -1, 0, 4, 3))
    with pytest.raises(Unsupported):
        cg.test_3_1(WeierstrassCurve.short(0, 1), WeierstrassCurve(1, -1, 0, 4, 3))


def test_equal_j_unsupported():
    E = WeierstrassCurve(1, -1, 0, 4, 3)
    for f in (cg.test_3_1, cg.test_3_2):
        with pytest.raises(Unsupported):
            f(E, quadratic_twist(E, 3))
    with pytest.raises(Unsupported):
        cg.test_4_r(E, quadratic_twist(E, 3), 1)


# -- (3, r)

def test_3_1_on_families(pairs_at_2):
    v = cg.test_3_1(*pairs_at_2["ex127"])
    assert v.congruent
    check_witness(v, *pairs_at_2["ex127"])
    assert not cg.test_3_1(*pairs_at_2["ex1211"]).congruent


def test_3_2_on_families(pairs_at_2):
    v = cg.test_3_2(*pairs_at_2["ex1211"])
    assert v.congruent
    check_witness(v, *pairs_at_2["ex1211"])
    assert not cg.test_3_2(*pairs_at_2["ex127"]).congruent


def test_generic_pair_has_no_alpha():
    X, Y = WeierstrassCurve.short(-1, 1), WeierstrassCurve.short(2, 3)
    d = cg.pair_data(X, Y)
    v = cg.test_3_1(X, Y)
    assert not v.congruent and v.obstruction == "no-rational-alpha"
    assert cleared_integer_roots([-d.pi * d.sigma, -3 * d.pi, 0, 1]) == set()
    v = cg.test_3_2(X, Y)
    assert not v.congruent and v.obstruction == "no-rational-alpha"
    assert cg.is_cube(d.pi) is None


def test_xi_value():
    # J = J' = -1: JJ' = 1, J + J' = -2
    assert cg.xi_value(-1, -1) == 1 + 3 * -2 - 27 + 3 * 4 + -8
    # cube roots 2 and -2/3 give (2 + 1)(1/3) = 1
    J = Q(8)
    J2 = (Q(1, 3) - 1) ** 3
    assert cg.xi_value(J, J2) == 0


# -- (4, r)

def test_4_r_on_families(pairs_at_2):
    v = cg.test_4_r(*pairs_at_2["ex121"], 1)
    assert v.congruent and v.witness.which_tau_branch == "r1mod4"
    check_witness(v, *pairs_at_2["ex121"])
    v = cg.test_4_r(*pairs_at_2["ex127"], 3)
    assert v.congruent and v.witness.which_tau_branch == "r3mod4"
    check_witness(v, *pairs_at_2["ex127"])
    assert not cg.test_4_r(*pairs_at_2["ex121"], 3).congruent


# -- (12, r)

def test_12_11_intro_pair(intro):
    v = cg.test_12_r(*intro, 11)
    assert v.congruent
    for c in v.components:
        check_witness(c, *intro)
    for r in (1, 5, 7):
        assert not cg.test_12_r(*intro, r).congruent


@pytest.mark.parametrize("name", sorted(TAGS))
def test_power_exclusivity(pairs_at_2, name):
    E, E2 = pairs_at_2[name]
    accepted = [r for r in (1, 5, 7, 11) if cg.test_12_r(E, E2, r).congruent]
    assert accepted == [TAGS[name]]


@pytest.mark.parametrize("name", sorted(TAGS))
def test_symmetry(pairs_at_2, name):
    E, E2 = pairs_at_2[name]
    for N, r in ((2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (12, 1), (12, 5), (12, 7), (12, 11)):
        assert cg.test(E, E2, N, r).congruent == cg.test(E2, E, N, r).congruent


@given(st.sampled_from(sorted(TAGS)), st.fractions(max_denominator=30).filter(lambda d: d != 0 and abs(d) < 30))
def test_simultaneous_twist_invariance(pairs_at_2, name, d):
    E, E2 = pairs_at_2[name]
    T, T2 = quadratic_twist(E, d), quadratic_twist(E2, d)
    for r in (1, 5, 7, 11):
        assert cg.test_12_r(E, E2, r).congruent == cg.test_12_r(T, T2, r).congruent


def test_verdict_json(intro):
    js = cg.test_12_r(*intro, 11).to_json()
    assert js["congruent"] and js["N"] == 12 and js["r"] == 11
    assert all(isinstance(c["witness"]["alpha"], str) for c in js["components"])


def test_verdict_invariants():
    with pytest.raises(ValueError):
        cg.CongruenceVerdict((2, 1), True)
    with pytest.raises(ValueError):
        cg.CongruenceVerdict((2, 1), False)


# -- a_p scan

def test_ap_scan_examples(pairs_at_2):
    assert cg.ap_scan(*pairs_at_2["ex1211"], 12, 1000).passed
    E = WeierstrassCurve(1, -1, 0, 4, 3)
    assert cg.ap_scan(E, quadratic_twist(E, -11), 2, 500).passed
    rep = cg.ap_scan(WeierstrassCurve.short(-1, 1), WeierstrassCurve.short(2, 3), 3, 200)
    assert not rep.passed and rep.failing_prime is not None
    with pytest.raises(ValueError):
        cg.ap_scan(E, E, 1, 100)


# -- twist resolution

def test_resolve_twist_intro(intro):
    E, E2 = intro
    for level, tester in (((3, 2), cg.test_3_2), ((4, 3), lambda a, b: cg.test_4_r(a, b, 3)), ((12, 11), lambda a, b: cg.test_12_r(a, b, 11))):
        A, B = cg.resolve_twist(E.j, E2.j, level)
        assert (A.j, B.j) == (E.j, E2.j)
        assert tester(A, B).congruent


def test_resolve_twist_errors(intro):
    E = intro[0]
    with pytest.raises(Unsupported):
        cg.resolve_twist(E.j, E.j, (3, 2))
    X, Y = WeierstrassCurve.short(-1, 1), WeierstrassCurve.short(2, 3)
    with pytest.raises(NoWitness):
        cg.resolve_twist(X.j, Y.j, (3, 2))


def test_twist_property_random():
    rng = random.Random(3)
    done = 0
    while done < 20:
        try:
            E = WeierstrassCurve.short(rng.randint(-50, 50), rng.randint(-50, 50))
        except SingularCurve:
            continue
        if E.j in (0, 1728):
            continue
        d = Q(rng.randint(-99, 99) or 1, rng.randint(1, 20))
        assert cg.test_2_1(E, quadratic_twist(E, d)).congruent
        done += 1
