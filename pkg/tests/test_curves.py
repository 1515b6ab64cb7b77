import math
import random
from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, strategies as st

from congruence_lab.curves import (
    WeierstrassCurve,
    ap,
    has_good_reduction,
    integralize,
    invariants,
    is_cm_j,
    is_prime,
    non_isogeny_witness,
    primes_up_to,
    quadratic_twist,
)
from congruence_lab.errors import BadReduction, SingularCurve, Unsupported


def naive_count(E, p):
    """#E(F_p) by testing every (x, y) on the long Weierstrass equation."""
    a1, a2, a3, a4, a6 = (int(a) % p for a in E.integral_model.ainvs)
    n = 1
    for x in range(p):
        rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def legendre(d, p):
    d %= p
    if d == 0:
        return 0
    return 1 if pow(d, (p - 1) // 2, p) == 1 else -1


def random_curve(rng, size=30):
    while True:
        ai = [rng.randint(-size, size) for _ in range(5)]
        try:
            return WeierstrassCurve(*ai)
        except SingularCurve:
            continue


def test_invariants_cm_curve():
    E = WeierstrassCurve.short(1, 0)
    inv = invariants(E)
    assert (inv.c4, inv.c6, inv.disc, inv.j) == (-48, 0, -64, 1728)
    assert WeierstrassCurve.short(0, 1).j == 0


def test_invariants_of_large_curve():
    E = WeierstrassCurve(1, 0, 0, -21666120, -57035036608)
    inv = E.invariants
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.disc
    assert inv.j == inv.c4**3 / inv.disc
    assert inv.c4 == 1 + 48 * 21666120
    assert inv.J == inv.j / 1728


def test_singular_rejected():
    with pytest.raises(SingularCurve):
        WeierstrassCurve.short(0, 0)
    with pytest.raises(SingularCurve):
        WeierstrassCurve.short(-3, 2)


@given(st.integers(0, 10**6))
def test_klein_relation_on_random_curves(seed):
    E = random_curve(random.Random(seed))
    assert E.c4**3 - E.c6**2 == 1728 * E.disc


def test_twist_examples():
    E = WeierstrassCurve(1, -1, 0, 4, 3)
    T1 = quadratic_twist(E, 1)
    assert (T1.c4, T1.c6, T1.disc) == (E.c4, E.c6, E.disc)
    T4 = quadratic_twist(E, 4)
    assert T4.j == E.j
    assert T4.c4 == 16 * E.c4 and T4.disc == 4**6 * E.disc
    with pytest.raises(ValueError):
        quadratic_twist(E, 0)


@given(st.integers(0, 10**6), st.fractions(max_denominator=50).filter(lambda d: d != 0))
def test_twist_scales_invariants(seed, d):
    E = random_curve(random.Random(seed))
    T = quadratic_twist(E, d)
    assert T.j == E.j
    assert (T.c4, T.c6, T.disc) == (d * d * E.c4, d**3 * E.c6, d**6 * E.disc)


def test_integralize_examples():
    E = WeierstrassCurve(1, 2, 3, 4, 5)
    assert integralize(E) == E
    F = integralize(WeierstrassCurve(0, 0, 0, Q(1, 4), Q(1, 8)))
    assert F.ainvs == (0, 0, 0, 4, 8)  # u = 2


@given(st.lists(st.builds(Q, st.integers(-99, 99), st.integers(1, 60)), min_size=5, max_size=5))
def test_integralize_keeps_j(ai):
    try:
        E = WeierstrassCurve(*ai)
    except SingularCurve:
        assume(False)
    F = integralize(E)
    assert all(a.denominator == 1 for a in F.ainvs)
    assert F.j == E.j


def test_integralize_is_minimal_scaling():
    # a4 = 1/9 needs u^4 divisible by 9, so u = 3 (u = sqrt 3 is not allowed)
    F = integralize(WeierstrassCurve(0, 0, 0, Q(1, 9), 1))
    assert F.ainvs == (0, 0, 0, 9, 729)


def test_ap_cm_curve():
    E = WeierstrassCurve.short(1, 0)
    assert naive_count(E, 3) == 4  # a_3 = 0 by direct count
    with pytest.raises(ValueError):
        ap(E, 3)
    assert ap(E, 5) == 5 + 1 - naive_count(E, 5)
    # supersingular at p = 3 mod 4
    assert all(ap(E, p) == 0 for p in (7, 11, 19, 23, 31))


def test_ap_bad_reduction():
    E = WeierstrassCurve(0, -1, 1, -10, -20)  # conductor 11
    with pytest.raises(BadReduction):
        ap(E, 11)
    assert [ap(E, p) for p in (5, 7, 13, 17, 19)] == [1, -2, 4, -2, 0]


def test_ap_matches_naive_on_random_instances():
    rng = random.Random(12)
    done = 0
    while done < 30:
        E = random_curve(rng)
        p = rng.choice([q for q in primes_up_to(50) if q > 3])
        if not has_good_reduction(E, p):
            continue
        assert ap(E, p) == p + 1 - naive_count(E, p)
        done += 1


@given(st.integers(0, 10**6), st.sampled_from([q for q in primes_up_to(500) if q > 3]))
def test_hasse_bound(seed, p):
    E = random_curve(random.Random(seed), 10**6)
    assume(has_good_reduction(E, p))
    assert ap(E, p) ** 2 <= 4 * p


@given(st.integers(0, 10**6), st.integers(1, 40))
def test_ap_invariant_under_square_twist(seed, k):
    E = random_curve(random.Random(seed))
    T = quadratic_twist(E, k * k)
    for p in (5, 7, 11, 13, 101):
        if has_good_reduction(E, p) and has_good_reduction(T, p):
            assert ap(E, p) == ap(T, p)


@given(st.integers(0, 10**6), st.sampled_from([-7, -3, -1, 2, 5, 6, 13]))
def test_ap_twist_sign(seed, d):
    E = random_curve(random.Random(seed))
    T = quadratic_twist(E, d)
    for p in (5, 7, 11, 17, 23, 29):
        if d % p and has_good_reduction(E, p) and has_good_reduction(T, p):
            assert ap(T, p) == legendre(d, p) * ap(E, p)


def test_good_reduction_examples(intro):
    E = WeierstrassCurve.short(1, 0)
    assert has_good_reduction(E, 5)
    assert not has_good_reduction(E, 2)
    E1 = intro[0]
    assert has_good_reduction(E1, 7) == (E1.disc.numerator % 7 != 0)


def test_cm_table():
    assert is_cm_j(0) and is_cm_j(1728) and is_cm_j(-3375)
    assert not is_cm_j(2)
    assert not is_cm_j(Q(1, 2))


def test_non_isogeny_witness_examples(intro):
    E = WeierstrassCurve(1, -1, 0, 4, 3)
    assert non_isogeny_witness(E, quadratic_twist(E, -7), 300) is None
    assert non_isogeny_witness(E, E, 300) is None
    p = non_isogeny_witness(*intro, 100)
    assert p is not None and p <= 100
    with pytest.raises(Unsupported):
        non_isogeny_witness(WeierstrassCurve.short(1, 0), E, 100)


def test_primes():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(561)
    assert all(is_prime(p) == all(p % q for q in range(2, math.isqrt(p) + 1)) for p in range(2, 400))


def test_json_round_trip():
    E = WeierstrassCurve(1, 0, 0, Q(-1, 3), 7)
    assert WeierstrassCurve.from_json(E.to_json()) == E
    assert WeierstrassCurve.from_json(["1", "0"]) == WeierstrassCurve.short(1, 0)
    with pytest.raises(ValueError):
        WeierstrassCurve.from_json(["1", "2", "3"])
