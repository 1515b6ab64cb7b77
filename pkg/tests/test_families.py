import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from congruence_lab import congruence as cg
from congruence_lab import families as fa
from congruence_lab import moduli as mo
from congruence_lab.curves import non_isogeny_witness
from congruence_lab.errors import BadParameter
from congruence_lab.ratmath import is_square, rational_roots

TAGS = {"ex121": 1, "ex127": 7, "ex1211": 11}

# (degree, {exponent: coefficient}) read off the printed displays
CHECKSUMS = {
    "P121": (12, {12: 36, 6: 4964, 0: 16}),
    "Q121": (18, {18: 432, 9: 1270440, 0: 64}),
    "P121p": (12, {12: 55396, 7: -86384, 0: 144}),
    "Q121p": (18, {18: 26076112, 13: -163049017, 0: 1728}),
    "P127": (18, {18: 1, 8: -7533, 0: 2187}),
    "Q127": (26, {26: 1, 10: -141345, 0: -59049}),
    "P127p": (18, {18: 1, 16: 222, 0: 177147}),
    "Q127p": (26, {24: -531, 12: -6897798, 0: -43046721}),
    "G1211": (6, {6: 25, 2: 27, 0: -27}),
    "A1211": (6, {6: 1, 4: 15, 0: -27}),
    "B1211": (8, {8: 5, 6: -24, 0: 81}),
    "D1211a": (4, {4: 1, 2: -18, 0: -27}),
    "D1211b": (4, {4: 1, 2: 6, 0: -3}),
    "P1211p": (20, {20: 25, 12: -138942, 0: 6561}),
    "Q1211p": (32, {32: 3125, 16: 3069524646, 2: 0}),
    "K3_A": (8, {8: -27, 4: -27 * 859, 0: -27 * 9}),
    "K3_B": (12, {12: -54, 6: -54 * 24731, 0: -54 * 27}),
}


@pytest.mark.parametrize("name", sorted(CHECKSUMS))
def test_transcription_checksum(name):
    poly = getattr(fa, name)
    degree, spots = CHECKSUMS[name]
    assert poly.degree == degree
    for k, c in spots.items():
        assert poly.coeffs[k] == c


def test_q1211p_constant_term():
    assert fa.Q1211p.coeffs[0] == -1594323 == -(3**13)


def random_t(rng, H=30):
    while True:
        t = Q(rng.randint(-H, H), rng.randint(1, H))
        if max(abs(t.numerator), t.denominator) <= H:
            return t


@pytest.mark.parametrize("name", sorted(TAGS))
def test_family_at_2(pairs_at_2, name):
    E, E2 = pairs_at_2[name]
    assert all(a.denominator == 1 for a in E.ainvs + E2.ainvs)
    accepted = [r for r in (1, 5, 7, 11) if cg.test_12_r(E, E2, r).congruent]
    assert accepted == [TAGS[name]]
    assert cg.ap_scan(E, E2, 12, 500).passed
    p = non_isogeny_witness(E, E2, 100)
    assert p is not None and p <= 100


@pytest.mark.parametrize("name", sorted(TAGS))
def test_family_random_parameters(name):
    rng = random.Random(name)
    done = 0
    while done < 5:
        t = random_t(rng)
        try:
            E, E2 = fa.family_pair(name, t)
        except BadParameter:
            continue
        v = cg.test_12_r(E, E2, TAGS[name])
        assert v.congruent, (name, t)
        assert cg.ap_scan(E, E2, 12, 200).passed
        done += 1


@pytest.mark.parametrize("name", sorted(TAGS))
def test_families_not_isotrivial(name):
    (E, E2), (F, F2) = fa.family_pair(name, 2), fa.family_pair(name, 5)
    assert E.j != F.j and E2.j != F2.j


def test_ex121_singular_fibres():
    for t in (0, Q(-2, 3), Q(3, 2)):
        with pytest.raises(BadParameter):
            fa.family_pair("ex121", t)


def test_ex127_singular_fibres():
    for t in (0, 1, -1, 3, -3):
        with pytest.raises(BadParameter):
            fa.family_pair("ex127", t)


def test_unknown_family():
    with pytest.raises(ValueError):
        fa.family_pair("ex999", 2)


def test_family_from_string_parameter():
    assert fa.family_pair("ex127", "2") == fa.family_pair("ex127", 2)


def test_ex1211_parametrises_its_curve():
    # the family lies over (9v^4 + 30v^2 + 5)u - 45v^4 - 6v^2 + 7 = 0 on Z(12,11)
    for v in (Q(1, 2), Q(2), Q(-3, 5), Q(3)):
        u = (45 * v**4 + 6 * v**2 - 7) / (9 * v**4 + 30 * v**2 + 5)
        assert is_square(mo.F(11, u, v)) not in (None, 0)


# -- the conductor 4976690 pair

def test_intro_pair(intro):
    E, E2 = intro
    assert E.ainvs == (1, 0, 0, -21666120, -57035036608)
    assert cg.test_12_r(E, E2, 11).congruent
    assert non_isogeny_witness(E, E2, 100) is not None
    u, v, z = fa.INTRO_POINT
    assert mo.on_surface(11, u, v, z)
    jp = mo.jpair(11, u, v, z)
    assert {jp.j1, jp.j2} == {E.j, E2.j}


# -- K3 fibration

def test_k3_section():
    assert fa.k3_section_check(2)
    assert fa.k3_section_check(0)
    assert rational_roots(fa.K3_SECTION_DEN) == []  # t^2 = 3 has no rational solution
    for t in (Q(7, 4), Q(-26, 15), Q(97, 56)):  # close to sqrt 3
        assert fa.k3_section_check(t)


@given(st.builds(Q, st.integers(-40, 40), st.integers(1, 40)))
def test_k3_section_specialises(t):
    assert fa.k3_section_check(t)


# -- the curve C

def test_curve_c_base_point():
    P = fa.C_POINT
    assert fa.on_curve(P)
    assert fa.double(P) == (5, 6)
    assert fa.on_curve(fa.double(P))
    assert fa.multiply(P, 3) == (Q(-96, 25), Q(-308, 125))


def test_curve_c_infinite_order():
    mults = fa.small_multiples(fa.C_POINT, 12)
    assert len(mults) == 12
    assert all(M is not None and fa.on_curve(M) for M in mults)
    # Mazur: a torsion point has order <= 12
    assert fa.multiply(fa.C_POINT, 4) == (Q(1105, 144), Q(-29233, 1728))


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_curve_c_group_law(a, b, c):
    P = fa.C_POINT
    A, B, C = fa.multiply(P, a), fa.multiply(P, b), fa.multiply(P, c)
    assert fa.add(fa.add(A, B), C) == fa.add(A, fa.add(B, C))
    assert fa.add(A, B) == fa.add(B, A) == fa.multiply(P, a + b)
    assert fa.add(A, None) == A
    assert fa.add(A, fa.neg(A)) is None


def test_curve_c_torsion_points():
    T = (Q(1), Q(0))  # 1 - 1 - 16 + 16 = 0
    assert fa.on_curve(T)
    assert fa.double(T) is None


def test_curve_c_rejects_off_curve():
    with pytest.raises(ValueError):
        fa.add((0, 5), fa.C_POINT)
