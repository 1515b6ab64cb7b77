"""Explicit congruent families over Q(t), the (12,11) pair of conductor
4976690, the K3 fibration on Z(12,1) with its section, and the auxiliary
rank-one curve C attached to Z(12,5)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .curves import WeierstrassCurve
from .errors import BadParameter, SingularCurve
from .ratmath import UniPoly, as_rational, is_square


def _desc(*coeffs) -> UniPoly:
    """UniPoly from coefficients listed from the top degree down."""
    return UniPoly(tuple(reversed(coeffs)))


def _even(terms: dict[int, int]) -> UniPoly:
    """UniPoly from {exponent: coefficient}."""
    deg = max(terms)
    return UniPoly(tuple(terms.get(k, 0) for k in range(deg + 1)))


T = UniPoly.x()

# ---------------------------------------------------------------------------
# (12,1): the curve 2u + v^2 + 3v = 0 on Z(12,1)

P121 = _desc(36, 234, 693, 1530, 2808, 4128, 4964, 4792, 3652, 2000, 736, 160, 16)
Q121 = _desc(
    432, 4320, 20196, 63720, 159111, 330453, 581103, 875862, 1137762, 1270440,
    1208628, 960528, 622592, 320528, 127472, 37728, 7840, 1024, 64,
)
P121p = _desc(55396, -97238, 230581, -206878, 177280, -86384, 2612, -6600, 900, -1008, 288, 288, 144)
Q121p = _desc(
    26076112, -62137376, 165178492, -207914808, 236336753, -163049017, 71325401,
    -36145662, 7345854, -7544088, 2972844, 1350576, 531072, -137808, -17712,
    -4320, 14688, 6912, 1728,
)

# ---------------------------------------------------------------------------
# (12,7): the curve u^2 + 3u - 2v^2 + 2 = 0 on Z(12,7)

P127 = _even({18: 1, 16: -18, 14: 135, 12: -729, 10: 2889, 8: -7533, 6: 15093, 4: -15795, 2: 53946, 0: 2187})
Q127 = _even({
    26: 1, 24: -27, 22: 309, 20: -2133, 18: 10341, 16: -35559, 14: 85158,
    12: -109350, 10: -141345, 8: 1337715, 6: -3133971, 4: 4183731, 2: 3483891, 0: -59049,
})
P127p = _even({
    18: 1, 16: 222, 14: -585, 12: 5031, 10: -22599, 8: 78003, 6: -177147,
    4: 295245, 2: -354294, 0: 177147,
})
Q127p = _even({
    26: 1, 24: -531, 22: -5739, 20: 38691, 18: -148635, 16: 141345, 14: 984150,
    12: -6897798, 10: 25922511, 8: -67847301, 6: 125951517, 4: -164215269,
    2: 129140163, 0: -43046721,
})

# ---------------------------------------------------------------------------
# (12,11): one component of (9v^4 + 30v^2 + 5)u - 45v^4 - 6v^2 + 7 = 0 on Z(12,11)

G1211 = _even({6: 25, 4: 63, 2: 27, 0: -27})
A1211 = _even({6: 1, 4: 15, 2: 3, 0: -27})
B1211 = _even({8: 5, 6: -24, 4: -78, 0: 81})
D1211a = _even({4: 1, 2: -18, 0: -27})
D1211b = _even({4: 1, 2: 6, 0: -3})
P1211p = _even({
    20: 25, 18: 18, 16: -1971, 14: -16200, 12: -138942, 10: -367092,
    8: -500526, 6: -332424, 4: -13851, 2: 1458, 0: 6561,
})
Q1211p = _even({
    32: 3125, 30: 30000, 28: 94800, 26: 878688, 24: 25070580, 22: 173317968,
    20: 693690912, 18: 1821351744, 16: 3069524646, 14: 3140007120,
    12: 1733188752, 10: 288404064, 8: -233440380, 6: -163447632, 4: 7558272,
    0: -1594323,
})


def _ab_121(t):
    f = (t * t + 1) * (4 * t * t + 2 * t + 1)
    g = (t * t + 1) ** 2 * (4 * t * t + 2 * t + 1)
    return (
        (-3 * f * P121(t), -2 * g * Q121(t)),
        (-3 * f * P121p(t), 2 * g * Q121p(t)),
    )


def _ab_127(t):
    t2 = t * t
    f = (t2 + 3) * (t2 * t2 - 3 * t2 + 9)
    h1, h2 = t2 * t2 + 3, t2 * t2 + 27
    den = h1 * h2
    if den == 0:
        raise BadParameter("pole of the (12,7) family")
    return (
        (-3 * f * P127(t) / den, -2 * f * Q127(t) / den),
        (-3 * f * h1 * h2 * P127p(t), -2 * f * h1**2 * h2**2 * Q127p(t)),
    )


def _ab_1211(t):
    g = G1211(t)
    da, db = D1211a(t), D1211b(t)
    if da * db == 0 or g == 0:
        raise BadParameter("pole of the (12,11) family")
    return (
        (-3 * g * A1211(t) / (da * db), -2 * g * B1211(t) / (da * db)),
        (-3 * da * db * P1211p(t), -2 * da**2 * db**2 * Q1211p(t) / g),
    )


@dataclass(frozen=True)
class FamilySpec:
    name: str
    level: tuple[int, int]
    coefficients: Callable
    polynomials: dict
    description: str

    def short_coefficients(self, t):
        return self.coefficients(as_rational(t))


FAMILIES = {
    "ex121": FamilySpec(
        "ex121", (12, 1), _ab_121,
        {"p": P121, "q": Q121, "p'": P121p, "q'": Q121p},
        "(12,1) pair from the rational curve 2u + v^2 + 3v = 0",
    ),
    "ex127": FamilySpec(
        "ex127", (12, 7), _ab_127,
        {"p": P127, "q": Q127, "p'": P127p, "q'": Q127p},
        "(12,7) pair from the rational curve u^2 + 3u - 2v^2 + 2 = 0",
    ),
    "ex1211": FamilySpec(
        "ex1211", (12, 11), _ab_1211,
        {"g": G1211, "a": A1211, "b": B1211, "p'": P1211p, "q'": Q1211p},
        "(12,11) pair from (9v^4 + 30v^2 + 5)u - 45v^4 - 6v^2 + 7 = 0",
    ),
}


def family_pair(name: str, t) -> tuple[WeierstrassCurve, WeierstrassCurve]:
    """The specialised pair at t, as integral models."""
    try:
        spec = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    (A, B), (A2, B2) = spec.short_coefficients(t)
    try:
        E = WeierstrassCurve.short(A, B)
        E2 = WeierstrassCurve.short(A2, B2)
    except SingularCurve as exc:
        raise BadParameter(f"singular fibre of {name} at t = {t}") from exc
    return E.integral_model, E2.integral_model


# ---------------------------------------------------------------------------
# the (12,11) pair of conductor 4976690

INTRO_POINT = (Fraction(-19, 21), Fraction(3, 7), Fraction(1844480, 2470629))
INTRO_E = (1, 0, 0, -21666120, -57035036608)
INTRO_E2 = (1, 0, 0, 398520965, 166506419482597)


def intro_pair() -> tuple[WeierstrassCurve, WeierstrassCurve]:
    return WeierstrassCurve(*INTRO_E), WeierstrassCurve(*INTRO_E2)


# ---------------------------------------------------------------------------
# K3 fibration on Z(12,1)

K3_A = -27 * _even({8: 1, 6: 46, 4: 859, 2: -186, 0: 9})
K3_B = -54 * _even({12: 1, 10: 69, 8: 2082, 6: 24731, 4: -7848, 2: 621, 0: 27})
K3_SECTION_NUM = 3 * _even({8: 2, 6: 37, 4: 450, 2: -27, 0: 54})
K3_SECTION_DEN = _even({2: 1, 0: -3}) ** 2


def k3_section_x(t) -> Fraction:
    t = as_rational(t)
    den = K3_SECTION_DEN(t)
    if den == 0:
        raise BadParameter("section has a pole at t^2 = 3")
    return K3_SECTION_NUM(t) / den


def k3_section_check(t) -> bool:
    """Does the section specialise to a rational point of the fibre at t?"""
    t = as_rational(t)
    x = k3_section_x(t)
    return is_square(x**3 + K3_A(t) * x + K3_B(t)) is not None


# ---------------------------------------------------------------------------
# the curve C: eta^2 = xi^3 - xi^2 - 16 xi + 16 (None is the identity)

C_A2, C_A4, C_A6 = -1, -16, 16
C_POINT = (Fraction(0), Fraction(4))


def on_curve(P) -> bool:
    if P is None:
        return True
    x, y = map(as_rational, P)
    return y * y == x**3 + C_A2 * x * x + C_A4 * x + C_A6


def _check(P):
    if not on_curve(P):
        raise ValueError(f"{P} is not on the curve")
    return None if P is None else tuple(map(as_rational, P))


def neg(P):
    P = _check(P)
    return None if P is None else (P[0], -P[1])


def add(P, Q):
    P, Q = _check(P), _check(Q)
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * C_A2 * x1 + C_A4) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - C_A2 - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


def double(P):
    return add(P, P)


def multiply(P, k: int):
    out, base = None, _check(P)
    if k < 0:
        base, k = neg(base), -k
    while k:
        if k & 1:
            out = add(out, base)
        base = add(base, base)
        k >>= 1
    return out


def small_multiples(P, k: int = 12) -> list:
    """[P, 2P, ..., kP]."""
    out, acc = [], None
    for _ in range(k):
        acc = add(acc, P)
        out.append(acc)
    return out
