"""The surfaces z^2 = F_{12,r}(u, v), their maps to pairs of j-invariants,
Hecke curves, blow-down expansions and a bounded-height point search."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import congruence as cg
from .curves import is_cm_j, non_isogeny_witness
from .errors import ChainPole, DegenerateJ, IdentityFailure, NotASquare, Unsupported
from .ratmath import (
    MultiPoly,
    UniPoly,
    as_rational,
    format_rational,
    height,
    is_nonzero_square,
    is_square,
    rational_root_values,
)

SURFACES = (1, 5, 7, 11)

_UV = ("u", "v")


def _check_r(r: int) -> int:
    if r not in SURFACES:
        raise ValueError(f"r must be one of {SURFACES}")
    return r


# ---------------------------------------------------------------------------
# the surface equations


def _f1(u, v):
    return (
        -4 * u**4
        - 2 * (2 * v**2 + 3) * u**3
        - (v**4 - 13 * v**2 + 3) * u**2
        + 2 * (5 * v**4 + 9 * v**2) * u
        + v**6
        - 6 * v**4
        + 9 * v**2
    )


def _f5(u, v):
    return (
        v**2 * u**8
        + 4 * v**2 * u**7
        + (-4 * v**4 - 20 * v**2 + 4) * u**6
        + (-12 * v**4 - 32 * v**2 - 8) * u**5
        + (6 * v**6 + 44 * v**4 + 160 * v**2 - 76) * u**4
        + (12 * v**6 + 64 * v**4 - 64 * v**2 + 352) * u**3
        + (-4 * v**8 - 28 * v**6 - 204 * v**4 - 232 * v**2 - 592) * u**2
        + (-4 * v**8 - 32 * v**6 + 72 * v**4 + 224 * v**2 + 448) * u
        + v**10
        + 4 * v**8
        + 40 * v**6
        + 52 * v**4
        - 32 * v**2
        - 128
    )


def _f7(u, v):
    return (
        -(u - 1)
        * ((v**2 + 1) * u + v**2 - 1)
        * (u**4 + 6 * u**3 + (-2 * v**2 + 12) * u**2 + (-6 * v**2 + 8) * u + v**4 - v**2)
    )


def _f11(u, v):
    return (
        -(u + 1)
        * ((v**4 + 6 * v**2 + 1) * u - 7 * v**4 - 2 * v**2 + 1)
        * (
            v**4 * u**4
            + 8 * v**4 * u**3
            + (-9 * v**6 + 24 * v**4 + 11 * v**2) * u**2
            + (-54 * v**6 - 36 * v**4 - 6 * v**2) * u
            + 27 * v**8
            + 27 * v**6
            + 9 * v**4
            - v**2
            - 1
        )
    )


_F_FUNCS = {1: _f1, 5: _f5, 7: _f7, 11: _f11}


@lru_cache(maxsize=None)
def surface_poly(r: int) -> MultiPoly:
    """F_{12,r} as a sparse polynomial in (u, v)."""
    u, v = MultiPoly.gens(_UV)
    return _F_FUNCS[_check_r(r)](u, v)


def F(r: int, u, v) -> Fraction:
    return as_rational(_F_FUNCS[_check_r(r)](as_rational(u), as_rational(v)))


def on_surface(r: int, u, v, z) -> bool:
    z = as_rational(z)
    return z * z == F(r, u, v)


@dataclass(frozen=True)
class SurfacePoint:
    r: int
    u: Fraction
    v: Fraction
    z: Fraction

    def __post_init__(self):
        if not on_surface(self.r, self.u, self.v, self.z):
            raise ValueError("point does not lie on the surface")

    @property
    def height(self) -> int:
        return max(height(self.u), height(self.v))

    def orbit(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Images under v -> -v and z -> -z (F is even in v)."""
        pts = {(self.u, sv * self.v, sz * self.z) for sv in (1, -1) for sz in (1, -1)}
        return sorted(pts)


# ---------------------------------------------------------------------------
# substitution chains


def _div(num, den, where: str) -> Fraction:
    if den == 0:
        raise ChainPole(where)
    return num / den


@dataclass
class ChainState:
    """Every intermediate coordinate on the way from (u, v) to (JJ', (J-1)(J'-1)).

    ``values`` maps coordinate names to exact rationals in the order they
    were computed.  ``witness_sets`` holds the witnesses found by root
    search rather than by a printed substitution.
    """

    r: int
    values: dict = field(default_factory=dict)
    witness_sets: dict = field(default_factory=dict)
    complete: bool = True

    def __getitem__(self, key):
        return self.values[key]

    def __contains__(self, key):
        return key in self.values

    @property
    def JJ(self) -> Fraction:
        return self.values["JJ"]

    @property
    def m(self) -> Fraction:
        return self.values["m"]

    @property
    def sigma(self) -> Fraction:
        return self.JJ + 1 - self.m

    @property
    def disc(self) -> Fraction:
        """(J - J')^2 = (J + J')^2 - 4 JJ'."""
        return self.sigma**2 - 4 * self.JJ

    def relations(self) -> dict[str, Fraction]:
        """Defining relations re-evaluated; every entry must be zero."""
        if not self.complete:
            raise ValueError("chain was run without witnesses")
        return _relations(self)

    def failed_relations(self) -> list[str]:
        return [k for k, val in self.relations().items() if val != 0]

    def to_json(self) -> dict:
        return {k: format_rational(v) for k, v in self.values.items()}


def _w31(a, b):
    M = -a * b + b * b - 2 * a - 2 * b
    K = a * a * b - 2 * a * b * b + b**3 + 2 * a * a + a * b - 2 * b * b + a + b
    den = (2 * b + 1) ** 3 * M * M
    JJ = _div(-((-2 * a * b + b * b - 4 * a - 4 * b) ** 3), den, "JJ' over W(3,1)")
    m = _div((b + 2) ** 2 * K * K, den, "(J-1)(J'-1) over W(3,1)")
    return JJ, m, M, K


def _w4(a, b):
    L = -2 * a * b + b * b + 2 * a + 2 * b
    den = (b - 1) ** 2 * (-a + b + 1) ** 4
    JJ = _div(16 * L**3, 27 * den, "JJ' over W(4,r)")
    m = _div(
        (a * a * b + 2 * a * b * b + b**3 - a * a + b * b - 2 * a + b + 1) ** 2,
        den,
        "(J-1)(J'-1) over W(4,r)",
    )
    return JJ, m, L


def _uv_to_st(r, u, v):
    if r == 1:
        D = u * v * v + u + 4 * v * v
        s = _div(-2 * u * u - u * v * v - u + 4 * v * v, D, "s")
        t = _div(
            2 * u * u * v * v - 4 * u * u + u * v**4 - 6 * u * v * v - 3 * u - 8 * v**4,
            (2 * u + v * v + 3) * D,
            "t",
        )
        w = _div(
            36 * v * (u + 2) * (u + v * v + 1) * (u + 2 * v * v) * (2 * u * u + u * v * v + u - 4 * v * v) ** 2,
            (2 * u + v * v + 3) ** 2 * D**3,
            "w'",
        )
    elif r == 7:
        D = u**3 + u * u - u * v * v - 3 * u - v * v + 1
        s = _div((u - 1) * (u * u - v * v + 4 * u + 1), D, "s")
        t = _div(u**3 - u * v * v + 7 * u * u - v * v + 9 * u + 1, D, "t")
        w = _div(36 * u * v * (u + 2) * (u * u + 4 * u - v * v + 1), D * D, "w'")
    elif r == 5:
        D = u * u - 2 * u - v * v
        s = _div(-u * u + v * v + 2 * u - 2, D, "s")
        t = _div(2 * u - 2, D, "t")
        w = _div(2 * v, D, "w'")
    else:
        D = u * v * v + u + v * v + 1
        s = _div(-u * v * v + u - 3 * v * v - 1, D, "s")
        t = _div(-u + 1, u + 1, "t")
        w = _div(2 * v, v * v + 1, "w'")
    return s, t, w


def square_class_claim(r: int, s, t) -> Fraction:
    """The printed representative of the square class of the double-cover function."""
    if r == 1:
        return 3 * s * (t - 1) * (-s + 2 * t + 1) * (3 * s + 2 * t + 1) * (s * t + 2 * s - 2 * t - 1)
    if r == 7:
        return 3 * (t - 1) * (
            -9 * s**3 + 12 * s * s * t + 4 * s * t * t + 15 * s * s + 4 * s * t - 12 * t * t + s - 12 * t - 3
        )
    if r == 5:
        return -s * s + t * t + 1
    return -(s + t) * (s + t + 2)


def _h(s, t):
    h1 = s**3 + (3 * t + 6) * s**2 + (3 * t**2 + 12 * t + 12) * s + 3 * t**3 + 6 * t**2 + 12 * t + 8
    h2 = 4 * s**3 + 4 * s**2 * t - 3 * s * t**2 - 2 * s * t - 6 * s - 3 * t**3 - 2 * t + 2
    h3 = (
        2 * s**4
        + (4 * t + 4) * s**3
        + (5 * t**2 + 18 * t + 12) * s**2
        + (6 * t**3 + 20 * t**2 + 24 * t + 10) * s
        + 3 * t**4
        + 6 * t**3
        + 11 * t**2
        + 8 * t
        - 1
    )
    return h1, h2, h3


def _g(c, d):
    D3 = 2 * d**3 + 1
    g1 = 8 * D3 * (c * c - 6 * c + 9 * D3)
    g2 = (3 * d**4 - 8 * d**3 - 4) * c * c + 24 * (d * d + 1) * D3 * c + 12 * D3 * D3
    g3 = _div(d**6 * c**3 - 8 * D3**2 * c**2 + 48 * D3**2 * c - 8 * D3**3, c**4 * d**8, "g3")
    return g1, g2, g3


def _chain_17(st: ChainState, s, t):
    V = st.values
    p = _div(
        -4 * (s - 3) * (s + 1) * (3 * s - 2 * t - 1) ** 2,
        3 * (s - 1) ** 2 * (s - 2 * t - 1) * (3 * s + 2 * t + 1),
        "p",
    )
    qp = _div(8 * s * (t - 1), 3 * (s - 1) * (s - 2 * t - 1), "q'")
    g4p = _div(4 * s * (s - 3) * (3 * s - 2 * t - 1), (s - 1) * (s - 2 * t - 1) * (3 * s + 2 * t + 1), "gamma4'")
    q = _div((g4p * g4p - 3 * p + 4 * g4p - 8) * qp - 2 * p * g4p - 4 * p + 4 * g4p - 16, 6 * g4p, "q")
    V.update(p=p, q_prime=qp, gamma4_prime=g4p, q=q)
    c = _div(
        p**3 * q + 6 * p * p * q * q + 9 * p * q**3 + 12 * p * q * q - 12 * p * q + 9 * q**4 + 12 * q**3 - 24 * q * q - 16 * q + 16,
        2 * q * q * (3 * q * q + 4),
        "c",
    )
    d = _div(2, q, "d")
    b4p = p / q
    a, b = c, (d * d - 1) / 2
    V.update(c=c, d=d, beta4_prime=b4p, a=a, b=b, alpha4_prime=d)
    JJ, m, M, K = _w31(a, b)
    V.update(JJ=JJ, m=m, M=M, K=K)


def _witness_17(st: ChainState):
    V = st.values
    p, q, g4p, c, d, b4p = V["p"], V["q"], V["gamma4_prime"], V["c"], V["d"], V["beta4_prime"]
    b, JJ, m, M, K = V["b"], V["JJ"], V["m"], V.pop("M"), V.pop("K")
    alpha4 = _div(-(b + 2) * K, (2 * b + 1) ** 2 * M, "alpha4") * d
    beta4 = _div(
        (d**4 - 4 * c * d * d - 10 * d * d - 12 * c + 9)
        * ((d * d - 2 * d - 3) * b4p - d**4 + 2 * c * d * d + 2 * d**3 + 6 * d * d + 6 * c - 6 * d - 9),
        2 * d**3 * (d**4 - 2 * c * d * d - 6 * d * d - 6 * c + 5) * b4p,
        "beta4",
    )
    gamma4 = _div(
        (2 * p**3 * q + 12 * p * p * q * q + 18 * p * q**3 + 9 * q**4 + 24 * p * q * q + 24 * q**3 - 24 * p * q - 8 * q * q - 32 * q + 16)
        ** 2,
        64 * (p + 4 * q - 4) * (p + q + 2) ** 3,
        "gamma4",
    ) * g4p
    V.update(alpha4=alpha4, beta4=beta4, gamma4=gamma4, delta4=3 * (JJ - (alpha4 + 1) ** 2))
    # (3,1) witnesses are not printed: recover every rational chain pointwise
    sigma = JJ + 1 - m
    st.witness_sets["31"] = [
        (al, be, de) for al, be, de in cg.chains_31(JJ, m, sigma) if de is not None
    ]


def _chain_511(st: ChainState, s, t):
    V = st.values
    h1, h2, h3 = _h(s, t)
    V.update(h1=h1, h2=h2, h3=h3)
    c = _div(6 * (s + t) * h1, h3, "c")
    d = _div(t, s + t + 2, "d")
    b3p = _div(-4 * (s - 1) * (s * s + s * t + s + 2 * t + 1) * h1, (s + t + 2) ** 2 * h3, "beta3'")
    thp = _div(2 * h1 * h2, (s + t + 2) ** 2 * h3, "theta'")
    V.update(c=c, d=d, beta3_prime=b3p, theta_prime=thp)
    E = c + 2 * d**3 + 1
    a = _div(-c * d**3 + 8 * d**3 + 4, 2 * E, "a")
    b = _div(-c + 2 * d**3 + 1, E, "b")
    a3p = _div(-c * d * d, E, "alpha3'")
    V.update(a=a, b=b, alpha3_prime=a3p)
    JJ, m, L = _w4(a, b)
    V.update(JJ=JJ, m=m, L=L)


def _witness_511(st: ChainState):
    V = st.values
    c, d, a, b, a3p = V["c"], V["d"], V["a"], V["b"], V["alpha3_prime"]
    b3p, thp, JJ, m, L = V["beta3_prime"], V["theta_prime"], V["JJ"], V["m"], V.pop("L")
    alpha3 = _div(2 * L, 3 * (b - 1) * (-a + b + 1) ** 2, "alpha3") * a3p
    g1, g2, g3 = _g(c, d)
    V.update(g1=g1, g2=g2, g3=g3)
    D3 = 2 * d**3 + 1
    den = 3 * (b3p + 2 * D3)
    theta = _div(g3 * g3 * (g1 * thp + g2 * b3p + 2 * D3 * g2), den, "theta")
    beta3 = _div(g3 * (-3 * (d * d * c + 4 * D3) * b3p + 2 * D3 * (2 * c * c - 3 * (d * d + 4) * c + 6 * D3)), den, "beta3")
    V.update(alpha3=alpha3, theta=theta, beta3=beta3)
    # the (4,r) witnesses are not printed: alpha4 = +-sqrt(m), keep signs with a full chain
    root = is_square(m)
    chains = []
    if root is not None:
        for a4 in {root, -root}:
            for b4 in cg.beta_candidates_2(JJ, a4):
                for g4 in cg.gamma_candidates_4(JJ, b4):
                    chains.append((a4, b4, g4))
    st.witness_sets["4"] = chains


def chain(r: int, u, v, witnesses: bool = True) -> ChainState:
    """Run the substitution chain for Z(12, r) at (u, v).

    With ``witnesses=False`` only the coordinates leading to JJ' and
    (J-1)(J'-1) are computed, so poles of the witness formulas alone do
    not abort the computation.
    """
    r = _check_r(r)
    u, v = as_rational(u), as_rational(v)
    st = ChainState(r)
    s, t, w = _uv_to_st(r, u, v)
    st.values.update(u=u, v=v, s=s, t=t, w_prime=w)
    if r in (1, 7):
        _chain_17(st, s, t)
        finish = _witness_17
    else:
        _chain_511(st, s, t)
        finish = _witness_511
    if witnesses:
        finish(st)
    else:
        for k in ("M", "K", "L"):
            st.values.pop(k, None)
    st.complete = witnesses
    return st


def _relations(st: ChainState) -> dict[str, Fraction]:
    V = st.values
    s, t, JJ, m = V["s"], V["t"], V["JJ"], V["m"]
    out = {"w'^2 = claim": V["w_prime"] ** 2 - square_class_claim(st.r, s, t)}
    if st.r in (1, 7):
        p, qp, g4p, c, d = V["p"], V["q_prime"], V["gamma4_prime"], V["c"], V["d"]
        b4p = V["beta4_prime"]
        a4, b4, g4 = V["alpha4"], V["beta4"], V["gamma4"]
        out["quadric in (p, q', gamma4')"] = 3 * qp * qp - 2 * g4p * qp + 8 * qp + p + 4
        out["alpha4'^2 = 2b + 1"] = d * d - (2 * V["b"] + 1)
        out["beta4' cubic"] = (
            b4p**3 + 6 * b4p**2 - 3 * (d + 1) * (d - 3) * b4p
            - (2 * c * d * d + 6 * c - d**4 + 2 * d**3 + 6 * d * d - 6 * d - 9)
        )
        out["alpha4^2 = m"] = a4 * a4 - m
        out["beta4 cubic"] = b4**3 - 3 * JJ * b4 - 2 * JJ * (a4 + 1)
        out["gamma4 quartic"] = g4**4 - 6 * JJ * b4 * g4**2 - 16 * JJ**2 * g4 + 3 * JJ**2 * (4 * JJ - b4 * b4)
    else:
        c, d, b3p, thp = V["c"], V["d"], V["beta3_prime"], V["theta_prime"]
        a3, b3, th = V["alpha3"], V["beta3"], V["theta"]
        out["quadric e1"] = (
            2 * b3p**2 - 2 * b3p * thp - thp**2 + (-8 * d**3 - 4) * b3p + (-8 * d**3 - 4) * thp
            + c * c * d**4 - 8 * c * d**5 - 4 * c * d * d
        )
        out["quadric e2"] = (
            -3 * b3p**2 + 3 * thp**2 - 6 * c * d * d * b3p - 3 * c * c * d**4
            + 8 * c * c * d**3 - 48 * c * d**3 + 4 * c * c - 24 * c
        )
        out["alpha3'^3"] = V["alpha3_prime"] ** 3 - 2 * (V["b"] - 1) * (-V["a"] + V["b"] + 1) ** 2
        out["alpha3^3 = JJ'"] = a3**3 - JJ
        out["beta3^2 = theta"] = b3 * b3 - th
        out["theta quadric"] = th * th - 6 * (a3 + 1) * m * th - 8 * m * m * b3 - 3 * ((a3 - 1) * m) ** 2
        out["beta3 quartic"] = b3**4 - 6 * (a3 + 1) * m * b3**2 - 8 * m * m * b3 - 3 * (a3 - 1) ** 2 * m * m
    return out


def witness_products(st: ChainState) -> list[Fraction]:
    """The double-cover function for each admissible witness choice.

    r = 1: alpha4 delta4 delta3; r = 7: alpha4 delta3;
    r = 5: alpha4 delta4 beta3; r = 11: alpha4 beta3.
    """
    V = st.values
    out = []
    if st.r in (1, 7):
        a4, d4 = V["alpha4"], V["delta4"]
        for _, _, d3 in st.witness_sets["31"]:
            out.append(a4 * d4 * d3 if st.r == 1 else a4 * d3)
    else:
        b3 = V["beta3"]
        for a4 in sorted({a for a, _, _ in st.witness_sets["4"]}):
            d4 = 3 * (st.JJ - (a4 + 1) ** 2)
            out.append(a4 * d4 * b3 if st.r == 5 else a4 * b3)
    return out


# ---------------------------------------------------------------------------
# j-invariants


@dataclass(frozen=True)
class JPair:
    j1: Fraction
    j2: Fraction

    def __post_init__(self):
        a, b = as_rational(self.j1), as_rational(self.j2)
        if (b.numerator, b.denominator) < (a.numerator, a.denominator):
            a, b = b, a
        object.__setattr__(self, "j1", a)
        object.__setattr__(self, "j2", b)

    def to_json(self) -> list[str]:
        return [format_rational(self.j1), format_rational(self.j2)]


def jpair(r: int, u, v, z=None) -> JPair:
    """The unordered pair of j-invariants represented by a surface point."""
    if z is not None and not on_surface(r, u, v, z):
        raise NotASquare("z^2 != F(u, v): point is not on the surface")
    st = chain(r, u, v, witnesses=False)
    root = is_square(st.disc)
    if root is None:
        raise NotASquare("(J - J')^2 recovered from the chain is not a rational square")
    J1 = (st.sigma + root) / 2
    J2 = (st.sigma - root) / 2
    j1, j2 = 1728 * J1, 1728 * J2
    for j in (j1, j2):
        if j == 0 or j == 1728:
            raise DegenerateJ(f"j-invariant {j} on this point")
    return JPair(j1, j2)


# ---------------------------------------------------------------------------
# Hecke curves: one polynomial per table row, s = +1 / -1 the two sign choices


def _hecke_tables():
    T = {}
    T[1] = {
        13: lambda u, v, s: s * v + 1,
        25: lambda u, v, s: 2 * u + v * v + s * 2 * v + 1,
        37: lambda u, v, s: 2 * u * u + (v * v + s * 2 * v + 1) * u + s * v**3 - 3 * v * v + s * 3 * v - 1,
        49: lambda u, v, s: 4 * u * u + 2 * (3 * v * v + s * 2 * v + 3) * u + v**4 + s * 4 * v**3 + 6 * v * v + s * 4 * v + 1,
        61: lambda u, v, s: (
            4 * u**3 + 2 * (v * v + s * 2 * v + 5) * u * u
            + (-(v**4) + s * 6 * v**3 - 4 * v * v + s * 10 * v + 5) * u
            + s * v**5 - 5 * v**4 + s * 10 * v**3 - 10 * v * v + s * 5 * v - 1
        ),
    }
    T[5] = {
        17: lambda u, v, s: u + s * v,
        29: lambda u, v, s: u * u + 2 * u - v * v + s * 2 * v - 4,
        41: lambda u, v, s: u**3 - (s * v - 2) * u * u + (-v * v - 12) * u + s * v**3 - 2 * v * v + s * 4 * v + 8,
        53: lambda u, v, s: u**4 - (2 * v * v + s * 4 * v) * u * u + (s * 8 * v - 16) * u + v**4 + s * 4 * v**3 + 8 * v * v + 16,
    }
    T[7] = {
        19: lambda u, v, s: 1 + s * v,
        31: lambda u, v, s: u * u - (s * v - 1) * u + s * 2 * v - 2,
        43: lambda u, v, s: -(s * v - 1) * u * u + (v * v + s * 2 * v + 1) * u + 2 * v * v - 2,
        55: lambda u, v, s: (v * v - s * 6 * v + 1) * u * u + (-2 * v * v + s * 4 * v - 2) * u - v**4 - s * 2 * v**3 + s * 2 * v + 1,
    }
    T[11] = {
        11: lambda u, v, s: 1 + s * v,
        23: lambda u, v, s: s * v * u + v * v + s * v + 1,
        35: lambda u, v, s: -(s * v**3 + s * 3 * v) * u - v**4 + s * 3 * v**3 + s * v + 1,
        47: lambda u, v, s: (s * 3 * v**3 + 2 * v * v + s * 3 * v) * u + v**4 + s * v**3 + 4 * v * v + s * v + 1,
        59: lambda u, v, s: (-3 * v**4 + s * 3 * v**3 - v * v + s * v) * u + s * v**5 + 8 * v**4 + s * 7 * v**3 + 11 * v * v + s * 4 * v + 1,
        71: lambda u, v, s: (
            (s * 7 * v**5 + s * 10 * v**3 - s * v) * u
            + v**6 - s * v**5 + 15 * v**4 + s * 10 * v**3 + 15 * v * v + s * 7 * v + 1
        ),
    }
    return T


HECKE_TABLES = _hecke_tables()


def hecke_polynomial(r: int, m: int, sign: int = 1):
    """The Hecke-curve equation for row m as a callable of (u, v)."""
    f = HECKE_TABLES[_check_r(r)][m]
    return lambda u, v: f(as_rational(u), as_rational(v), sign)


def hecke_membership(r: int, u, v) -> list[int]:
    u, v = as_rational(u), as_rational(v)
    rows = HECKE_TABLES[_check_r(r)]
    return sorted(m for m, f in rows.items() if f(u, v, 1) == 0 or f(u, v, -1) == 0)


# ---------------------------------------------------------------------------
# blow-down expansions

BLOWDOWN_PRINTED = {
    (5, 1): UniPoly((4, -11, Fraction(-1, 4))),  # (-t^2 - 44t + 16)/4
    (5, -1): UniPoly((4, 11, Fraction(-1, 4))),
    (7, 1): UniPoly((-27, 52, 4)),
    (7, -1): UniPoly((-27, -52, 4)),
}


def blowdown_series(r: int, sign: int, order: int = 5) -> list[UniPoly]:
    """Coefficients of e^0 .. e^(order-1) of F along the blow-up chart, in Q[t]."""
    if r not in (5, 7) or sign not in (1, -1):
        raise ValueError("blow-down charts exist for r in {5, 7} and sign +1/-1")
    names = ("e", "t")
    e, t = MultiPoly.gens(names)
    if r == 5:
        u = (3 - e) * Fraction(1, 2)
        v = (sign + sign * e + e * e * t) * Fraction(1, 2)
    else:
        u = -e
        v = sign + sign * e + e * e * t
    expanded = surface_poly(r).substitute([u, v])
    coeffs = [dict() for _ in range(order)]
    for (ke, kt), c in expanded.terms.items():
        if ke < order:
            coeffs[ke][kt] = coeffs[ke].get(kt, 0) + c
    out = []
    for cs in coeffs:
        deg = max(cs, default=-1)
        out.append(UniPoly([cs.get(i, 0) for i in range(deg + 1)]))
    return out


def blowdown_coefficient(r: int, sign: int) -> UniPoly:
    """The e^4 coefficient, checked against the printed leading form."""
    series = blowdown_series(r, sign)
    for k in range(4):
        if series[k]:
            raise IdentityFailure(f"e^{k} coefficient does not vanish: {series[k]}")
    lead = series[4]
    if lead != BLOWDOWN_PRINTED[(r, sign)]:
        raise IdentityFailure(f"e^4 coefficient {lead} differs from the printed form")
    return lead


# ---------------------------------------------------------------------------
# point search


def rationals_of_height(H: int, nonnegative: bool = False) -> list[Fraction]:
    """All p/q in lowest terms with max(|p|, q) <= H, sorted by (height, value)."""
    out = set()
    for q in range(1, H + 1):
        for p in range(-H, H + 1):
            if nonnegative and p < 0:
                continue
            if math.gcd(p, q) == 1:
                out.add(Fraction(p, q))
    return sorted(out, key=lambda x: (height(x), x))


def _v_polynomial(r: int, u: Fraction) -> tuple[list[int], int]:
    """F(u, v) = (sum_k A_k v^k) / L with integer A_k; returns (A, L)."""
    poly = surface_poly(r)
    coeffs: dict[int, Fraction] = {}
    for (ku, kv), c in poly.terms.items():
        coeffs[kv] = coeffs.get(kv, 0) + c * u**ku
    deg = max(coeffs)
    cs = [as_rational(coeffs.get(k, 0)) for k in range(deg + 1)]
    L = math.lcm(*(c.denominator for c in cs))
    return [int(c * L) for c in cs], L


def _search_u(args):
    r, u, vs = args
    A, L = _v_polynomial(r, u)
    deg = len(A) - 1
    found = []
    for v in vs:
        c, e = v.numerator, v.denominator
        # F = N / (L e^deg); F is a square iff N L e^deg is
        N = 0
        cp = 1
        ep = e**deg
        for a in A:
            if a:
                N += a * cp * ep
            cp *= c
            ep //= e
        val = N * L * e**deg
        if val < 0:
            continue
        root = math.isqrt(val)
        if root * root == val:
            z = Fraction(root, L * e**deg)
            found.append((u, v, z))
    return found


@dataclass(frozen=True)
class SearchHit:
    point: SurfacePoint
    hecke: tuple[int, ...]
    jpair: JPair | None
    nonisogeny_prime: int | None
    note: str | None = None

    def to_json(self) -> dict:
        P = self.point
        return {
            "r": P.r,
            "u": format_rational(P.u),
            "v": format_rational(P.v),
            "z": format_rational(P.z),
            "height": P.height,
            "hecke": list(self.hecke),
            "j1": format_rational(self.jpair.j1) if self.jpair else None,
            "j2": format_rational(self.jpair.j2) if self.jpair else None,
            "nonisogeny_prime": self.nonisogeny_prime,
        }


def annotate(P: SurfacePoint, skip_hecke: bool = False, isogeny_bound: int = 100) -> SearchHit:
    hecke = () if skip_hecke else tuple(hecke_membership(P.r, P.u, P.v))
    jp = None
    prime = None
    note = None
    try:
        jp = jpair(P.r, P.u, P.v, P.z)
    except (ChainPole, NotASquare, DegenerateJ) as exc:
        note = f"{type(exc).__name__}: {exc}"
    if jp is not None and jp.j1 != jp.j2 and not (is_cm_j(jp.j1) or is_cm_j(jp.j2)):
        try:
            prime = non_isogeny_witness(cg.base_curve(jp.j1), cg.base_curve(jp.j2), isogeny_bound)
        except Unsupported:
            prime = None
    return SearchHit(P, hecke, jp, prime, note)


def search(
    r: int,
    height_bound: int,
    workers: int = 1,
    skip_hecke: bool = False,
    annotate_points: bool = True,
) -> list[SearchHit]:
    """Points of height <= height_bound on z^2 = F_{12,r}(u, v).

    One representative per orbit under v -> -v, z -> -z (v >= 0, z >= 0).
    Output is sorted by (height, u, v) and independent of ``workers``.
    """
    r = _check_r(r)
    if height_bound < 1:
        raise ValueError("height bound must be at least 1")
    us = rationals_of_height(height_bound)
    vs = rationals_of_height(height_bound, nonnegative=True)
    tasks = [(r, u, vs) for u in us]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_search_u, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        chunks = [_search_u(t) for t in tasks]
    raw = [SurfacePoint(r, u, v, z) for chunk in chunks for (u, v, z) in chunk]
    raw.sort(key=lambda P: (P.height, P.u, P.v))
    if not annotate_points:
        return [SearchHit(P, (), None, None) for P in raw]
    return [annotate(P, skip_hecke) for P in raw]


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def find_square_along(r: int, curve, H: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Points (u, v, z) with v = curve(u) for u of height <= H and F(u, v) a square."""
    out = []
    for u in rationals_of_height(H):
        try:
            v = as_rational(curve(u))
        except ZeroDivisionError:
            continue
        root = is_square(F(r, u, v))
        if root is not None:
            out.append((u, v, root))
    return out


__all__ = [
    "SURFACES",
    "F",
    "surface_poly",
    "on_surface",
    "SurfacePoint",
    "ChainState",
    "chain",
    "square_class_claim",
    "witness_products",
    "JPair",
    "jpair",
    "HECKE_TABLES",
    "hecke_polynomial",
    "hecke_membership",
    "blowdown_series",
    "blowdown_coefficient",
    "rationals_of_height",
    "search",
    "annotate",
    "SearchHit",
    "find_square_along",
    "is_nonzero_square",
    "rational_root_values",
]
