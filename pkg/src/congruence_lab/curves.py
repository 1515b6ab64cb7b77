"""Elliptic curves over Q: invariants, twists, reduction and traces of Frobenius."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import BadReduction, SingularCurve, Unsupported
from .ratmath import as_rational, format_rational, parse_rational

# The thirteen rational j-invariants with complex multiplication
# (class number one orders).
CM_J_INVARIANTS = frozenset(
    Fraction(j)
    for j in (
        0,
        1728,
        -3375,
        8000,
        -32768,
        54000,
        287496,
        -884736,
        -12288000,
        16581375,
        -884736000,
        -147197952000,
        -262537412640768000,
    )
)


@dataclass(frozen=True)
class CurveInvariants:
    b2: Fraction
    b4: Fraction
    b6: Fraction
    b8: Fraction
    c4: Fraction
    c6: Fraction
    disc: Fraction
    j: Fraction

    @property
    def J(self) -> Fraction:
        return self.j / 1728


def _b_c_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction = field(default=Fraction(0))
    a2: Fraction = field(default=Fraction(0))
    a3: Fraction = field(default=Fraction(0))
    a4: Fraction = field(default=Fraction(0))
    a6: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.invariants.disc == 0:
            raise SingularCurve(f"singular Weierstrass model {self.ainvs}")

    @classmethod
    def short(cls, A, B) -> "WeierstrassCurve":
        return cls(0, 0, 0, A, B)

    @classmethod
    def from_c4_c6(cls, c4, c6) -> "WeierstrassCurve":
        """The short model whose c4, c6 are exactly the given values."""
        return cls.short(-as_rational(c4) / 48, -as_rational(c6) / 864)

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "WeierstrassCurve":
        vals = [parse_rational(s) if isinstance(s, str) else as_rational(s) for s in data]
        if len(vals) == 2:
            return cls.short(*vals)
        if len(vals) == 5:
            return cls(*vals)
        raise ValueError("curve needs 5 a-invariants or 2 short coefficients [A, B]")

    def to_json(self) -> list[str]:
        return [format_rational(a) for a in self.ainvs]

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @cached_property
    def invariants(self) -> CurveInvariants:
        b2, b4, b6, b8, c4, c6, disc = _b_c_invariants(*self.ainvs)
        j = c4**3 / disc if disc else Fraction(0)
        return CurveInvariants(b2, b4, b6, b8, c4, c6, disc, j)

    @property
    def c4(self) -> Fraction:
        return self.invariants.c4

    @property
    def c6(self) -> Fraction:
        return self.invariants.c6

    @property
    def disc(self) -> Fraction:
        return self.invariants.disc

    @property
    def j(self) -> Fraction:
        return self.invariants.j

    @property
    def J(self) -> Fraction:
        return self.invariants.J

    @cached_property
    def integral_model(self) -> "WeierstrassCurve":
        return integralize(self)

    def __str__(self):
        return "[" + ", ".join(format_rational(a) for a in self.ainvs) + "]"


def invariants(E: WeierstrassCurve) -> CurveInvariants:
    return E.invariants


def quadratic_twist(E: WeierstrassCurve, d) -> WeierstrassCurve:
    """Twist by d: c4 -> d^2 c4, c6 -> d^3 c6 (short model)."""
    d = as_rational(d)
    if d == 0:
        raise ValueError("twist parameter must be nonzero")
    return WeierstrassCurve.from_c4_c6(d * d * E.c4, d**3 * E.c6)


# ---------------------------------------------------------------------------
# integral models

_SMALL_PRIMES: list[int] = []


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, f in enumerate(sieve) if f]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, strong probable prime beyond."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int, max_iter: int = 20000) -> int | None:
    if n % 2 == 0:
        return 2
    for c in range(1, 6):
        x = y = 2
        g = 1
        it = 0
        while g == 1 and it < max_iter:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            g = math.gcd(abs(x - y), n)
            it += 1
        if 1 < g < n:
            return g
    return None


def _split(n: int) -> list[int]:
    """Split n > 1 into factors: primes where found, else unfactored atoms."""
    if _SMALL_PRIMES == []:
        _SMALL_PRIMES.extend(primes_up_to(1 << 12))
    out = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            out.append(p)
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        f = _pollard_rho(m)
        if f is None:
            out.append(m)
        else:
            stack += [f, m // f]
    return out


def _coprime_base(nums: list[int]) -> list[int]:
    base = [n for n in set(nums) if n > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for k in range(i + 1, len(base)):
                a, b = base[i], base[k]
                g = math.gcd(a, b)
                if g > 1:
                    rest = [x for idx, x in enumerate(base) if idx not in (i, k)]
                    base = list({x for x in rest + [g, a // g, b // g] if x > 1})
                    changed = True
                    break
            if changed:
                break
    return base


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def integralize(E: WeierstrassCurve) -> WeierstrassCurve:
    """Scale (x, y) -> (u^2 x, u^3 y) with the least u making all a_i integral.

    Denominators are factored by trial division and Pollard rho; any
    cofactor that resists is treated as squarefree, which can only make u
    larger (never leaves a denominator).
    """
    weights = (1, 2, 3, 4, 6)
    dens = [a.denominator for a in E.ainvs]
    if all(d == 1 for d in dens):
        return E
    atoms = []
    for d in dens:
        if d > 1:
            atoms += _split(d)
    base = _coprime_base(atoms)
    u = 1
    for b in base:
        need = 0
        for w, d in zip(weights, dens):
            e = _valuation(d, b)
            need = max(need, -(-e // w))
        u *= b**need
    return WeierstrassCurve(*(a * u**w for a, w in zip(E.ainvs, weights)))


def has_good_reduction(E: WeierstrassCurve, p: int) -> bool:
    """p does not divide the discriminant of the integralized model."""
    return E.integral_model.disc.numerator % p != 0


def is_cm_j(j) -> bool:
    return as_rational(j) in CM_J_INVARIANTS


# ---------------------------------------------------------------------------
# point counting


@lru_cache(maxsize=None)
def _square_counts(p: int) -> tuple[int, ...]:
    counts = [0] * p
    for y in range(p):
        counts[y * y % p] += 1
    return tuple(counts)


@lru_cache(maxsize=1 << 16)
def _ap_short(A: int, B: int, p: int) -> int:
    sq = _square_counts(p)
    total = 1  # point at infinity
    for x in range(p):
        total += sq[(x * x * x + A * x + B) % p]
    return p + 1 - total


def ap(E: WeierstrassCurve, p: int) -> int:
    """Trace of Frobenius a_p = p + 1 - #E(F_p) by exhaustive counting."""
    if p in (2, 3):
        raise ValueError("a_p is only computed for p not dividing 6")
    F = E.integral_model
    if F.disc.numerator % p == 0:
        raise BadReduction(f"bad reduction at {p} for {E}")
    # y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic to F over Z[1/6]
    c4 = int(F.c4) % p
    c6 = int(F.c6) % p
    return _ap_short(-27 * c4 % p, -54 * c6 % p, p)


def non_isogeny_witness(E: WeierstrassCurve, E2: WeierstrassCurve, bound: int) -> int | None:
    """Least good prime p <= bound with a_p(E)^2 != a_p(E2)^2, if any.

    For non-CM curves a returned prime rules out any isogeny over Qbar,
    since such an isogeny descends to Q after a quadratic twist.
    """
    if is_cm_j(E.j) or is_cm_j(E2.j):
        raise Unsupported("geometric non-isogeny test needs non-CM curves")
    for p in primes_up_to(bound):
        if p < 5:
            continue
        if not (has_good_reduction(E, p) and has_good_reduction(E2, p)):
            continue
        if ap(E, p) ** 2 != ap(E2, p) ** 2:
            return p
    return None
