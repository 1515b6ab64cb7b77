"""Exact arithmetic in Q(zeta_24) = Q[x]/(x^8 - x^4 + 1)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from .ratmath import UniPoly, as_rational, format_rational, parse_rational

DEGREE = 8
# Phi_24 = x^8 - x^4 + 1, constant term first
PHI24 = UniPoly((1, 0, 0, 0, -1, 0, 0, 0, 1))


class CycloElement:
    """Element of Q(zeta_24) in the power basis 1, z, ..., z^7.

    Stored as integer numerators over one positive common denominator,
    reduced to lowest terms, so equal elements have equal representations.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, coords=(0,) * DEGREE):
        cs = [as_rational(c) for c in coords]
        if len(cs) > DEGREE:
            cs = _reduce_rational(cs)
        cs += [Fraction(0)] * (DEGREE - len(cs))
        den = reduce(math.lcm, (c.denominator for c in cs), 1)
        self._set(tuple(int(c * den) for c in cs), den)

    @classmethod
    def _raw(cls, num, den) -> "CycloElement":
        obj = cls.__new__(cls)
        obj._set(tuple(num), den)
        return obj

    def _set(self, num, den):
        g = reduce(math.gcd, num, den)
        if g > 1:
            num = tuple(n // g for n in num)
            den //= g
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("CycloElement is immutable")

    # -- constructors
    @classmethod
    def from_rational(cls, x) -> "CycloElement":
        x = as_rational(x)
        return cls._raw((x.numerator,) + (0,) * (DEGREE - 1), x.denominator)

    @classmethod
    def zeta(cls, k: int = 1) -> "CycloElement":
        """zeta_24 ** k for any integer k."""
        k %= 24
        out = cls.from_rational(1)
        z = cls._raw((0, 1, 0, 0, 0, 0, 0, 0), 1)
        for _ in range(k):
            out = out * z
        return out

    # -- views
    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self._den) for n in self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self._num[0], self._den)

    def __bool__(self):
        return any(self._num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElement.from_rational(other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self._num, self._den))

    def __repr__(self):
        return f"CycloElement({[format_rational(c) for c in self.coords]})"

    # -- arithmetic
    @staticmethod
    def _lift(x) -> "CycloElement":
        if isinstance(x, CycloElement):
            return x
        return CycloElement.from_rational(x)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self._den, other._den
        den = a * b // math.gcd(a, b)
        fa, fb = den // a, den // b
        return CycloElement._raw(
            (x * fa + y * fb for x, y in zip(self._num, other._num)), den
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloElement._raw((-x for x in self._num), self._den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = as_rational(other)
            return CycloElement._raw(
                (x * other.numerator for x in self._num), self._den * other.denominator
            )
        if not isinstance(other, CycloElement):
            return NotImplemented
        a, b = self._num, other._num
        prod = [0] * (2 * DEGREE - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloElement._raw(_reduce_int(prod), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloElement":
        return cyclo_inverse(self)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloElement.from_rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coords]

    @classmethod
    def from_json(cls, data) -> "CycloElement":
        if len(data) != DEGREE:
            raise ValueError("cyclotomic element needs 8 coordinates")
        return cls(parse_rational(s) for s in data)


def _reduce_int(prod: list[int]) -> list[int]:
    # x^k = x^(k-4) - x^(k-8) for k >= 8
    for k in range(len(prod) - 1, DEGREE - 1, -1):
        c = prod[k]
        if c:
            prod[k - 4] += c
            prod[k - 8] -= c
    return prod[:DEGREE]


def _reduce_rational(cs: list[Fraction]) -> list[Fraction]:
    return list((UniPoly(cs) % PHI24).coeffs)


def cyclo_inverse(x: CycloElement) -> CycloElement:
    """Inverse via the extended Euclidean algorithm against Phi_24."""
    if not x:
        raise ZeroDivisionError("inverse of zero in Q(zeta_24)")
    a, b = UniPoly(x.coords), PHI24
    s0, s1 = UniPoly((1,)), UniPoly()
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
    # a is a nonzero constant since Phi_24 is irreducible
    inv = s0 * (1 / a.coeffs[0])
    return CycloElement((inv % PHI24).coeffs)


_SYMBOLS = {
    "zeta3": lambda: CycloElement.zeta(8),
    "zeta4": lambda: CycloElement.zeta(6),
    "zeta8": lambda: CycloElement.zeta(3),
    "zeta24": lambda: CycloElement.zeta(1),
    "sqrt-2": lambda: CycloElement.zeta(3) + CycloElement.zeta(9),
    "sqrt-3": lambda: 2 * CycloElement.zeta(8) + 1,
    "1/sqrt-2": lambda: cyclo_inverse(CycloElement.zeta(3) + CycloElement.zeta(9)),
    "1/sqrt-3": lambda: cyclo_inverse(2 * CycloElement.zeta(8) + 1),
}


def embed_root(symbol: str) -> CycloElement:
    """The named algebraic number as an element of Q(zeta_24).

    Accepted: zeta3, zeta4, zeta8, zeta24, sqrt-2, sqrt-3, 1/sqrt-2, 1/sqrt-3.
    """
    try:
        return _SYMBOLS[symbol]()
    except KeyError:
        raise ValueError(f"unknown symbol {symbol!r}") from None


class CycloMatrix2:
    """2x2 matrix over Q(zeta_24), entries ((a, b), (c, d))."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        lift = CycloElement._lift
        object.__setattr__(self, "a", lift(a))
        object.__setattr__(self, "b", lift(b))
        object.__setattr__(self, "c", lift(c))
        object.__setattr__(self, "d", lift(d))

    def __setattr__(self, name, value):
        raise AttributeError("CycloMatrix2 is immutable")

    @classmethod
    def identity(cls) -> "CycloMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def scalar(cls, lam) -> "CycloMatrix2":
        return cls(lam, 0, 0, lam)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        if not isinstance(other, CycloMatrix2):
            return CycloMatrix2(*(e * other for e in self.entries))
        return CycloMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __rmul__ = __mul__

    def det(self) -> CycloElement:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "CycloMatrix2":
        di = self.det().inverse()
        return CycloMatrix2(self.d * di, -self.b * di, -self.c * di, self.a * di)

    def is_scalar(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def __eq__(self, other):
        return isinstance(other, CycloMatrix2) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"CycloMatrix2{self.entries}"
