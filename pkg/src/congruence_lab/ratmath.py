"""Exact rational arithmetic, perfect powers and certified rational roots.

Rationals are :class:`fractions.Fraction` throughout.  Univariate polynomials
are dense (:class:`UniPoly`), multivariate ones sparse (:class:`MultiPoly`)
over any exact field whose elements support ``+ - *`` and truthiness.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from operator import add
from typing import Iterable, Sequence

Rational = Fraction

MAX_ROOT_DEGREE = 8


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational string")
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal notation is not exact: {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {s!r}") from None


def format_rational(x) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def height(x) -> int:
    """max(|p|, |q|) for x = p/q in lowest terms."""
    x = as_rational(x)
    return max(abs(x.numerator), x.denominator)


# ---------------------------------------------------------------------------
# perfect powers


def integer_root(n: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ValueError("integer_root needs n >= 0")
    if n < 2:
        return n
    if k == 1:
        return n
    if k == 2:
        r = math.isqrt(n)
        return r if r * r == n else None
    r = _floor_root(n, k)
    return r if r**k == n else None


def _floor_root(n: int, k: int) -> int:
    # Newton iteration from an overestimate; exact on integers.
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def ceil_root(n: int, k: int) -> int:
    """Least integer r >= 0 with r**k >= n (n >= 0)."""
    if n <= 1:
        return n
    r = _floor_root(n, k)
    return r if r**k == n else r + 1


def nth_root(x, k: int) -> Fraction | None:
    """Exact rational k-th root.

    Odd k allows negative input (signed root); for even k the nonnegative
    root is returned and negative input has none.
    """
    x = as_rational(x)
    if x < 0:
        if k % 2 == 0:
            return None
        r = nth_root(-x, k)
        return None if r is None else -r
    n = integer_root(x.numerator, k)
    if n is None:
        return None
    d = integer_root(x.denominator, k)
    if d is None:
        return None
    return Fraction(n, d)


def is_square(x) -> Fraction | None:
    return nth_root(x, 2)


def is_cube(x) -> Fraction | None:
    return nth_root(x, 3)


def is_fourth_power(x) -> Fraction | None:
    return nth_root(x, 4)


def is_nonzero_square(x) -> bool:
    """True when x is a nonzero rational square."""
    return x != 0 and is_square(x) is not None


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense polynomial over Q, constant term first; immutable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly((other,))
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[format_rational(c) for c in self.coeffs]})"

    @staticmethod
    def _lift(other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly((other,))

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(map(add, a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "UniPoly"):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lead
        quot = [Fraction(0)] * max(0, len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lc
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self * (1 / self.lead)

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "UniPoly":
        return cls(parse_rational(s) for s in data)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def _primitive_integer(p: UniPoly) -> list[int]:
    """Positive-rescaled integer coefficients with content 1 (signs kept)."""
    den = reduce(math.lcm, (c.denominator for c in p.coeffs), 1)
    ints = [int(c * den) for c in p.coeffs]
    g = reduce(math.gcd, ints, 0)
    return [c // g for c in ints]


def _eval_int(cs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _sign(n) -> int:
    return (n > 0) - (n < 0)


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    """Sturm chain of the squarefree part of p."""
    f = squarefree_part(p)
    if f.degree < 1:
        return [f]
    seq = [f, f.derivative()]
    while True:
        r = seq[-2] % seq[-1]
        if not r:
            break
        seq.append(-r)
    return seq


def _variations(values: Iterable) -> int:
    last = 0
    count = 0
    for v in values:
        s = _sign(v)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sturm_count(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root count")
    lo, hi = as_rational(lo), as_rational(hi)
    if hi <= lo:
        return 0
    seq = sturm_sequence(p)
    return _variations(q(lo) for q in seq) - _variations(q(hi) for q in seq)


class _IntSturm:
    """Sturm chain rescaled to integer coefficients, evaluated at integers."""

    def __init__(self, monic_ints: Sequence[int]):
        seq = sturm_sequence(UniPoly(monic_ints))
        self.chain = [_primitive_integer(q) for q in seq]
        self._cache: dict[int, int] = {}

    def var(self, x: int) -> int:
        v = self._cache.get(x)
        if v is None:
            v = _variations(_eval_int(q, x) for q in self.chain)
            self._cache[x] = v
        return v

    def count(self, lo: int, hi: int) -> int:
        return self.var(lo) - self.var(hi)


def _integer_roots_monic(h: Sequence[int]) -> list[int]:
    """All integer roots of a squarefree monic integer polynomial."""
    n = len(h) - 1
    if n < 1:
        return []
    # Fujiwara-style bound: |root| <= 2 * max |h_{n-i}|^(1/i)
    bound = 1
    for i in range(1, n + 1):
        c = abs(h[n - i])
        if c:
            bound = max(bound, ceil_root(c, i))
    bound = 2 * bound + 1
    sturm = _IntSturm(h)
    roots = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        k = sturm.count(lo, hi)
        if k == 0:
            continue
        if hi - lo == 1:
            if _eval_int(h, hi) == 0:
                roots.append(hi)
            continue
        if k == 1:
            r = _bisect_single(h, lo, hi)
            if r is not None:
                roots.append(r)
            continue
        mid = (lo + hi) // 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(roots)


def _bisect_single(h: Sequence[int], lo: int, hi: int) -> int | None:
    """The integer root in (lo, hi] if the unique simple root there is one."""
    f_hi = _eval_int(h, hi)
    if f_hi == 0:
        return hi
    s_hi = _sign(f_hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        f_mid = _eval_int(h, mid)
        if f_mid == 0:
            return mid
        if _sign(f_mid) == s_hi:
            hi = mid
        else:
            lo = mid
    return None


def multiplicity(p: UniPoly, root) -> int:
    lin = UniPoly((-as_rational(root), 1))
    m = 0
    while p.degree >= 1:
        q, r = divmod(p, lin)
        if r:
            break
        p = q
        m += 1
    return m


def rational_roots(p) -> list[tuple[Fraction, int]]:
    """Complete list of (root, multiplicity) for the rational roots of p.

    The squarefree part is cleared of denominators and monicized by
    x = y / lead, so rational roots become integer roots; those are isolated
    with Sturm sequences and integer bisection, then confirmed exactly.
    """
    if not isinstance(p, UniPoly):
        p = UniPoly(p)
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    if p.degree > MAX_ROOT_DEGREE:
        raise ValueError(f"degree {p.degree} exceeds cap {MAX_ROOT_DEGREE}")
    if p.degree < 1:
        return []
    g = _primitive_integer(squarefree_part(p))
    n = len(g) - 1
    a = g[-1]
    h = [g[i] * a ** (n - 1 - i) for i in range(n)] + [1]
    out = []
    for y in _integer_roots_monic(h):
        x = Fraction(y, a)
        if p(x) != 0:  # pragma: no cover - would signal an arithmetic bug
            raise ArithmeticError(f"root candidate {x} failed verification")
        out.append((x, multiplicity(p, x)))
    return sorted(out)


def rational_root_values(coeffs) -> list[Fraction]:
    """Distinct rational roots of the polynomial with the given coefficients."""
    return [r for r, _ in rational_roots(UniPoly(coeffs))]


# ---------------------------------------------------------------------------
# sparse multivariate polynomials


def _is_zero(c) -> bool:
    return not c


class MultiPoly:
    """Sparse polynomial {exponent tuple: coefficient}; immutable by convention.

    Coefficients may come from any exact field (Fractions, cyclotomic
    elements); integer scalars are accepted in arithmetic.
    """

    __slots__ = ("terms", "names")

    def __init__(self, terms: dict, names: Sequence[str]):
        self.names = tuple(names)
        arity = len(self.names)
        clean = {}
        for e, c in terms.items():
            if len(e) != arity:
                raise ValueError(f"exponent {e} has wrong arity for {self.names}")
            if not _is_zero(c):
                clean[tuple(e)] = c
        self.terms = clean

    # -- constructors
    @classmethod
    def const(cls, c, names: Sequence[str]) -> "MultiPoly":
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def var(cls, name: str, names: Sequence[str]) -> "MultiPoly":
        names = tuple(names)
        e = tuple(1 if n == name else 0 for n in names)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls({e: Fraction(1)}, names)

    @classmethod
    def gens(cls, names: Sequence[str]) -> tuple["MultiPoly", ...]:
        return tuple(cls.var(n, names) for n in names)

    # -- basics
    @property
    def nvars(self) -> int:
        return len(self.names)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, e) if k
            )
            cs = format_rational(c) if isinstance(c, (int, Fraction)) else repr(c)
            parts.append(f"({cs})*{mono}" if mono else f"({cs})")
        return " + ".join(parts)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.names != self.names:
                raise ValueError(f"variable mismatch {self.names} vs {other.names}")
            return other
        return MultiPoly.const(other, self.names)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.names)
        return self.names == other.names and (self - other).is_zero()

    __hash__ = None

    # -- arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return MultiPoly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        return MultiPoly({e: c * v for e, v in self.terms.items()}, self.names)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                p = c1 * c2
                if e in out:
                    out[e] = out[e] + p
                else:
                    out[e] = p
        return MultiPoly(out, self.names)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        if k == 0:
            return MultiPoly.const(Fraction(1), self.names)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- evaluation and substitution
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError("wrong number of values")
        acc = 0
        pw = [dict() for _ in point]
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    v = pw[i].get(k)
                    if v is None:
                        v = point[i] ** k
                        pw[i][k] = v
                    term = term * v
            acc = acc + term
        return acc

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace variable i by images[i] (all over one ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        names = images[0].names
        cache: list[dict[int, MultiPoly]] = [dict() for _ in images]

        def power(i, k):
            v = cache[i].get(k)
            if v is None:
                v = images[i] ** k
                cache[i][k] = v
            return v

        acc = MultiPoly({}, names)
        for e, c in self.terms.items():
            term = MultiPoly.const(c, names)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def map_coeffs(self, fn) -> "MultiPoly":
        return MultiPoly({e: fn(c) for e, c in self.terms.items()}, self.names)

    def rename(self, names: Sequence[str]) -> "MultiPoly":
        return MultiPoly(self.terms, names)
