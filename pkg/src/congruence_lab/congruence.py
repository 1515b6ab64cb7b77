"""Symmetric criteria for 2-, 3-, 4- and 12-congruences of elliptic curves over Q.

Each tester works from the j-invariants and the product c6*c6' of the two
curves.  Witnesses are enumerated exhaustively: every rational alpha, every
rational beta above it, and so on, since a valid chain may hang off any
root at any level.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .curves import WeierstrassCurve, ap, has_good_reduction, primes_up_to, quadratic_twist
from .errors import DegenerateWitness, NoWitness, Unsupported
from .ratmath import as_rational, format_rational, is_cube, is_square, rational_root_values

TAU_BRANCHES = ("r1mod4", "r3mod4", "beta_nonzero", "beta_zero", "none")

# (12, r) = (3, r mod 3) and (4, r mod 4), with powers taken modulo squares
TWELVE_PARTS = {1: (1, 1), 5: (2, 1), 7: (1, 3), 11: (2, 3)}


def _fmt(x):
    return None if x is None else format_rational(x)


@dataclass(frozen=True)
class CongruenceWitness:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction | None = None
    delta: Fraction | None = None
    tau_square_class_checked: bool = False
    which_tau_branch: str = "none"

    def to_json(self) -> dict:
        return {
            "alpha": _fmt(self.alpha),
            "beta": _fmt(self.beta),
            "gamma": _fmt(self.gamma),
            "delta": _fmt(self.delta),
            "tau_square_class_checked": self.tau_square_class_checked,
            "which_tau_branch": self.which_tau_branch,
        }


@dataclass(frozen=True)
class CongruenceVerdict:
    level: tuple[int, int]
    congruent: bool
    witness: CongruenceWitness | None = None
    obstruction: str | None = None
    inconclusive: bool = False
    components: tuple["CongruenceVerdict", ...] = field(default=())

    def __post_init__(self):
        if self.congruent and self.witness is None and not self.components:
            raise ValueError("a positive verdict needs a witness")
        if not self.congruent and self.obstruction is None:
            raise ValueError("a negative verdict needs an obstruction")

    def __bool__(self):
        return self.congruent

    def to_json(self) -> dict:
        out = {
            "N": self.level[0],
            "r": self.level[1],
            "congruent": self.congruent,
            "witness": self.witness.to_json() if self.witness else None,
            "obstruction": self.obstruction,
            "inconclusive": self.inconclusive,
        }
        if self.components:
            out["components"] = [c.to_json() for c in self.components]
        return out


# ---------------------------------------------------------------------------
# invariants of a pair


@dataclass(frozen=True)
class PairData:
    J1: Fraction
    J2: Fraction
    c6c6: Fraction

    @property
    def pi(self) -> Fraction:
        return self.J1 * self.J2

    @property
    def m(self) -> Fraction:
        return (self.J1 - 1) * (self.J2 - 1)

    @property
    def sigma(self) -> Fraction:
        return self.J1 + self.J2


def xi_value(J1, J2) -> Fraction:
    """The unit whose vanishing marks (cbrt J + 1)(cbrt J' + 1) = 1 for some roots."""
    p = as_rational(J1) * as_rational(J2)
    s = as_rational(J1) + as_rational(J2)
    return p**3 + 3 * p**2 * s - 27 * p**2 + 3 * p * s**2 + s**3


def pair_data(E: WeierstrassCurve, E2: WeierstrassCurve) -> PairData:
    return PairData(E.J, E2.J, E.c6 * E2.c6)


def _check_j(d: PairData, distinct: bool):
    for J in (d.J1, d.J2):
        if J == 0 or J == 1:
            raise Unsupported("j-invariant 0 or 1728 is outside the criterion")
    if distinct and d.J1 == d.J2:
        raise Unsupported("criterion requires J != J'")


# ---------------------------------------------------------------------------
# witness chains at the level of (JJ', (J-1)(J'-1))


def alpha_candidates_2(m) -> list[Fraction]:
    root = is_square(m)
    if root is None:
        return []
    return [root] if root == 0 else [root, -root]


def beta_candidates_2(pi, alpha) -> list[Fraction]:
    # beta^3 - 3 pi beta - 2 pi (alpha + 1)
    return rational_root_values([-2 * pi * (alpha + 1), -3 * pi, 0, 1])


def gamma_candidates_4(pi, beta) -> list[Fraction]:
    return rational_root_values(
        [3 * pi * pi * (4 * pi - beta * beta), -16 * pi * pi, -6 * pi * beta, 0, 1]
    )


def chains_2(pi, m) -> Iterator[tuple[Fraction, Fraction]]:
    for a in alpha_candidates_2(m):
        for b in beta_candidates_2(pi, a):
            yield a, b


def chains_4(pi, m) -> Iterator[tuple[Fraction, Fraction, Fraction]]:
    for a, b in chains_2(pi, m):
        for g in gamma_candidates_4(pi, b):
            yield a, b, g


def alpha_candidates_31(pi, sigma) -> list[Fraction]:
    return rational_root_values([-pi * sigma, -3 * pi, 0, 1])


def beta_candidates_31(m, alpha) -> list[Fraction]:
    return rational_root_values([-3 * (4 * alpha + 1) * m * m, -8 * m * m, -6 * m, 0, 1])


def delta_31(m, sigma, alpha, beta) -> Fraction | None:
    """The (3,1) twist class, or None where its denominator vanishes."""
    den = beta**3 - 3 * m * beta - 2 * m * m
    if den == 0:
        return None
    num = 2 * beta**3 - (5 * alpha + 2) * beta**2 - 10 * m * beta + 3 * m * (13 * alpha - 2 + 6 * sigma)
    return -6 * num / den


def chains_31(pi, m, sigma) -> Iterator[tuple[Fraction, Fraction, Fraction | None]]:
    for a in alpha_candidates_31(pi, sigma):
        for b in beta_candidates_31(m, a):
            yield a, b, delta_31(m, sigma, a, b)


def beta_candidates_32(m, alpha) -> list[Fraction]:
    return rational_root_values(
        [-3 * (alpha - 1) ** 2 * m * m, -8 * m * m, -6 * (alpha + 1) * m, 0, 1]
    )


def chains_32(pi, m) -> Iterator[tuple[Fraction, Fraction]]:
    a = is_cube(pi)
    if a is None:
        return
    for b in beta_candidates_32(m, a):
        yield a, b


# ---------------------------------------------------------------------------
# testers


def _verdict_2(d: PairData) -> CongruenceVerdict:
    alphas = alpha_candidates_2(d.m)
    if not alphas:
        return CongruenceVerdict((2, 1), False, obstruction="no-rational-alpha")
    for a in alphas:
        for b in beta_candidates_2(d.pi, a):
            return CongruenceVerdict((2, 1), True, CongruenceWitness(a, b))
    return CongruenceVerdict((2, 1), False, obstruction="no-rational-beta")


def test_2_1(E: WeierstrassCurve, E2: WeierstrassCurve) -> CongruenceVerdict:
    d = pair_data(E, E2)
    _check_j(d, distinct=False)
    return _verdict_2(d)


def _verdict_4(d: PairData, r: int) -> CongruenceVerdict:
    level = (4, r)
    alphas = alpha_candidates_2(d.m)
    if not alphas:
        return CongruenceVerdict(level, False, obstruction="no-rational-alpha")
    seen_beta = seen_gamma = False
    for a in alphas:
        for b in beta_candidates_2(d.pi, a):
            seen_beta = True
            for g in gamma_candidates_4(d.pi, b):
                seen_gamma = True
                delta = 3 * (d.pi - (a + 1) ** 2)
                if r % 4 == 1:
                    val, branch = 3 * d.c6c6 * delta * a, "r1mod4"
                else:
                    val, branch = 3 * d.c6c6 * a, "r3mod4"
                if is_square(val) is not None:
                    w = CongruenceWitness(a, b, g, delta, True, branch)
                    return CongruenceVerdict(level, True, w)
    if not seen_beta:
        return CongruenceVerdict(level, False, obstruction="no-rational-beta")
    if not seen_gamma:
        return CongruenceVerdict(level, False, obstruction="no-rational-gamma")
    return CongruenceVerdict(level, False, obstruction="tau-not-square")


def test_4_r(E: WeierstrassCurve, E2: WeierstrassCurve, r: int) -> CongruenceVerdict:
    if r % 4 not in (1, 3):
        raise ValueError("r must be odd")
    d = pair_data(E, E2)
    _check_j(d, distinct=True)
    return _verdict_4(d, 1 if r % 4 == 1 else 3)


def _verdict_31(d: PairData) -> CongruenceVerdict:
    level = (3, 1)
    alphas = alpha_candidates_31(d.pi, d.sigma)
    if not alphas:
        return CongruenceVerdict(level, False, obstruction="no-rational-alpha")
    total = degenerate = 0
    for a in alphas:
        for b in beta_candidates_31(d.m, a):
            total += 1
            delta = delta_31(d.m, d.sigma, a, b)
            if delta is None:
                degenerate += 1
                continue
            if is_square(3 * d.c6c6 * delta) is not None:
                w = CongruenceWitness(a, b, None, delta, True, "none")
                return CongruenceVerdict(level, True, w)
    if total == 0:
        return CongruenceVerdict(level, False, obstruction="no-rational-beta")
    if degenerate == total:
        raise DegenerateWitness("every (3,1) candidate has a vanishing delta denominator")
    if degenerate:
        return CongruenceVerdict(
            level,
            False,
            obstruction=f"tau-not-square ({degenerate} degenerate candidates)",
            inconclusive=True,
        )
    return CongruenceVerdict(level, False, obstruction="tau-not-square")


def test_3_1(E: WeierstrassCurve, E2: WeierstrassCurve) -> CongruenceVerdict:
    d = pair_data(E, E2)
    _check_j(d, distinct=True)
    if xi_value(d.J1, d.J2) == 0:
        raise Unsupported("(cbrt J + 1)(cbrt J' + 1) = 1 for some choice of cube roots")
    return _verdict_31(d)


def _verdict_32(d: PairData) -> CongruenceVerdict:
    level = (3, 2)
    a = is_cube(d.pi)
    if a is None:
        return CongruenceVerdict(level, False, obstruction="no-rational-alpha")
    betas = beta_candidates_32(d.m, a)
    for b in betas:
        if b != 0:
            val, branch = 3 * d.c6c6 * b, "beta_nonzero"
        else:
            val, branch = -2 * d.c6c6, "beta_zero"
        if is_square(val) is not None:
            return CongruenceVerdict(level, True, CongruenceWitness(a, b, None, None, True, branch))
    if not betas:
        return CongruenceVerdict(level, False, obstruction="no-rational-beta")
    return CongruenceVerdict(level, False, obstruction="tau-not-square")


def test_3_2(E: WeierstrassCurve, E2: WeierstrassCurve) -> CongruenceVerdict:
    d = pair_data(E, E2)
    _check_j(d, distinct=True)
    return _verdict_32(d)


def test_3_r(E, E2, r: int) -> CongruenceVerdict:
    r %= 3
    if r == 1:
        return test_3_1(E, E2)
    if r == 2:
        return test_3_2(E, E2)
    raise ValueError("r must be prime to 3")


def test_12_r(E: WeierstrassCurve, E2: WeierstrassCurve, r: int) -> CongruenceVerdict:
    r %= 12
    if r not in TWELVE_PARTS:
        raise ValueError("r must be a unit modulo 12")
    r3, r4 = TWELVE_PARTS[r]
    v3 = test_3_r(E, E2, r3)
    v4 = test_4_r(E, E2, r4)
    ok = v3.congruent and v4.congruent
    obstruction = None
    if not ok:
        failed = v3 if not v3.congruent else v4
        obstruction = f"({failed.level[0]},{failed.level[1]}): {failed.obstruction}"
    return CongruenceVerdict(
        (12, r),
        ok,
        obstruction=obstruction,
        inconclusive=v3.inconclusive or v4.inconclusive,
        components=(v3, v4),
    )


def test(E, E2, N: int, r: int = 1) -> CongruenceVerdict:
    """Dispatch to the tester for (N, r)."""
    if N == 2:
        return test_2_1(E, E2)
    if N == 3:
        return test_3_r(E, E2, r)
    if N == 4:
        return test_4_r(E, E2, r)
    if N == 12:
        return test_12_r(E, E2, r)
    raise ValueError(f"unsupported level N = {N}")


# ---------------------------------------------------------------------------
# trace of Frobenius scan


@dataclass(frozen=True)
class ApScanReport:
    N: int
    bound: int
    passed: bool
    failing_prime: int | None
    primes_checked: int

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "bound": self.bound,
            "passed": self.passed,
            "failing_prime": self.failing_prime,
            "primes_checked": self.primes_checked,
        }


def ap_scan(E: WeierstrassCurve, E2: WeierstrassCurve, N: int, bound: int) -> ApScanReport:
    """Check a_p(E) = a_p(E') mod N at good primes p <= bound with p prime to 6N.

    A failure certifies non-congruence; a pass is only evidence.
    """
    if N < 2 or bound < 5:
        raise ValueError("need N >= 2 and bound >= 5")
    checked = 0
    for p in primes_up_to(bound):
        if 6 * N % p == 0:
            continue
        if not (has_good_reduction(E, p) and has_good_reduction(E2, p)):
            continue
        checked += 1
        if (ap(E, p) - ap(E2, p)) % N:
            return ApScanReport(N, bound, False, p, checked)
    return ApScanReport(N, bound, True, None, checked)


# ---------------------------------------------------------------------------
# twist resolution


def _k(j: Fraction) -> Fraction:
    return j / (j - 1728)


def base_curve(j) -> WeierstrassCurve:
    """y^2 = x^3 - 27k x - 54k with k = j/(j - 1728), which has j-invariant j."""
    k = _k(as_rational(j))
    return WeierstrassCurve.short(-27 * k, -54 * k)


def twisted_curve(j, d) -> WeierstrassCurve:
    k = _k(as_rational(j))
    d = as_rational(d)
    return WeierstrassCurve.short(-27 * d * d * k, -54 * d**3 * k)


def _twist_parameters(d: PairData, N: int, r: int, kk: Fraction) -> Iterator[Fraction]:
    """Candidate twist parameters for E' read off every witness chain."""
    if N == 2:
        if any(True for _ in chains_2(d.pi, d.m)):
            yield Fraction(1)
        return
    if N == 4:
        for a, b, g in chains_4(d.pi, d.m):
            delta = 3 * (d.pi - (a + 1) ** 2)
            yield 3 * delta * a * kk if r % 4 == 1 else 3 * a * kk
        return
    if N == 3 and r % 3 == 1:
        for a, b, delta in chains_31(d.pi, d.m, d.sigma):
            if delta is not None:
                yield 3 * delta * kk
        return
    if N == 3:
        for a, b in chains_32(d.pi, d.m):
            yield 3 * b * kk if b != 0 else -2 * kk
        return
    raise ValueError(f"no twist data for level {N}")


def resolve_twist(j1, j2, level: tuple[int, int]) -> tuple[WeierstrassCurve, WeierstrassCurve]:
    """Concrete curves with j-invariants j1, j2 that are (N, r)-congruent.

    E is the standard model for j1; E' is the standard model for j2 twisted
    by the parameter attached to the witness chain.
    """
    N, r = level
    j1, j2 = as_rational(j1), as_rational(j2)
    for j in (j1, j2):
        if j == 0 or j == 1728:
            raise Unsupported("j-invariant 0 or 1728 is outside the criterion")
    if N != 2 and j1 == j2:
        raise Unsupported("criterion requires J != J'")
    E = base_curve(j1)
    kk = _k(j1) * _k(j2)
    d = PairData(j1 / 1728, j2 / 1728, Fraction(0))
    if N == 3 and r % 3 == 1 and xi_value(d.J1, d.J2) == 0:
        raise Unsupported("(cbrt J + 1)(cbrt J' + 1) = 1 for some choice of cube roots")
    if N == 12:
        parts = [(3, TWELVE_PARTS[r % 12][0]), (4, TWELVE_PARTS[r % 12][1])]
    else:
        parts = [(N, r)]
    seen_any = False
    for sub in parts:
        for t in _twist_parameters(d, sub[0], sub[1], kk):
            seen_any = True
            if t == 0:
                continue
            E2 = twisted_curve(j2, t)
            if test(E, E2, N, r).congruent:
                return E, E2
    if seen_any:
        raise NoWitness(f"no twist from the witness chains realises ({N},{r})")
    raise NoWitness(f"no rational witness chain for ({N},{r})")


__all__ = [
    "CongruenceWitness",
    "CongruenceVerdict",
    "ApScanReport",
    "PairData",
    "xi_value",
    "test_2_1",
    "test_3_1",
    "test_3_2",
    "test_4_r",
    "test_12_r",
    "test",
    "ap_scan",
    "resolve_twist",
    "base_curve",
    "twisted_curve",
    "quadratic_twist",
]

# keep test collectors from mistaking the testers for test functions
for _f in (test_2_1, test_3_1, test_3_2, test_3_r, test_4_r, test_12_r, test):
    _f.__test__ = False
del _f
