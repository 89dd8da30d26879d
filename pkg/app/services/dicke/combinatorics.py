"""
Exact combinatorics for spin-s Dicke states.

Spin is carried doubled (s2 = 2s) everywhere so half-integer spins stay
exact; the local dimension is d = s2 + 1.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import sympy

from app.core.config import get_settings
from app.core.exceptions import (
    InvalidAmplitude,
    InvalidSpec,
    LevelOutOfRange,
    NegativeUpperIndex,
    NotASolution,
    SumMismatch,
)

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True)
class DickeSpec:
    """The triple (s, n, k) with s stored as s2 = 2s."""

    s2: int
    n: int
    k: int

    def __post_init__(self):
        if self.s2 < 1:
            raise InvalidSpec(f"s2 = 2s must be >= 1, got {self.s2}")
        if self.n < 1:
            raise InvalidSpec(f"n must be >= 1, got {self.n}")
        if not 0 <= self.k <= self.s2 * self.n:
            raise InvalidSpec(f"k = {self.k} outside [0, {self.s2 * self.n}] for s2={self.s2}, n={self.n}")

    @property
    def d(self) -> int:
        return self.s2 + 1

    @property
    def s(self) -> Fraction:
        return Fraction(self.s2, 2)

    @property
    def ell(self) -> int:
        return self.k // self.s2

    @property
    def i(self) -> int:
        return self.k - self.s2 * self.ell

    @property
    def k_max(self) -> int:
        return self.s2 * self.n

    def dual(self) -> "DickeSpec":
        return DickeSpec(self.s2, self.n, self.k_max - self.k)

    def __str__(self) -> str:
        return f"s={self.s}, n={self.n}, k={self.k}"


@dataclass(frozen=True)
class KVector:
    """Level occupation counts (k_0, ..., k_{2s})."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise SumMismatch(f"Occupation counts must be nonnegative: {self.counts}")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def weight(self) -> int:
        return sum(j * c for j, c in enumerate(self.counts))

    def multiset(self) -> list[int]:
        return [j for j, c in enumerate(self.counts) for _ in range(c)]

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.counts)


@dataclass(frozen=True)
class ExactAmplitude:
    """sqrt(p/q) with p/q a nonnegative rational in lowest terms."""

    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0 or self.p < 0:
            raise InvalidAmplitude(f"sqrt({self.p}/{self.q}) is not a nonnegative real")
        g = math.gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @classmethod
    def from_square(cls, value: Fraction) -> "ExactAmplitude":
        value = Fraction(value)
        return cls(value.numerator, value.denominator)

    @property
    def square(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __mul__(self, other: "ExactAmplitude") -> "ExactAmplitude":
        return ExactAmplitude.from_square(self.square * other.square)

    def to_float(self) -> float:
        return sqrt_ratio(self.p, self.q)

    def __float__(self) -> float:
        return self.to_float()

    def __str__(self) -> str:
        return f"√({self.p}/{self.q})"


@lru_cache(maxsize=65536)
def sqrt_ratio(p: int, q: int) -> float:
    """Correctly rounded float of sqrt(p/q)."""
    if p == 0:
        return 0.0
    ratio = sympy.Rational(p, q).evalf(settings.EXACT_DPS)
    return float(sympy.sqrt(ratio))


def binomial(a: int, b: int) -> int:
    """binom(a, b), zero outside 0 <= b <= a."""
    if a < 0:
        raise NegativeUpperIndex(f"binom({a}, {b}) has a negative upper index")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def multinomial(n: int, kvec: KVector | Sequence[int]) -> int:
    counts = tuple(kvec)
    if sum(counts) != n:
        raise SumMismatch(f"Counts {counts} sum to {sum(counts)}, expected {n}")
    result = math.factorial(n)
    for c in counts:
        result //= math.factorial(c)
    return result


def normalization_a(spec: DickeSpec) -> ExactAmplitude:
    """1 / (k! sqrt(binom(2sn, k)))."""
    return ExactAmplitude(1, math.factorial(spec.k) ** 2 * binomial(spec.k_max, spec.k))


def coeff_c(spec: DickeSpec, j: int) -> ExactAmplitude:
    """Weight of |j> on the last site when peeling one site off |D_{n,k}>."""
    if spec.n < 2:
        raise InvalidSpec("Recursion coefficients need n >= 2")
    if not 0 <= j <= spec.s2:
        raise LevelOutOfRange(f"Level {j} outside [0, {spec.s2}]")
    numerator = binomial(spec.s2, j) * binomial(spec.s2 * (spec.n - 1), spec.k - j)
    return ExactAmplitude(numerator, binomial(spec.k_max, spec.k))


def coefficients(spec: DickeSpec) -> list[ExactAmplitude]:
    return [coeff_c(spec, j) for j in range(spec.s2 + 1)]


def closed_form_weight(s2: int, digits: Sequence[int]) -> int:
    """prod_p binom(2s, j_p), the numerator of a basis amplitude squared."""
    weight = 1
    for j in digits:
        weight *= binomial(s2, j)
    return weight


def closed_form_amplitude(spec: DickeSpec, digits: Sequence[int]) -> ExactAmplitude:
    """Exact amplitude of one basis state in |D_{n,k}>."""
    if len(digits) != spec.n:
        raise InvalidSpec(f"Expected {spec.n} digits, got {len(digits)}")
    if sum(digits) != spec.k:
        return ExactAmplitude(0)
    return ExactAmplitude(closed_form_weight(spec.s2, digits), binomial(spec.k_max, spec.k))


def _kvectors(levels: range, n: int, weight: int) -> Iterator[tuple[int, ...]]:
    if len(levels) == 1:
        if weight == levels[0] * n:
            yield (n,)
        return
    j, rest = levels[0], levels[1:]
    for c in range(n + 1):
        remaining_n, remaining_w = n - c, weight - j * c
        if remaining_w < rest[0] * remaining_n or remaining_w > rest[-1] * remaining_n:
            continue
        for tail in _kvectors(rest, remaining_n, remaining_w):
            yield (c,) + tail


def enumerate_kvectors(spec: DickeSpec) -> list[KVector]:
    """All occupation vectors with sum n and weight k, lexicographic."""
    return [KVector(c) for c in _kvectors(range(spec.s2 + 1), spec.n, spec.k)]


@lru_cache(maxsize=256)
def gaussian_binomial(s2: int, n: int) -> tuple[int, ...]:
    """Coefficients of binom(n + 2s, 2s)_q in increasing powers of q."""
    q = sympy.Symbol("q")
    numerator = sympy.Poly(1, q)
    denominator = sympy.Poly(1, q)
    for r in range(1, s2 + 1):
        numerator *= sympy.Poly(1 - q ** (n + r), q)
        denominator *= sympy.Poly(1 - q**r, q)
    quotient, remainder = sympy.div(numerator, denominator)
    if not remainder.is_zero:
        raise ArithmeticError(f"Gaussian binomial division left a remainder for s2={s2}, n={n}")
    return tuple(int(c) for c in reversed(quotient.all_coeffs()))


def g_count(spec: DickeSpec) -> int:
    """Number of occupation vectors for (n, k): a q-binomial coefficient."""
    coeffs = gaussian_binomial(spec.s2, spec.n)
    return coeffs[spec.k] if spec.k < len(coeffs) else 0


def alpha_coeff(spec: DickeSpec, kvec: KVector) -> ExactAmplitude:
    """Weight of the qudit Dicke state with occupations kvec inside |D_{n,k}>."""
    if len(kvec) != spec.d or kvec.n != spec.n or kvec.weight != spec.k:
        raise NotASolution(f"({kvec}) does not solve sum = {spec.n}, weight = {spec.k} with {spec.d} levels")
    numerator = multinomial(spec.n, kvec)
    for j, c in enumerate(kvec):
        numerator *= binomial(spec.s2, j) ** c
    return ExactAmplitude(numerator, binomial(spec.k_max, spec.k))


def decompose(spec: DickeSpec) -> list[tuple[KVector, ExactAmplitude]]:
    return [(kvec, alpha_coeff(spec, kvec)) for kvec in enumerate_kvectors(spec)]


def combinatorial_identity(spec: DickeSpec) -> tuple[int, int]:
    """binom(2sn, k) and the sum over occupation vectors that must equal it."""
    total = 0
    for kvec in enumerate_kvectors(spec):
        term = multinomial(spec.n, kvec)
        for j, c in enumerate(kvec):
            term *= binomial(spec.s2, j) ** c
        total += term
    return binomial(spec.k_max, spec.k), total
