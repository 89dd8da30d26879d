"""
Rotation angles for the T operators.

T_{m,k'} splits the last site of its reference state over levels
j = 2s, ..., 0 with amplitudes c_j. The rotation angles theta_1 ... theta_2s
are fixed by

    sin(theta_1/2) ... sin(theta_{2s-j}/2) cos(theta_{2s+1-j}/2) = c_j,

with theta_{2s+1} = 0.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from app.core.config import get_settings
from app.core.exceptions import InconsistentCoefficients, InvalidSpec
from app.services.dicke.combinatorics import DickeSpec, coefficients, sqrt_ratio

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass(frozen=True)
class TSpec:
    """T operator on m qudits for step k'."""

    s2: int
    m: int
    k_prime: int

    def __post_init__(self):
        if self.s2 < 1:
            raise InvalidSpec(f"s2 = 2s must be >= 1, got {self.s2}")
        if self.m < 2:
            raise InvalidSpec(f"T operators need m >= 2, got {self.m}")
        if not 1 <= self.k_prime <= self.s2 * self.m - 1:
            raise InvalidSpec(f"k' = {self.k_prime} outside [1, {self.s2 * self.m - 1}] for m={self.m}")

    @property
    def d(self) -> int:
        return self.s2 + 1

    @property
    def ell(self) -> int:
        return self.k_prime // self.s2

    @property
    def i(self) -> int:
        return self.k_prime - self.s2 * self.ell

    @property
    def dicke(self) -> DickeSpec:
        return DickeSpec(self.s2, self.m, self.k_prime)


@dataclass(frozen=True)
class AngleSet:
    thetas: tuple[float, ...]

    def theta(self, p: int) -> float:
        """theta_p for p = 1 ... 2s, and theta_{2s+1} = 0."""
        if p == len(self.thetas) + 1:
            return 0.0
        return self.thetas[p - 1]

    def reconstruct(self) -> list[float]:
        """c_0 ... c_2s implied by the angles."""
        s2 = len(self.thetas)
        values = []
        for j in range(s2 + 1):
            product = math.cos(self.theta(s2 + 1 - j) / 2)
            for p in range(1, s2 - j + 1):
                product *= math.sin(self.theta(p) / 2)
            values.append(product)
        return values


@lru_cache(maxsize=4096)
def solve_angles(tspec: TSpec) -> AngleSet:
    """Solve the angle conditions from the top level down.

    With tail sums T_j = c_0^2 + ... + c_j^2 taken exactly, each angle is
    theta = 2 atan2(sqrt(T_{j-1}), c_j): a vanishing tail gives 0 and a
    vanishing c_j under a live tail gives pi.
    """
    squares = [c.square for c in coefficients(tspec.dicke)]
    tails = []
    running = Fraction(0)
    for square in squares:
        running += square
        tails.append(running)

    thetas = []
    for p in range(1, tspec.s2 + 1):
        j = tspec.s2 + 1 - p
        below = tails[j - 1]
        theta = 2 * math.atan2(
            sqrt_ratio(below.numerator, below.denominator),
            sqrt_ratio(squares[j].numerator, squares[j].denominator),
        )
        thetas.append(min(max(theta, 0.0), math.pi))
    angles = AngleSet(tuple(thetas))

    target = [sqrt_ratio(s.numerator, s.denominator) for s in squares]
    deviation = max(abs(a - b) for a, b in zip(angles.reconstruct(), target))
    if deviation > settings.ANGLE_TOLERANCE:
        raise InconsistentCoefficients(
            f"Angles for s2={tspec.s2}, m={tspec.m}, k'={tspec.k_prime} deviate by {deviation:.3e}"
        )
    logger.debug(f"Angles for s2={tspec.s2}, m={tspec.m}, k'={tspec.k_prime}: {thetas}")
    return angles
