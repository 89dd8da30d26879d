"""
Dense statevectors over n qudits of dimension d.

Basis index I = sum_p j_p * d**p, qudit 0 being the least significant
digit. Reshaping the amplitudes to (d,)*n puts qudit p on axis n-1-p.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from app.core.config import get_settings
from app.core.exceptions import CapacityExceeded, DigitOutOfRange, DimensionMismatch, MalformedInput
from app.utils.helpers import format_real

logger = logging.getLogger(__name__)
settings = get_settings()


def check_capacity(d: int, n: int, limit: int | None = None) -> None:
    """Refuse registers with more than `limit` amplitudes."""
    limit = settings.MAX_AMPLITUDES if limit is None else limit
    if d**n > limit:
        raise CapacityExceeded(f"d^n = {d}^{n} exceeds the capacity of {limit} amplitudes")


def encode_index(d: int, digits: Sequence[int]) -> int:
    index = 0
    for digit in reversed(digits):
        index = index * d + int(digit)
    return index


def decode_index(d: int, n: int, index: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        index, digit = divmod(index, d)
        digits.append(digit)
    return tuple(digits)


@dataclass(frozen=True)
class BasisIndex:
    """Digits of a basis state, least significant first."""

    digits: tuple[int, ...]

    @classmethod
    def from_index(cls, d: int, n: int, index: int) -> "BasisIndex":
        return cls(decode_index(d, n, index))

    def index(self, d: int) -> int:
        return encode_index(d, self.digits)

    def ket(self) -> str:
        """Most-significant-first label |j_{n-1} ... j_0>."""
        return "|" + "".join(str(j) for j in reversed(self.digits)) + ">"


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable amplitude array of length d**n."""

    d: int
    n: int
    amps: np.ndarray

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise DimensionMismatch(f"Need d >= 2 and n >= 1, got d={self.d}, n={self.n}")
        check_capacity(self.d, self.n)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != self.d**self.n:
            raise DimensionMismatch(
                f"Expected {self.d ** self.n} amplitudes for d={self.d}, n={self.n}, got {amps.shape[0]}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.d**self.n

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape((self.d,) * self.n)

    def digits_of(self, index: int) -> tuple[int, ...]:
        return decode_index(self.d, self.n, index)

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def is_normalized(self, tol: float | None = None) -> bool:
        tol = settings.NORM_TOLERANCE if tol is None else tol
        return abs(self.norm_squared() - 1.0) <= tol

    def nonzero(self) -> Iterator[tuple[int, complex]]:
        for index in np.flatnonzero(self.amps):
            yield int(index), complex(self.amps[index])

    def to_text(self) -> str:
        """Header `d n`, then `index re im` for every nonzero amplitude."""
        lines = [f"{self.d} {self.n}"]
        for index, amp in self.nonzero():
            lines.append(f"{index} {format_real(amp.real)} {format_real(amp.imag)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StateVector":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 2:
            raise DimensionMismatch("State text must start with a `d n` header")
        try:
            d, n = int(rows[0][0]), int(rows[0][1])
        except ValueError:
            raise MalformedInput(f"Header {' '.join(rows[0])!r} is not two integers")
        if d < 2 or n < 1:
            raise DimensionMismatch(f"Need d >= 2 and n >= 1, got d={d}, n={n}")
        check_capacity(d, n)
        amps = np.zeros(d**n, dtype=np.complex128)
        for line_no, row in enumerate(rows[1:], start=2):
            if len(row) != 3:
                raise MalformedInput(f"Line {line_no}: expected `index re im`, got {len(row)} fields")
            try:
                index, re, im = int(row[0]), float(row[1]), float(row[2])
            except ValueError:
                raise MalformedInput(f"Line {line_no}: {' '.join(row)!r} is not `index re im`")
            if not 0 <= index < d**n:
                raise DigitOutOfRange(f"Index {index} outside a register of {d ** n} amplitudes")
            amps[index] = complex(re, im)
        return cls(d, n, amps)


def basis_state(d: int, digits: Sequence[int]) -> StateVector:
    """|j_{n-1} ... j_0> from least-significant-first digits."""
    digits = tuple(int(j) for j in digits)
    if not digits:
        raise DimensionMismatch("A basis state needs at least one qudit")
    for position, digit in enumerate(digits):
        if not 0 <= digit < d:
            raise DigitOutOfRange(f"Digit {digit} at qudit {position} not in [0, {d - 1}]")
    check_capacity(d, len(digits))
    amps = np.zeros(d ** len(digits), dtype=np.complex128)
    amps[encode_index(d, digits)] = 1.0
    return StateVector(d, len(digits), amps)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """a ⊗ b with a on the high digits."""
    if a.d != b.d:
        raise DimensionMismatch(f"Cannot tensor d={a.d} with d={b.d}")
    check_capacity(a.d, a.n + b.n)
    return StateVector(a.d, a.n + b.n, np.kron(a.amps, b.amps))


def _check_same_register(a: StateVector, b: StateVector) -> None:
    if (a.d, a.n) != (b.d, b.n):
        raise DimensionMismatch(f"Registers differ: (d={a.d}, n={a.n}) vs (d={b.d}, n={b.n})")


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in a."""
    _check_same_register(a, b)
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(inner_product(a, b)) ** 2


def _axis(n: int, position: int) -> int:
    return n - 1 - position


def apply_matrix(
    state: StateVector,
    matrix: np.ndarray,
    target: int,
    controls: Sequence[tuple[int, int]] = (),
) -> StateVector:
    """Multiply the target qudit by `matrix` wherever every control holds its value.

    Control axes are fixed by integer indexing, which leaves a view of the
    sub-block where all controls are satisfied; only that view is rewritten.
    Positions are assumed validated by the caller.
    """
    d, n = state.d, state.n
    psi = state.tensor_view().copy()

    index: list = [slice(None)] * n
    for position, value in controls:
        index[_axis(n, position)] = value
    target_axis = _axis(n, target)
    target_axis -= sum(1 for position, _ in controls if _axis(n, position) < target_axis)

    block = psi[tuple(index)]
    updated = np.tensordot(matrix, block, axes=([1], [target_axis]))
    psi[tuple(index)] = np.moveaxis(updated, 0, target_axis)
    return StateVector(d, n, psi.reshape(-1))
