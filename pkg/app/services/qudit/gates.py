"""
d-level gates with value controls, and the circuit interchange format.

Three gate kinds act on a single target qudit:

* X(i, j): swaps levels i and j.
* R(i, j, theta): real rotation on span{|i>, |j>},
  |i> -> cos(theta/2)|i> - sin(theta/2)|j>, |j> -> sin(theta/2)|i> + cos(theta/2)|j>.
* C: level reversal |j> -> |d-1-j>.

A control is a (position, value) pair: the gate fires only on basis
states whose qudit `position` holds `value`. Circuits are applied
first-to-last.
"""
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.exceptions import (
    ControlOnTarget,
    DimensionMismatch,
    DuplicateControl,
    InvalidGate,
    LevelOutOfRange,
    LevelsNotOrdered,
    MalformedInput,
    PositionOutOfRange,
)
from app.services.qudit.state import StateVector, apply_matrix
from app.utils.helpers import format_real

logger = logging.getLogger(__name__)

# Two-qudit gates needed per doubly-controlled single-qudit gate
DOUBLE_CONTROL_COST = 8


def _check_levels(d: int, i: int, j: int) -> None:
    if i >= j:
        raise LevelsNotOrdered(f"Levels ({i}, {j}) must satisfy i < j")
    if i < 0 or j >= d:
        raise LevelOutOfRange(f"Levels ({i}, {j}) not within [0, {d - 1}]")


def r_matrix(d: int, i: int, j: int, theta: float) -> np.ndarray:
    _check_levels(d, i, j)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    matrix = np.eye(d)
    matrix[i, i] = c
    matrix[j, j] = c
    matrix[i, j] = s
    matrix[j, i] = -s
    return matrix


def x_matrix(d: int, i: int, j: int) -> np.ndarray:
    _check_levels(d, i, j)
    matrix = np.eye(d)
    matrix[[i, j]] = matrix[[j, i]]
    return matrix


def c_matrix(d: int) -> np.ndarray:
    if d < 2:
        raise LevelOutOfRange(f"Dimension {d} must be at least 2")
    return np.eye(d)[::-1].copy()


class GateKind(str, Enum):
    X = "X"
    R = "R"
    C = "C"


class Gate(BaseModel):
    """Single-target gate with value controls."""

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    i: Optional[int] = None
    j: Optional[int] = None
    theta: Optional[float] = Field(None, allow_inf_nan=False)
    target: int
    controls: tuple[tuple[int, int], ...] = ()

    @model_validator(mode="after")
    def check_structure(self) -> "Gate":
        if self.kind is GateKind.C:
            if self.i is not None or self.j is not None or self.theta is not None:
                raise InvalidGate("C takes no levels and no angle")
        else:
            if self.i is None or self.j is None:
                raise InvalidGate(f"{self.kind.value} needs levels i and j")
            if self.i >= self.j:
                raise LevelsNotOrdered(f"Levels ({self.i}, {self.j}) must satisfy i < j")
            if self.i < 0:
                raise LevelOutOfRange(f"Level {self.i} is negative")
            if (self.kind is GateKind.R) != (self.theta is not None):
                raise InvalidGate("An angle is required for R and forbidden for X")

        if self.target < 0:
            raise PositionOutOfRange(f"Target {self.target} is negative")
        seen = set()
        for position, value in self.controls:
            if position == self.target:
                raise ControlOnTarget(f"Control on qudit {position} coincides with the target")
            if position in seen:
                raise DuplicateControl(f"Qudit {position} carries two controls")
            if position < 0 or value < 0:
                raise PositionOutOfRange(f"Control ({position}, {value}) is negative")
            seen.add(position)
        return self

    def check_register(self, d: int, n: int) -> None:
        """Raise unless every position is < n and every level is < d."""
        for position in [self.target, *(p for p, _ in self.controls)]:
            if position >= n:
                raise PositionOutOfRange(f"Qudit {position} outside a register of {n}")
        for position, value in self.controls:
            if value >= d:
                raise LevelOutOfRange(f"Control value {value} on qudit {position} exceeds {d - 1}")
        if self.j is not None and self.j >= d:
            raise LevelOutOfRange(f"Level {self.j} exceeds {d - 1}")

    def matrix(self, d: int) -> np.ndarray:
        if self.kind is GateKind.X:
            return x_matrix(d, self.i, self.j)
        if self.kind is GateKind.R:
            return r_matrix(d, self.i, self.j, self.theta)
        return c_matrix(d)

    def shifted(self, offset: int) -> "Gate":
        return self.model_copy(
            update={
                "target": self.target + offset,
                "controls": tuple((p + offset, v) for p, v in self.controls),
            }
        )

    def label(self) -> str:
        if self.kind is GateKind.C:
            head = "C"
        elif self.kind is GateKind.X:
            head = f"X({self.i},{self.j})"
        else:
            head = f"R({self.i},{self.j}; {format_real(self.theta)})"
        text = f"{head} @q{self.target}"
        if self.controls:
            text += " if " + ", ".join(f"q{p}={v}" for p, v in self.controls)
        return text

    def to_json_object(self) -> str:
        parts = [f'"kind": "{self.kind.value}"']
        if self.kind is not GateKind.C:
            parts += [f'"i": {self.i}', f'"j": {self.j}']
        if self.theta is not None:
            parts.append(f'"theta": {format_real(self.theta)}')
        parts.append(f'"target": {self.target}')
        controls = ", ".join(f"[{p}, {v}]" for p, v in self.controls)
        parts.append(f'"controls": [{controls}]')
        return "{" + ", ".join(parts) + "}"


class TBlock(BaseModel):
    """Where one T operator sits inside a circuit."""

    model_config = ConfigDict(frozen=True)

    m: int
    k_prime: int
    ell: int
    i: int
    shape: str
    offset: int = 0
    start: int
    stop: int

    def shifted(self, wires: int = 0, gates: int = 0) -> "TBlock":
        return self.model_copy(
            update={"offset": self.offset + wires, "start": self.start + gates, "stop": self.stop + gates}
        )


@dataclass
class GateTally:
    by_kind: Counter = field(default_factory=Counter)
    by_controls: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.by_kind.values())

    @property
    def doubly_controlled(self) -> int:
        return self.by_controls[2]

    @property
    def two_qudit_estimate(self) -> int:
        """Singly-controlled gates count once, doubly-controlled ones eight times."""
        return self.by_controls[1] + DOUBLE_CONTROL_COST * self.by_controls[2]


class Circuit(BaseModel):
    """Ordered gate list on a register of n qudits of dimension d."""

    model_config = ConfigDict(frozen=True)

    d: int
    n: int
    gates: tuple[Gate, ...] = ()
    blocks: tuple[TBlock, ...] = Field(default=(), exclude=True)

    @model_validator(mode="after")
    def check_gates(self) -> "Circuit":
        if self.d < 2 or self.n < 1:
            raise DimensionMismatch(f"Need d >= 2 and n >= 1, got d={self.d}, n={self.n}")
        for gate in self.gates:
            gate.check_register(self.d, self.n)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        """This circuit followed by `other`."""
        if (self.d, self.n) != (other.d, other.n):
            raise DimensionMismatch(
                f"Cannot concatenate (d={self.d}, n={self.n}) with (d={other.d}, n={other.n})"
            )
        shift = len(self.gates)
        return Circuit(
            d=self.d,
            n=self.n,
            gates=self.gates + other.gates,
            blocks=self.blocks + tuple(b.shifted(gates=shift) for b in other.blocks),
        )

    def embed(self, n: int, offset: int) -> "Circuit":
        """Relabel qudit w as w + offset inside a register of n qudits."""
        if offset < 0 or offset + self.n > n:
            raise PositionOutOfRange(f"Cannot place {self.n} qudits at offset {offset} in {n}")
        return Circuit(
            d=self.d,
            n=n,
            gates=tuple(g.shifted(offset) for g in self.gates),
            blocks=tuple(b.shifted(wires=offset) for b in self.blocks),
        )

    def tally(self) -> GateTally:
        tally = GateTally()
        for gate in self.gates:
            tally.by_kind[gate.kind.value] += 1
            tally.by_controls[len(gate.controls)] += 1
        return tally

    def to_json(self) -> str:
        """Interchange text, one gate per line, angles at full precision."""
        head = f'{{"d": {self.d}, "n": {self.n}, "gates": ['
        if not self.gates:
            return head + "]}\n"
        body = ",\n".join("  " + g.to_json_object() for g in self.gates)
        return f"{head}\n{body}\n]}}\n"

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedInput(f"Circuit JSON does not parse: {e}")
        if not isinstance(payload, dict):
            raise MalformedInput("Circuit JSON must be an object with d, n and gates")
        payload.pop("blocks", None)
        try:
            return cls.model_validate(payload)
        except pydantic.ValidationError as e:
            raise MalformedInput(f"Circuit JSON has the wrong layout: {e}")


def perturb_rotations(circuit: Circuit, delta: float) -> Circuit:
    """Shift every rotation angle by delta; other gates untouched."""
    if not math.isfinite(delta):
        raise InvalidGate(f"Rotation offset must be finite, got {delta}")
    gates = tuple(
        g.model_copy(update={"theta": g.theta + delta}) if g.kind is GateKind.R else g
        for g in circuit.gates
    )
    return circuit.model_copy(update={"gates": gates})


def apply(state: StateVector, gate: Gate) -> StateVector:
    gate.check_register(state.d, state.n)
    return apply_matrix(state, gate.matrix(state.d), gate.target, gate.controls)


def run(state: StateVector, circuit: Circuit) -> StateVector:
    if (state.d, state.n) != (circuit.d, circuit.n):
        raise DimensionMismatch(
            f"Circuit is for (d={circuit.d}, n={circuit.n}), state is (d={state.d}, n={state.n})"
        )
    for gate in circuit.gates:
        state = apply(state, gate)
    logger.debug(f"Ran {len(circuit.gates)} gates on d={state.d}, n={state.n}")
    return state
