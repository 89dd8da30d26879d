"""
Preparation circuits for spin-s Dicke states.

T_{m,k'} maps the reference state of (m, k') to the one-site-peeled
expansion sum_j c_j |ref(m-1, k'-j)> |j> and fixes every other reference
state. W_m applies T_{m,1} ... T_{m,2sm-1}; U_n applies W_n on all n
qudits, then W_{n-1} on the top n-1, down to W_2 on the top two.

Inside T the wires are labelled locally: 0 is the site being split off,
ell holds the partially filled level i of the reference state.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from app.core.exceptions import UnsupportedShape
from app.services.dicke.combinatorics import DickeSpec
from app.services.qudit.gates import Circuit, Gate, GateKind, GateTally, TBlock
from app.services.synthesis.angles import AngleSet, TSpec, solve_angles

logger = logging.getLogger(__name__)


class TShape(str, Enum):
    GENERIC = "generic"
    LEVEL_ONE_EVEN = "level-one-even"  # i = 0, ell = 1
    LAST_WIRE = "last-wire"  # i > 0, ell = m - 1 > 1
    LEVEL_ONE_LAST_WIRE = "level-one-last-wire"  # i > 0, ell = 1, m = 2
    LEVEL_ONE = "level-one"  # i > 0, ell = 1, m > 2
    LEVEL_ZERO = "level-zero"  # i > 0, ell = 0


@dataclass(frozen=True)
class ShapeRule:
    """Which parts of the generic T circuit survive for a shape.

    level_stage: blocks for levels 2s ... i+1, conjugated by X on wire ell.
    carry_stage: blocks for levels i ... 1, conjugated by X on wire ell+1.
    control_below: rotation control (wire ell-1 = 2s) in the level stage.
    control_level: rotation control (wire ell = 2s) in the carry stage.
    """

    level_stage: bool
    carry_stage: bool
    control_below: bool
    control_level: bool


SHAPE_RULES: dict[TShape, ShapeRule] = {
    TShape.GENERIC: ShapeRule(level_stage=True, carry_stage=True, control_below=True, control_level=True),
    # wire ell-1 is the target itself
    TShape.LEVEL_ONE_EVEN: ShapeRule(level_stage=True, carry_stage=False, control_below=False, control_level=True),
    # wire ell+1 does not exist; the carry angles all vanish
    TShape.LAST_WIRE: ShapeRule(level_stage=True, carry_stage=False, control_below=True, control_level=True),
    TShape.LEVEL_ONE_LAST_WIRE: ShapeRule(
        level_stage=True, carry_stage=False, control_below=False, control_level=True
    ),
    TShape.LEVEL_ONE: ShapeRule(level_stage=True, carry_stage=True, control_below=False, control_level=True),
    # levels above i are empty on wire 0, and wire ell is the target
    TShape.LEVEL_ZERO: ShapeRule(level_stage=False, carry_stage=True, control_below=False, control_level=False),
}


def classify(tspec: TSpec) -> TShape:
    ell, i, m = tspec.ell, tspec.i, tspec.m
    if ell > m - 1:
        raise UnsupportedShape(f"No T topology for m={m}, ell={ell}, i={i}")
    if i == 0:
        if ell == 1:
            return TShape.LEVEL_ONE_EVEN
        if ell >= 2:
            return TShape.GENERIC
        raise UnsupportedShape(f"No T topology for m={m}, ell={ell}, i={i}")
    if ell == 0:
        return TShape.LEVEL_ZERO
    if ell == 1:
        return TShape.LEVEL_ONE_LAST_WIRE if m == 2 else TShape.LEVEL_ONE
    if ell == m - 1:
        return TShape.LAST_WIRE
    return TShape.GENERIC


def _level_stage(tspec: TSpec, angles: AngleSet, rule: ShapeRule) -> list[Gate]:
    s2, ell, i = tspec.s2, tspec.ell, tspec.i
    gates = []
    for p in range(1, s2 - i + 1):
        j = s2 + 1 - p
        swap = Gate(kind=GateKind.X, i=i + p - 1, j=i + p, target=ell, controls=((0, j),))
        controls = ((ell - 1, s2),) if rule.control_below else ()
        rotation = Gate(
            kind=GateKind.R,
            i=j - 1,
            j=j,
            theta=angles.theta(p),
            target=0,
            controls=controls + ((ell, i + p),),
        )
        gates += [swap, rotation, swap]
    return gates


def _carry_stage(tspec: TSpec, angles: AngleSet, rule: ShapeRule) -> list[Gate]:
    s2, ell, i = tspec.s2, tspec.ell, tspec.i
    gates = []
    for q in range(1, i + 1):
        j = i + 1 - q
        swap = Gate(kind=GateKind.X, i=q - 1, j=q, target=ell + 1, controls=((0, j),))
        controls = ((ell, s2),) if rule.control_level else ()
        rotation = Gate(
            kind=GateKind.R,
            i=j - 1,
            j=j,
            theta=angles.theta(s2 - i + q),
            target=0,
            controls=controls + ((ell + 1, q),),
        )
        gates += [swap, rotation, swap]
    return gates


def _t_gates(tspec: TSpec) -> tuple[TShape, list[Gate]]:
    shape = classify(tspec)
    rule = SHAPE_RULES[shape]
    angles = solve_angles(tspec)
    gates = []
    if rule.level_stage:
        gates += _level_stage(tspec, angles, rule)
    if rule.carry_stage and tspec.i > 0:
        gates += _carry_stage(tspec, angles, rule)
    return shape, gates


@lru_cache(maxsize=4096)
def build_T(tspec: TSpec) -> Circuit:
    shape, gates = _t_gates(tspec)
    block = TBlock(
        m=tspec.m,
        k_prime=tspec.k_prime,
        ell=tspec.ell,
        i=tspec.i,
        shape=shape.value,
        start=0,
        stop=len(gates),
    )
    return Circuit(d=tspec.d, n=tspec.m, gates=tuple(gates), blocks=(block,))


def _concatenate(d: int, n: int, parts: list[Circuit]) -> Circuit:
    gates: list[Gate] = []
    blocks: list[TBlock] = []
    for part in parts:
        blocks += [b.shifted(gates=len(gates)) for b in part.blocks]
        gates += part.gates
    return Circuit(d=d, n=n, gates=tuple(gates), blocks=tuple(blocks))


def build_W(s2: int, m: int, k_first: int = 1, k_last: int | None = None) -> Circuit:
    """T_{m,k'} for k' = k_first ... k_last, applied in that order."""
    k_last = s2 * m - 1 if k_last is None else k_last
    parts = [build_T(TSpec(s2, m, k_prime)) for k_prime in range(k_first, k_last + 1)]
    return _concatenate(s2 + 1, m, parts)


def build_U(s2: int, n: int) -> Circuit:
    """k-independent preparation circuit: W_n first, W_2 last."""
    parts = [build_W(s2, m, first, last).embed(n, n - m) for m, first, last in w_ranges(s2, n)]
    circuit = _concatenate(s2 + 1, n, parts)
    logger.info(f"Built U for s2={s2}, n={n}: {len(circuit.blocks)} T operators, {len(circuit)} gates")
    return circuit


def simplified_range(spec: DickeSpec, m: int) -> tuple[int, int]:
    """k' range of the truncated W_m; empty when first > last."""
    first = max(spec.k + spec.s2 * (m - spec.n), 1)
    last = min(spec.k, spec.s2 * m - 1)
    return first, last


def w_ranges(s2: int, n: int, spec: DickeSpec | None = None) -> list[tuple[int, int, int]]:
    """(m, first k', last k') of every W_m in application order.

    With `spec` the ranges are those of the simplified circuit for it;
    W_m with an empty range is left out.
    """
    if spec is None:
        return [(m, 1, s2 * m - 1) for m in range(n, 1, -1)]
    if not 0 < spec.k < spec.k_max:
        return []
    ranges = []
    for m in range(n, 1, -1):
        first, last = simplified_range(spec, m)
        if first <= last:
            ranges.append((m, first, last))
    return ranges


def build_U_simplified(spec: DickeSpec) -> Circuit:
    """k-dependent circuit keeping only the T operators that act nontrivially."""
    parts = [
        build_W(spec.s2, m, first, last).embed(spec.n, spec.n - m)
        for m, first, last in w_ranges(spec.s2, spec.n, spec)
    ]
    circuit = _concatenate(spec.d, spec.n, parts)
    logger.info(f"Built simplified U for {spec}: {len(circuit.blocks)} T operators, {len(circuit)} gates")
    return circuit


def circuit_for(spec: DickeSpec, simplified: bool) -> Circuit:
    return build_U_simplified(spec) if simplified else build_U(spec.s2, spec.n)


def gate_count_N(spec: DickeSpec) -> int:
    """Number of T operators in the simplified circuit."""
    total = 0
    for m in range(2, spec.n + 1):
        first, last = simplified_range(spec, m)
        total += max(0, 1 + last - first)
    return total


def full_T_count(s2: int, n: int) -> int:
    return sum(s2 * m - 1 for m in range(2, n + 1))


def t_tally(tspec: TSpec) -> GateTally:
    """Gate tally of build_T(tspec), read off its shape without building gates."""
    rule = SHAPE_RULES[classify(tspec)]
    stages = []
    if rule.level_stage:
        stages.append((tspec.s2 - tspec.i, rule.control_below))
    if rule.carry_stage and tspec.i > 0:
        stages.append((tspec.i, rule.control_level))

    tally = GateTally()
    for rotations, extra_control in stages:
        # each rotation sits between two singly-controlled swaps
        tally.by_kind[GateKind.X.value] += 2 * rotations
        tally.by_kind[GateKind.R.value] += rotations
        tally.by_controls[1] += 2 * rotations
        tally.by_controls[1 + int(extra_control)] += rotations
    return tally


def circuit_tally(s2: int, n: int, spec: DickeSpec | None = None) -> tuple[int, GateTally]:
    """(T operators, gate tally) of build_U, or of build_U_simplified(spec)."""
    t_operators = 0
    tally = GateTally()
    for m, first, last in w_ranges(s2, n, spec):
        for k_prime in range(first, last + 1):
            part = t_tally(TSpec(s2, m, k_prime))
            tally.by_kind.update(part.by_kind)
            tally.by_controls.update(part.by_controls)
            t_operators += 1
    return t_operators, tally


def describe(circuit: Circuit) -> str:
    """Per-T gate tallies and the provenance of every gate."""
    lines = [f"circuit d={circuit.d} n={circuit.n}: {len(circuit.blocks)} T operators, {len(circuit)} gates"]
    for block in circuit.blocks:
        part = circuit.gates[block.start : block.stop]
        n_x = sum(1 for g in part if g.kind is GateKind.X)
        n_r = sum(1 for g in part if g.kind is GateKind.R)
        lines.append(
            f"T[m={block.m} k'={block.k_prime} ell={block.ell} i={block.i} shape={block.shape}] "
            f"wires {block.offset}..{block.offset + block.m - 1}: X={n_x} R={n_r}"
        )
        for index, gate in enumerate(part, start=block.start):
            lines.append(f"  {index:5d} {gate.label()}")
    return "\n".join(lines) + "\n"
