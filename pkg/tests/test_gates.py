import math

import numpy as np
import pytest

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
from app.services.qudit.gates import (
    Circuit,
    Gate,
    GateKind,
    apply,
    c_matrix,
    perturb_rotations,
    r_matrix,
    run,
    x_matrix,
)
from app.services.qudit.state import StateVector, basis_state


def _unitary_of(circuit: Circuit) -> np.ndarray:
    dim = circuit.d**circuit.n
    columns = [run(StateVector(circuit.d, circuit.n, np.eye(dim)[c]), circuit).amps for c in range(dim)]
    return np.stack(columns, axis=1)


def _random_gate(rng, d, n) -> Gate:
    target = int(rng.integers(n))
    others = [p for p in range(n) if p != target]
    n_controls = int(rng.integers(0, min(2, len(others)) + 1))
    positions = rng.choice(others, size=n_controls, replace=False) if n_controls else []
    controls = tuple((int(p), int(rng.integers(d))) for p in positions)
    kind = str(rng.choice(["X", "R", "C"]))
    if kind == "C":
        return Gate(kind=GateKind.C, target=target, controls=controls)
    i, j = sorted(int(v) for v in rng.choice(d, size=2, replace=False))
    theta = float(rng.uniform(0, 2 * math.pi)) if kind == "R" else None
    return Gate(kind=kind, i=i, j=j, theta=theta, target=target, controls=controls)


def test_r_matrix_on_qubit():
    theta = 0.7
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    np.testing.assert_allclose(r_matrix(2, 0, 1, theta), [[c, s], [-s, c]])


def test_r_matrix_zero_angle_is_identity():
    np.testing.assert_array_equal(r_matrix(4, 1, 3, 0.0), np.eye(4))


def test_r_matrix_pi_on_qutrit():
    matrix = r_matrix(3, 1, 2, math.pi)
    np.testing.assert_allclose(matrix @ [0, 1, 0], [0, 0, -1], atol=1e-15)
    np.testing.assert_allclose(matrix @ [0, 0, 1], [0, 1, 0], atol=1e-15)
    np.testing.assert_array_equal(matrix @ [1, 0, 0], [1, 0, 0])


def test_r_matrix_is_orthogonal(rng):
    for _ in range(10):
        matrix = r_matrix(5, 1, 4, rng.uniform(-10, 10))
        np.testing.assert_allclose(matrix.T @ matrix, np.eye(5), atol=1e-14)


def test_x_matrix_swaps_and_squares_to_identity():
    matrix = x_matrix(4, 1, 3)
    np.testing.assert_array_equal(matrix @ [0, 0, 0, 1], [0, 1, 0, 0])
    np.testing.assert_array_equal(matrix @ matrix, np.eye(4))
    np.testing.assert_array_equal(x_matrix(2, 0, 1), [[0, 1], [1, 0]])


def test_c_matrix():
    np.testing.assert_array_equal(c_matrix(2), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(c_matrix(3) @ [0, 1, 0], [0, 1, 0])
    np.testing.assert_array_equal(c_matrix(4) @ [1, 0, 0, 0], [0, 0, 0, 1])


@pytest.mark.parametrize(
    "i, j, error",
    [(2, 1, LevelsNotOrdered), (1, 1, LevelsNotOrdered), (-1, 1, LevelOutOfRange), (0, 3, LevelOutOfRange)],
)
def test_matrix_level_errors(i, j, error):
    with pytest.raises(error):
        r_matrix(3, i, j, 0.1)
    with pytest.raises(error):
        x_matrix(3, i, j)


def test_gate_structure_errors():
    with pytest.raises(ControlOnTarget):
        Gate(kind="X", i=0, j=1, target=0, controls=((0, 1),))
    with pytest.raises(DuplicateControl):
        Gate(kind="X", i=0, j=1, target=0, controls=((1, 1), (1, 2)))
    with pytest.raises(InvalidGate):
        Gate(kind="R", i=0, j=1, target=0)
    with pytest.raises(InvalidGate):
        Gate(kind="C", i=0, j=1, target=0)
    with pytest.raises(LevelsNotOrdered):
        Gate(kind="X", i=1, j=0, target=0)


def test_gate_register_errors():
    gate = Gate(kind="X", i=0, j=2, target=2, controls=((0, 1),))
    with pytest.raises(PositionOutOfRange):
        apply(basis_state(3, [0, 0]), gate)
    with pytest.raises(LevelOutOfRange):
        apply(basis_state(2, [0, 0, 0]), gate)
    with pytest.raises(LevelOutOfRange):
        Circuit(d=2, n=2, gates=(Gate(kind="X", i=0, j=1, target=0, controls=((1, 2),)),))


def test_uncontrolled_x():
    out = apply(basis_state(3, [0]), Gate(kind="X", i=0, j=1, target=0))
    np.testing.assert_array_equal(out.amps, [0, 1, 0])


def test_controlled_rotation_fires_on_matching_control():
    theta = 1.1
    gate = Gate(kind="R", i=1, j=2, theta=theta, target=0, controls=((1, 2),))
    out = apply(basis_state(3, [2, 2]), gate)
    assert out.amps[7] == pytest.approx(math.sin(theta / 2))
    assert out.amps[8] == pytest.approx(math.cos(theta / 2))
    assert sum(1 for _ in out.nonzero()) == 2


def test_unsatisfied_control_leaves_state_bit_identical(rng):
    gate = Gate(kind="R", i=1, j=2, theta=1.1, target=0, controls=((1, 2),))
    np.testing.assert_array_equal(apply(basis_state(3, [2, 0]), gate).amps, basis_state(3, [2, 0]).amps)

    # amplitudes on the unsatisfied control branch are copied, not recomputed
    amps = rng.normal(size=27) + 1j * rng.normal(size=27)
    state = StateVector(3, 3, amps)
    out = apply(state, Gate(kind="R", i=0, j=2, theta=0.3, target=1, controls=((2, 1), (0, 0))))
    digits = np.array([state.digits_of(index) for index in range(27)])
    untouched = ~((digits[:, 2] == 1) & (digits[:, 0] == 0))
    np.testing.assert_array_equal(out.amps[untouched], state.amps[untouched])


def test_run_empty_circuit():
    state = basis_state(3, [1, 2])
    np.testing.assert_array_equal(run(state, Circuit(d=3, n=2)).amps, state.amps)


def test_run_splits_one_excitation_over_two_qubits():
    swap = Gate(kind="X", i=0, j=1, target=1, controls=((0, 1),))
    rotation = Gate(kind="R", i=0, j=1, theta=math.pi / 2, target=0, controls=((1, 1),))
    circuit = Circuit(d=2, n=2, gates=(swap, rotation, swap))
    out = run(basis_state(2, [1, 0]), circuit)
    np.testing.assert_allclose(out.amps, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-15)


def test_double_x_is_identity():
    gate = Gate(kind="X", i=0, j=1, target=0)
    for digits in ([0], [1], [2]):
        state = basis_state(3, digits)
        np.testing.assert_array_equal(run(state, Circuit(d=3, n=1, gates=(gate, gate))).amps, state.amps)


def test_run_register_mismatch():
    with pytest.raises(DimensionMismatch):
        run(basis_state(3, [0]), Circuit(d=3, n=2))


def test_random_gates_preserve_norm(rng):
    state = basis_state(4, [0, 1, 2])
    for _ in range(50):
        state = apply(state, _random_gate(rng, 4, 3))
        assert state.norm_squared() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d, n", [(2, 1), (2, 3), (3, 2), (4, 2), (3, 3)])
def test_random_circuits_are_unitary(rng, d, n):
    circuit = Circuit(d=d, n=n, gates=tuple(_random_gate(rng, d, n) for _ in range(12)))
    unitary = _unitary_of(circuit)
    np.testing.assert_allclose(unitary.conj().T @ unitary, np.eye(d**n), atol=1e-12)


def test_circuit_json_layout():
    circuit = Circuit(
        d=3,
        n=2,
        gates=(
            Gate(kind="X", i=0, j=1, target=1, controls=((0, 2),)),
            Gate(kind="R", i=1, j=2, theta=0.5, target=0, controls=((1, 1),)),
            Gate(kind="C", target=1),
        ),
    )
    assert circuit.to_json() == (
        '{"d": 3, "n": 2, "gates": [\n'
        '  {"kind": "X", "i": 0, "j": 1, "target": 1, "controls": [[0, 2]]},\n'
        '  {"kind": "R", "i": 1, "j": 2, "theta": 0.5, "target": 0, "controls": [[1, 1]]},\n'
        '  {"kind": "C", "target": 1, "controls": []}\n'
        "]}\n"
    )
    assert Circuit(d=2, n=1).to_json() == '{"d": 2, "n": 1, "gates": []}\n'


def test_circuit_json_reload_keeps_angles_exactly(rng):
    gates = tuple(_random_gate(rng, 3, 3) for _ in range(20))
    circuit = Circuit(d=3, n=3, gates=gates)
    reloaded = Circuit.from_json(circuit.to_json())
    assert reloaded.gates == circuit.gates
    assert reloaded.to_json() == circuit.to_json()


@pytest.mark.parametrize(
    "text",
    [
        '{"d": 3, "n": 2, "gates": [',
        "[1, 2]",
        '{"d": 3, "n": 2, "gates": [{"kind": "Z", "target": 0}]}',
        '{"d": 2, "n": 1, "gates": [{"kind": "R", "i": 0, "j": 1, "theta": NaN, "target": 0}]}',
    ],
    ids=["truncated", "not-an-object", "unknown-kind", "nan-angle"],
)
def test_circuit_json_rejects_malformed_text(text):
    with pytest.raises(MalformedInput) as exc:
        Circuit.from_json(text)
    assert exc.value.status_code == 422


def test_then_and_embed():
    a = Circuit(d=3, n=2, gates=(Gate(kind="X", i=0, j=1, target=0, controls=((1, 2),)),))
    b = Circuit(d=3, n=2, gates=(Gate(kind="C", target=1),))
    joined = a.then(b)
    assert [g.kind for g in joined.gates] == [GateKind.X, GateKind.C]

    wide = a.embed(4, 2)
    assert wide.n == 4
    assert wide.gates[0].target == 2
    assert wide.gates[0].controls == ((3, 2),)
    with pytest.raises(PositionOutOfRange):
        a.embed(3, 2)
    with pytest.raises(DimensionMismatch):
        a.then(Circuit(d=3, n=3))


def test_tally():
    circuit = Circuit(
        d=3,
        n=3,
        gates=(
            Gate(kind="X", i=0, j=1, target=1, controls=((0, 2),)),
            Gate(kind="R", i=1, j=2, theta=0.5, target=0, controls=((1, 1), (2, 2))),
            Gate(kind="X", i=0, j=1, target=1, controls=((0, 2),)),
            Gate(kind="C", target=2),
        ),
    )
    tally = circuit.tally()
    assert tally.by_kind == {"X": 2, "R": 1, "C": 1}
    assert tally.total == 4
    assert tally.doubly_controlled == 1
    assert tally.two_qudit_estimate == 2 + 8


def test_perturb_shifts_only_rotations():
    circuit = Circuit(
        d=2,
        n=2,
        gates=(
            Gate(kind="X", i=0, j=1, target=1, controls=((0, 1),)),
            Gate(kind="R", i=0, j=1, theta=1.0, target=0, controls=((1, 1),)),
        ),
    )
    shifted = perturb_rotations(circuit, 1e-3)
    assert shifted.gates[0] == circuit.gates[0]
    assert shifted.gates[1].theta == 1.0 + 1e-3
