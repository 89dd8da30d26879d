import math

import numpy as np
import pytest

from app.core.exceptions import DimensionMismatch, SumMismatch
from app.services.dicke.combinatorics import DickeSpec, KVector, coeff_c
from app.services.dicke.spin import (
    eigen_residual,
    s_squared_eigenvalue,
    spin_matrices,
    sz_eigenvalue,
    total_s_squared,
    total_sz,
)
from app.services.dicke.states import (
    closed_form_state,
    lowering_oracle_state,
    qudit_dicke_state,
    reconstruct_from_decomposition,
    reference_state,
)
from app.services.dicke_service import duality_circuit
from app.services.qudit.gates import run
from app.services.qudit.state import basis_state, encode_index, fidelity, tensor
from tests.conftest import all_specs

ORACLE_SPECS = all_specs([1, 2, 3, 4], [1, 2, 3, 4, 5])


def test_three_qubits_two_excitations():
    state = closed_form_state(DickeSpec(1, 3, 2))
    assert {i for i, _ in state.nonzero()} == {3, 5, 6}
    for index in (3, 5, 6):
        assert state.amps[index] == pytest.approx(1 / math.sqrt(3), abs=1e-15)


def test_three_spin_one_sites_two_lowerings():
    state = closed_form_state(DickeSpec(2, 3, 2))
    for digits in ((1, 1, 0), (1, 0, 1), (0, 1, 1)):
        assert state.amps[encode_index(3, digits)] == pytest.approx(2 / math.sqrt(15), abs=1e-15)
    for digits in ((2, 0, 0), (0, 2, 0), (0, 0, 2)):
        assert state.amps[encode_index(3, digits)] == pytest.approx(1 / math.sqrt(15), abs=1e-15)
    assert sum(1 for _ in state.nonzero()) == 6


def test_no_lowerings_is_all_up():
    for builder in (closed_form_state, lowering_oracle_state, reference_state):
        np.testing.assert_array_equal(builder(DickeSpec(3, 3, 0)).amps, basis_state(4, [0, 0, 0]).amps)


def test_lowering_oracle_examples():
    np.testing.assert_allclose(
        lowering_oracle_state(DickeSpec(1, 3, 2)).amps, closed_form_state(DickeSpec(1, 3, 2)).amps, atol=1e-12
    )
    np.testing.assert_allclose(
        lowering_oracle_state(DickeSpec(3, 2, 3)).amps, closed_form_state(DickeSpec(3, 2, 3)).amps, atol=1e-12
    )


def test_spin_matrices():
    ops = spin_matrices(2)
    np.testing.assert_array_equal(np.diag(ops.sz), [1, 0, -1])
    np.testing.assert_allclose(ops.lowering, [[0, 0, 0], [math.sqrt(2), 0, 0], [0, math.sqrt(2), 0]])
    # [S^+, S^-] = 2 S^z
    for s2 in range(1, 6):
        ops = spin_matrices(s2)
        commutator = ops.raising @ ops.lowering - ops.lowering @ ops.raising
        np.testing.assert_allclose(commutator, 2 * ops.sz, atol=1e-12)


@pytest.mark.parametrize(
    "spec, digits",
    [
        (DickeSpec(2, 3, 3), [2, 1, 0]),
        (DickeSpec(2, 3, 2), [2, 0, 0]),
        (DickeSpec(1, 4, 2), [1, 1, 0, 0]),
        (DickeSpec(3, 1, 2), [2]),
        (DickeSpec(2, 3, 6), [2, 2, 2]),
        (DickeSpec(3, 3, 7), [3, 3, 1]),
    ],
    ids=str,
)
def test_reference_state(spec, digits):
    np.testing.assert_array_equal(reference_state(spec).amps, basis_state(spec.d, digits).amps)


def test_qudit_dicke_state():
    state = qudit_dicke_state(3, 3, KVector((1, 2, 0)))
    for index in (encode_index(3, (0, 1, 1)), encode_index(3, (1, 0, 1)), encode_index(3, (1, 1, 0))):
        assert state.amps[index] == pytest.approx(1 / math.sqrt(3))
    np.testing.assert_array_equal(qudit_dicke_state(3, 2, KVector((2, 0, 0))).amps, basis_state(3, [0, 0]).amps)
    np.testing.assert_allclose(
        qudit_dicke_state(2, 3, KVector((1, 2))).amps, closed_form_state(DickeSpec(1, 3, 2)).amps, atol=1e-15
    )
    with pytest.raises(DimensionMismatch):
        qudit_dicke_state(3, 3, KVector((1, 2)))
    with pytest.raises(SumMismatch):
        qudit_dicke_state(3, 3, KVector((1, 1, 0)))


def test_decomposition_rebuilds_spin_three_halves():
    spec = DickeSpec(3, 2, 3)
    assert fidelity(reconstruct_from_decomposition(spec), closed_form_state(spec)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("spec", ORACLE_SPECS, ids=str)
def test_three_constructions_agree(spec):
    closed = closed_form_state(spec)
    lowered = lowering_oracle_state(spec)
    rebuilt = reconstruct_from_decomposition(spec)
    assert closed.is_normalized()
    assert fidelity(closed, lowered) >= 1 - 1e-10
    assert fidelity(closed, rebuilt) >= 1 - 1e-10
    assert fidelity(lowered, rebuilt) >= 1 - 1e-10
    np.testing.assert_allclose(lowered.amps, closed.amps, atol=1e-12)
    np.testing.assert_allclose(rebuilt.amps, closed.amps, atol=1e-12)


@pytest.mark.parametrize("spec", [s for s in ORACLE_SPECS if s.n >= 2], ids=str)
def test_peeling_one_site(spec):
    expected = np.zeros(spec.d**spec.n, dtype=complex)
    for j in range(spec.d):
        c = coeff_c(spec, j)
        if c.p == 0:
            continue
        rest = closed_form_state(DickeSpec(spec.s2, spec.n - 1, spec.k - j))
        expected += c.to_float() * tensor(rest, basis_state(spec.d, [j])).amps
    np.testing.assert_allclose(closed_form_state(spec).amps, expected, atol=1e-12)


@pytest.mark.parametrize("spec", ORACLE_SPECS, ids=str)
def test_level_reversal_maps_to_dual_exactly(spec):
    mirrored = run(closed_form_state(spec), duality_circuit(spec.d, spec.n))
    np.testing.assert_array_equal(mirrored.amps, closed_form_state(spec.dual()).amps)


@pytest.mark.parametrize("spec", all_specs([1, 2, 3], [2, 3, 4]), ids=str)
def test_total_spin_eigenstate(spec):
    state = closed_form_state(spec)
    assert eigen_residual(total_sz(state), state, sz_eigenvalue(spec.s2, spec.n, spec.k)) <= 1e-12
    assert eigen_residual(total_s_squared(state), state, s_squared_eigenvalue(spec.s2, spec.n)) <= 1e-9


def test_eigenvalues():
    assert sz_eigenvalue(1, 3, 2) == -0.5
    assert s_squared_eigenvalue(2, 3) == 12
