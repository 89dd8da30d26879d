"""
Dicke toolkit service: one handler per command, shared by the CLI and the API
"""
import logging
from typing import Callable, Dict, Optional

import numpy as np

from app.core.exceptions import CapacityExceeded, ValidationError
from app.models.schemas import (
    AmplitudeEntry,
    CheckResult,
    CommandRequest,
    CommandResult,
    CountReport,
    DecomposeResult,
    DecomposeTerm,
    EntropyResult,
    EntropyRow,
    GateCounts,
    PrepareResult,
    SynthResult,
    VerifyReport,
)
from app.services.base import BaseService
from app.services.dicke.combinatorics import DickeSpec, decompose as decompose_state, g_count
from app.services.dicke.spin import (
    eigen_residual,
    s_squared_eigenvalue,
    sz_eigenvalue,
    total_s_squared,
    total_sz,
)
from app.services.dicke.states import (
    closed_form_state,
    lowering_oracle_state,
    reconstruct_from_decomposition,
    reference_state,
)
from app.services.entanglement import entropy_table, table_to_csv
from app.services.qudit.gates import Circuit, Gate, GateKind, GateTally, perturb_rotations, run
from app.services.qudit.state import BasisIndex, StateVector, check_capacity, fidelity
from app.services.synthesis.circuits import (
    circuit_for,
    circuit_tally,
    describe,
    full_T_count,
    gate_count_N,
)

logger = logging.getLogger(__name__)

# Residual allowed on the total-spin eigenvalue equations
EIGEN_TOLERANCE = 1e-9

# The one output format each command can produce
NATIVE_FORMATS = {
    "prepare": "state-text",
    "synth": "circuit-json",
    "entropy": "csv",
}

# Commands that hold a full statevector in memory
SIMULATING_COMMANDS = {"prepare", "verify"}


def duality_circuit(d: int, n: int) -> Circuit:
    """Level reversal on every qudit."""
    return Circuit(d=d, n=n, gates=tuple(Gate(kind=GateKind.C, target=p) for p in range(n)))


def _gate_counts(t_operators: int, tally: GateTally) -> GateCounts:
    return GateCounts(
        t_operators=t_operators,
        X=tally.by_kind["X"],
        R=tally.by_kind["R"],
        C=tally.by_kind["C"],
        total=tally.total,
        doubly_controlled=tally.doubly_controlled,
        two_qudit_estimate=tally.two_qudit_estimate,
    )


class DickeService(BaseService):
    """Service for preparing, verifying and analysing spin-s Dicke states"""

    def __init__(
        self,
        max_amplitudes: Optional[int] = None,
        max_lowerings: Optional[int] = None,
        max_terms: Optional[int] = None,
    ):
        super().__init__()
        self.max_amplitudes = max_amplitudes
        self.max_lowerings = max_lowerings
        self.max_terms = max_terms
        self.handlers: Dict[str, Callable[[CommandRequest, DickeSpec], CommandResult]] = {
            "prepare": self.prepare,
            "verify": self.verify,
            "synth": self.synth,
            "count": self.count,
            "decompose": self.decompose,
            "entropy": self.entropy,
        }

    def validate(self, request: CommandRequest) -> DickeSpec:
        spec = request.spec()
        native = NATIVE_FORMATS.get(request.subcommand)
        if request.format is not None and request.format != native:
            raise ValidationError(f"{request.subcommand} cannot write format {request.format}")
        if self.max_lowerings is not None and spec.k_max > self.max_lowerings:
            raise CapacityExceeded(f"2s*n = {spec.k_max} exceeds the limit of {self.max_lowerings}")
        if request.subcommand in SIMULATING_COMMANDS:
            check_capacity(spec.d, spec.n, self.max_amplitudes)
        if request.subcommand == "decompose" and self.max_terms is not None:
            terms = g_count(spec)
            if terms > self.max_terms:
                raise CapacityExceeded(f"{spec} has {terms} decomposition terms, above the limit of {self.max_terms}")
        return spec

    def process(self, request: CommandRequest) -> CommandResult:
        spec = self.validate(request)
        logger.info(f"Running {request.subcommand} for {spec}")
        return self.handlers[request.subcommand](request, spec)

    def _prepared(self, request: CommandRequest, spec: DickeSpec) -> tuple[Circuit, StateVector]:
        circuit = circuit_for(spec, request.simplified)
        if request.perturb:
            circuit = perturb_rotations(circuit, request.perturb)
        return circuit, run(reference_state(spec), circuit)

    def prepare(self, request: CommandRequest, spec: DickeSpec) -> PrepareResult:
        circuit, state = self._prepared(request, spec)
        amplitudes = [
            AmplitudeEntry(index=index, ket=BasisIndex(state.digits_of(index)).ket(), re=amp.real, im=amp.imag)
            for index, amp in state.nonzero()
        ]
        logger.info(f"✅ Prepared {spec} with {len(circuit.blocks)} T operators")
        return PrepareResult(
            s2=spec.s2,
            n=spec.n,
            k=spec.k,
            simplified=request.simplified,
            t_operators=len(circuit.blocks),
            gate_count=len(circuit),
            amplitudes=amplitudes,
            state_text=state.to_text(),
        )

    def verify(self, request: CommandRequest, spec: DickeSpec) -> VerifyReport:
        tol = request.tolerance
        _, prepared = self._prepared(request, spec)
        target = closed_form_state(spec)

        checks = []
        for name, state in (
            ("circuit fidelity", prepared),
            ("lowering-operator fidelity", lowering_oracle_state(spec)),
            ("decomposition fidelity", reconstruct_from_decomposition(spec)),
        ):
            value = fidelity(state, target)
            checks.append(CheckResult(name=name, value=value, passed=value >= 1 - tol))

        norm_error = abs(prepared.norm_squared() - 1.0)
        checks.append(CheckResult(name="circuit norm error", value=norm_error, passed=norm_error <= tol))

        mirrored = run(target, duality_circuit(spec.d, spec.n))
        dual_target = closed_form_state(spec.dual())
        difference = float(np.max(np.abs(mirrored.amps - dual_target.amps)))
        checks.append(
            CheckResult(
                name="duality",
                value=difference,
                passed=bool(np.array_equal(mirrored.amps, dual_target.amps)),
                detail=f"k -> {spec.dual().k}, exact permutation",
            )
        )

        sz_residual = eigen_residual(total_sz(target), target, sz_eigenvalue(spec.s2, spec.n, spec.k))
        checks.append(
            CheckResult(name="S^z eigen residual", value=sz_residual, passed=sz_residual <= EIGEN_TOLERANCE)
        )
        s2_residual = eigen_residual(total_s_squared(target), target, s_squared_eigenvalue(spec.s2, spec.n))
        checks.append(
            CheckResult(name="S^2 eigen residual", value=s2_residual, passed=s2_residual <= EIGEN_TOLERANCE)
        )

        passed = all(check.passed for check in checks)
        if passed:
            logger.info(f"✅ Verification passed for {spec}")
        else:
            failed = ", ".join(check.name for check in checks if not check.passed)
            logger.warning(f"❌ Verification failed for {spec}: {failed}")
        return VerifyReport(
            s2=spec.s2,
            n=spec.n,
            k=spec.k,
            simplified=request.simplified,
            tolerance=tol,
            perturb=request.perturb,
            checks=checks,
            passed=passed,
        )

    def synth(self, request: CommandRequest, spec: DickeSpec) -> SynthResult:
        circuit = circuit_for(spec, request.simplified)
        if request.perturb:
            circuit = perturb_rotations(circuit, request.perturb)
        return SynthResult(
            s2=spec.s2,
            n=spec.n,
            k=spec.k,
            simplified=request.simplified,
            t_operators=len(circuit.blocks),
            gate_count=len(circuit),
            circuit_json=circuit.to_json(),
            description=describe(circuit) if request.describe else None,
        )

    def count(self, request: CommandRequest, spec: DickeSpec) -> CountReport:
        return CountReport(
            s2=spec.s2,
            n=spec.n,
            k=spec.k,
            gate_count_N=gate_count_N(spec),
            full_T_count=full_T_count(spec.s2, spec.n),
            simplified_circuit=_gate_counts(*circuit_tally(spec.s2, spec.n, spec)),
            full_circuit=_gate_counts(*circuit_tally(spec.s2, spec.n)),
        )

    def decompose(self, request: CommandRequest, spec: DickeSpec) -> DecomposeResult:
        terms = [
            DecomposeTerm(counts=list(kvec.counts), p=alpha.p, q=alpha.q) for kvec, alpha in decompose_state(spec)
        ]
        return DecomposeResult(s2=spec.s2, n=spec.n, k=spec.k, terms=terms)

    def entropy(self, request: CommandRequest, spec: DickeSpec) -> EntropyResult:
        table = entropy_table(spec.s2, spec.n, spec.k, request.l, request.entropy_base)
        rows = [
            EntropyRow(**{key: (None if key == "S_gauss" and np.isnan(value) else value) for key, value in row.items()})
            for row in table.to_dict(orient="records")
        ]
        return EntropyResult(base=request.entropy_base, rows=rows, csv=table_to_csv(table))


_dicke_service: Optional[DickeService] = None


def get_dicke_service() -> DickeService:
    """Get or create the shared service instance"""
    global _dicke_service
    if _dicke_service is None:
        _dicke_service = DickeService()
    return _dicke_service
