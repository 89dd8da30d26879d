"""
Pydantic schemas for request/response models
"""
from typing import Literal, Optional
from pydantic import BaseModel, Field

from app.core.config import get_settings
from app.services.dicke.combinatorics import DickeSpec

Subcommand = Literal["prepare", "verify", "synth", "count", "decompose", "entropy"]
OutputFormat = Literal["circuit-json", "state-text", "csv"]
EntropyBase = Literal["d", "2"]


class CommandRequest(BaseModel):
    """One command-line or HTTP invocation"""
    subcommand: Subcommand = Field(..., description="Operation to run")
    s2: int = Field(..., ge=1, description="Doubled spin 2s; s = s2/2")
    n: int = Field(..., ge=1, description="Number of sites")
    k: int = Field(..., ge=0, description="Number of spin lowerings, 0 <= k <= s2*n")
    l: Optional[int] = Field(None, ge=1, description="Partition size for entropy; omit to sweep")
    simplified: bool = Field(False, description="Use the k-dependent circuit")
    out: Optional[str] = Field(None, description="Output path; stdout when omitted")
    format: Optional[OutputFormat] = None
    tolerance: float = Field(default_factory=lambda: get_settings().FIDELITY_TOLERANCE, gt=0, allow_inf_nan=False)
    entropy_base: EntropyBase = Field(default_factory=lambda: get_settings().ENTROPY_BASE)
    perturb: float = Field(0.0, allow_inf_nan=False, description="Added to every rotation angle before simulating")
    describe: bool = Field(False, description="Print T provenance instead of circuit JSON")

    def spec(self) -> DickeSpec:
        return DickeSpec(self.s2, self.n, self.k)


class CommandResult(BaseModel):
    """Base for command outputs"""

    def render(self) -> str:
        raise NotImplementedError("Subclasses must implement render method")


class AmplitudeEntry(BaseModel):
    index: int
    ket: str
    re: float
    im: float


class PrepareResult(CommandResult):
    s2: int
    n: int
    k: int
    simplified: bool
    t_operators: int
    gate_count: int
    amplitudes: list[AmplitudeEntry]
    state_text: str

    def render(self) -> str:
        return self.state_text


class CheckResult(BaseModel):
    name: str
    value: float
    passed: bool
    detail: str = ""


class VerifyReport(CommandResult):
    s2: int
    n: int
    k: int
    simplified: bool
    tolerance: float
    perturb: float = 0.0
    checks: list[CheckResult]
    passed: bool

    def render(self) -> str:
        lines = [f"verify s2={self.s2} n={self.n} k={self.k} simplified={self.simplified} tolerance={self.tolerance:g}"]
        if self.perturb:
            lines.append(f"rotation angles perturbed by {self.perturb:g}")
        for check in self.checks:
            mark = "ok" if check.passed else "FAIL"
            line = f"  {check.name:<28} {check.value:.17g}  {mark}"
            if check.detail:
                line += f"  ({check.detail})"
            lines.append(line)
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


class SynthResult(CommandResult):
    s2: int
    n: int
    k: int
    simplified: bool
    t_operators: int
    gate_count: int
    circuit_json: str
    description: Optional[str] = None

    def render(self) -> str:
        return self.description if self.description is not None else self.circuit_json


class GateCounts(BaseModel):
    t_operators: int
    X: int
    R: int
    C: int
    total: int
    doubly_controlled: int
    two_qudit_estimate: int


class CountReport(CommandResult):
    s2: int
    n: int
    k: int
    gate_count_N: int
    full_T_count: int
    simplified_circuit: GateCounts
    full_circuit: GateCounts

    def render(self) -> str:
        lines = [
            f"count s2={self.s2} n={self.n} k={self.k}",
            f"T operators (simplified): {self.gate_count_N}",
            f"T operators (full): {self.full_T_count}",
        ]
        for label, counts in (("simplified", self.simplified_circuit), ("full", self.full_circuit)):
            lines.append(
                f"{label} gates: X={counts.X} R={counts.R} C={counts.C} total={counts.total} "
                f"doubly-controlled={counts.doubly_controlled} two-qudit-estimate={counts.two_qudit_estimate}"
            )
        return "\n".join(lines) + "\n"


class DecomposeTerm(BaseModel):
    counts: list[int]
    p: int
    q: int


class DecomposeResult(CommandResult):
    s2: int
    n: int
    k: int
    terms: list[DecomposeTerm]

    def render(self) -> str:
        return "".join(f"{' '.join(str(c) for c in term.counts)}  {term.p} {term.q}\n" for term in self.terms)


class EntropyRow(BaseModel):
    s2: int
    n: int
    k: int
    l: int
    S_exact: float
    sigma2: float
    S_gauss: Optional[float] = None


class EntropyResult(CommandResult):
    base: EntropyBase
    rows: list[EntropyRow]
    csv: str

    def render(self) -> str:
        return self.csv
