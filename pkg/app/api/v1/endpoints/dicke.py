"""
Dicke state endpoints - mirror the command-line subcommands
"""
import logging
from typing import Literal, Optional
from fastapi import APIRouter, Query
from pydantic import BaseModel, Field

from app.core.config import get_settings
from app.models.schemas import (
    CommandRequest,
    CountReport,
    DecomposeResult,
    EntropyResult,
    PrepareResult,
    SynthResult,
    VerifyReport,
)
from app.services.dicke_service import DickeService

logger = logging.getLogger(__name__)
settings = get_settings()

# Plain functions: FastAPI runs them in its threadpool, off the event loop
router = APIRouter()
dicke_service = DickeService(
    max_amplitudes=settings.API_MAX_AMPLITUDES,
    max_lowerings=settings.API_MAX_LOWERINGS,
    max_terms=settings.API_MAX_TERMS,
)


class StateRequest(BaseModel):
    """Request model for circuit-based commands"""
    s2: int = Field(..., ge=1, description="Doubled spin 2s")
    n: int = Field(..., ge=1, description="Number of sites")
    k: int = Field(..., ge=0, description="Number of lowerings")
    simplified: bool = False
    perturb: float = Field(0.0, allow_inf_nan=False)


class VerifyRequest(StateRequest):
    tolerance: float = Field(default_factory=lambda: settings.FIDELITY_TOLERANCE, gt=0, allow_inf_nan=False)


class SynthRequest(StateRequest):
    describe: bool = False


@router.post("/prepare", response_model=PrepareResult)
def prepare_state(request: StateRequest):
    """
    Run the preparation circuit on the reference state

    - **s2**: doubled spin (1 for s=1/2)
    - **n**: number of sites
    - **k**: number of lowerings
    - **simplified**: use the k-dependent circuit
    """
    return dicke_service.process(CommandRequest(subcommand="prepare", **request.model_dump()))


@router.post("/verify", response_model=VerifyReport)
def verify_state(request: VerifyRequest):
    """Compare circuit output with the closed form and the independent constructions"""
    return dicke_service.process(CommandRequest(subcommand="verify", **request.model_dump()))


@router.post("/synth", response_model=SynthResult)
def synthesize_circuit(request: SynthRequest):
    """Return the preparation circuit in the interchange format"""
    return dicke_service.process(CommandRequest(subcommand="synth", **request.model_dump()))


@router.get("/count", response_model=CountReport)
def count_gates(
    s2: int = Query(..., ge=1),
    n: int = Query(..., ge=1),
    k: int = Query(..., ge=0),
):
    """T-operator counts and gate tallies for both circuits"""
    return dicke_service.process(CommandRequest(subcommand="count", s2=s2, n=n, k=k))


@router.get("/decompose", response_model=DecomposeResult)
def decompose_state(
    s2: int = Query(..., ge=1),
    n: int = Query(..., ge=1),
    k: int = Query(..., ge=0),
):
    """Qudit Dicke decomposition, coefficients as sqrt(p/q)"""
    return dicke_service.process(CommandRequest(subcommand="decompose", s2=s2, n=n, k=k))


@router.get("/entropy", response_model=EntropyResult)
def entanglement_entropy(
    s2: int = Query(..., ge=1),
    n: int = Query(..., ge=2),
    k: int = Query(..., ge=0),
    l: Optional[int] = Query(None, ge=1),
    base: Literal["d", "2"] = Query("d"),
):
    """Exact and Gaussian entanglement entropy; sweeps every partition when l is omitted"""
    return dicke_service.process(
        CommandRequest(subcommand="entropy", s2=s2, n=n, k=k, l=l, entropy_base=base)
    )
