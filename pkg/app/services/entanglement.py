"""
Bipartite entanglement of spin-s Dicke states.

Cutting |D_{n,k}> into the top n-l sites and the bottom l sites gives a
Schmidt decomposition over j, the excitations on the bottom block, with
hypergeometric weights

    lambda_j = binom(2sl, j) binom(2s(n-l), k-j) / binom(2sn, k).

Entropies are computed from these weights directly, never by tracing a
simulated state, so n in the hundreds is cheap.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional

import numpy as np
import pandas as pd

from app.core.config import get_settings
from app.core.exceptions import DegenerateVariance, PartitionOutOfRange
from app.services.dicke.combinatorics import DickeSpec, ExactAmplitude, binomial
from app.services.dicke.states import closed_form_state
from app.services.qudit.state import StateVector, check_capacity, tensor

logger = logging.getLogger(__name__)
settings = get_settings()

EntropyBase = Literal["d", "2"]
TABLE_COLUMNS = ["s2", "n", "k", "l", "S_exact", "sigma2", "S_gauss"]


def _check_partition(spec: DickeSpec, l: int) -> None:
    if not 1 <= l < spec.n:
        raise PartitionOutOfRange(f"Partition size l={l} must satisfy 1 <= l < n={spec.n}")


def _log_base(spec: DickeSpec, base: EntropyBase) -> float:
    return math.log(spec.d) if base == "d" else math.log(2)


def schmidt_range(spec: DickeSpec, l: int) -> range:
    return range(max(0, spec.k - spec.s2 * (spec.n - l)), min(spec.k, spec.s2 * l) + 1)


def schmidt_lambdas_exact(spec: DickeSpec, l: int) -> list[tuple[int, Fraction]]:
    _check_partition(spec, l)
    total = binomial(spec.k_max, spec.k)
    return [
        (j, Fraction(binomial(spec.s2 * l, j) * binomial(spec.s2 * (spec.n - l), spec.k - j), total))
        for j in schmidt_range(spec, l)
    ]


def schmidt_lambdas(spec: DickeSpec, l: int) -> list[tuple[int, float]]:
    return [(j, float(weight)) for j, weight in schmidt_lambdas_exact(spec, l)]


def entropy_exact(spec: DickeSpec, l: int, base: EntropyBase = "d") -> float:
    """-sum lambda_j log lambda_j; zero and unit weights contribute nothing."""
    weights = [w for _, w in schmidt_lambdas(spec, l) if 0.0 < w < 1.0]
    # fsum is order-independent, which keeps k -> 2sn-k and l -> n-l bit-identical
    nats = math.fsum(-w * math.log(w) for w in weights)
    return nats / _log_base(spec, base)


def variance(s2: int, n: int, k: int, l: int) -> Fraction:
    """k (2sn - k) l (n - l) / (2s n^3)."""
    return Fraction(k * (s2 * n - k) * l * (n - l), s2 * n**3)


def entropy_gaussian(spec: DickeSpec, l: int, base: EntropyBase = "d") -> tuple[float, float]:
    """(sigma^2, 1/2 log(2 pi e sigma^2)) of the Gaussian limit of the weights."""
    _check_partition(spec, l)
    sigma2 = variance(spec.s2, spec.n, spec.k, l)
    if sigma2 == 0:
        raise DegenerateVariance(f"Variance vanishes for {spec}, l={l}")
    sigma2_float = float(sigma2)
    return sigma2_float, 0.5 * math.log(2 * math.pi * math.e * sigma2_float) / _log_base(spec, base)


@dataclass(frozen=True)
class EntropyReport:
    spec: DickeSpec
    l: int
    lambdas: list[tuple[int, float]]
    S_exact: float
    sigma2: float
    S_gauss: Optional[float]
    jbar: Fraction
    base: EntropyBase = "d"


def entropy_report(spec: DickeSpec, l: int, base: EntropyBase = "d") -> EntropyReport:
    s_exact = entropy_exact(spec, l, base)
    try:
        sigma2, s_gauss = entropy_gaussian(spec, l, base)
    except DegenerateVariance:
        sigma2, s_gauss = 0.0, None
    return EntropyReport(
        spec=spec,
        l=l,
        lambdas=schmidt_lambdas(spec, l),
        S_exact=s_exact,
        sigma2=sigma2,
        S_gauss=s_gauss,
        jbar=Fraction(spec.k * l, spec.n),
        base=base,
    )


def schmidt_reconstruct(spec: DickeSpec, l: int) -> StateVector:
    """sum_j sqrt(lambda_j) |D_{n-l,k-j}> ⊗ |D_{l,j}>."""
    check_capacity(spec.d, spec.n)
    amps = np.zeros(spec.d**spec.n, dtype=np.complex128)
    for j, weight in schmidt_lambdas_exact(spec, l):
        top = closed_form_state(DickeSpec(spec.s2, spec.n - l, spec.k - j))
        bottom = closed_form_state(DickeSpec(spec.s2, l, j))
        amps += ExactAmplitude.from_square(weight).to_float() * tensor(top, bottom).amps
    return StateVector(spec.d, spec.n, amps)


def entropy_table(s2: int, n: int, k: int, l: Optional[int] = None, base: EntropyBase = "d") -> pd.DataFrame:
    """One row per partition; every l = 1 ... n-1 when l is omitted."""
    spec = DickeSpec(s2, n, k)
    partitions = [l] if l is not None else list(range(1, n))
    if not partitions:
        raise PartitionOutOfRange(f"No partition of n={n} sites")
    rows = []
    for size in partitions:
        report = entropy_report(spec, size, base)
        rows.append(
            {
                "s2": s2,
                "n": n,
                "k": k,
                "l": size,
                "S_exact": report.S_exact,
                "sigma2": report.sigma2,
                "S_gauss": np.nan if report.S_gauss is None else report.S_gauss,
            }
        )
    logger.info(f"Entropy table for {spec}: {len(rows)} partitions, base {base}")
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def table_to_csv(table: pd.DataFrame) -> str:
    return table.to_csv(
        index=False,
        float_format=f"%.{settings.OUTPUT_DIGITS}g",
        na_rep="",
        lineterminator="\n",
    )
