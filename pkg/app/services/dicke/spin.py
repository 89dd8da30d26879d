"""
Local spin-s matrices and their sums over sites.

Level a of a qudit carries S^z eigenvalue m = s - a, so level 0 is the
all-up state and S^- moves level a to a + 1.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from app.services.qudit.state import StateVector, apply_matrix


@dataclass(frozen=True)
class SpinMatrices:
    sz: np.ndarray
    lowering: np.ndarray
    raising: np.ndarray


@lru_cache(maxsize=32)
def spin_matrices(s2: int) -> SpinMatrices:
    d = s2 + 1
    sz = np.diag([(s2 - 2 * a) / 2 for a in range(d)])
    lowering = np.zeros((d, d))
    for a in range(s2):
        # sqrt((s + m)(s + 1 - m)) with m = s - a
        lowering[a + 1, a] = np.sqrt((s2 - a) * (a + 1))
    return SpinMatrices(sz=sz, lowering=lowering, raising=lowering.T.copy())


def apply_total(state: StateVector, matrix: np.ndarray) -> StateVector:
    """sum_p O_p |state> for a single-site operator O."""
    amps = np.zeros_like(state.amps)
    for position in range(state.n):
        amps += apply_matrix(state, matrix, position).amps
    return StateVector(state.d, state.n, amps)


def total_sz(state: StateVector) -> StateVector:
    return apply_total(state, spin_matrices(state.d - 1).sz)


def total_s_squared(state: StateVector) -> StateVector:
    """S^2 = (S^z)^2 + (S^+ S^- + S^- S^+) / 2 for the total spin."""
    ops = spin_matrices(state.d - 1)
    sz_sq = apply_total(apply_total(state, ops.sz), ops.sz)
    up_down = apply_total(apply_total(state, ops.lowering), ops.raising)
    down_up = apply_total(apply_total(state, ops.raising), ops.lowering)
    return StateVector(state.d, state.n, sz_sq.amps + 0.5 * (up_down.amps + down_up.amps))


def sz_eigenvalue(s2: int, n: int, k: int) -> Fraction:
    return Fraction(s2 * n, 2) - k


def s_squared_eigenvalue(s2: int, n: int) -> Fraction:
    total = Fraction(s2 * n, 2)
    return total * (total + 1)


def eigen_residual(image: StateVector, state: StateVector, eigenvalue: Fraction) -> float:
    """|| O|psi> - lambda |psi> || given image = O|psi>."""
    return float(np.linalg.norm(image.amps - float(eigenvalue) * state.amps))
