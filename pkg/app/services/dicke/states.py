"""
Analytic constructors for spin-s Dicke states.

closed_form_state, lowering_oracle_state and reconstruct_from_decomposition
build the same state along three independent routes; the verification
command compares them.
"""
import logging

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from app.core.exceptions import DimensionMismatch, SumMismatch
from app.services.dicke.combinatorics import (
    DickeSpec,
    ExactAmplitude,
    KVector,
    binomial,
    closed_form_weight,
    decompose,
    multinomial,
    normalization_a,
    sqrt_ratio,
)
from app.services.dicke.spin import apply_total, spin_matrices
from app.services.qudit.state import StateVector, basis_state, check_capacity, encode_index

logger = logging.getLogger(__name__)


def digit_table(d: int, n: int) -> np.ndarray:
    """Row I holds the digits of basis index I, least significant first."""
    index = np.arange(d**n)
    return np.stack([(index // d**p) % d for p in range(n)], axis=1)


def closed_form_state(spec: DickeSpec) -> StateVector:
    """|D_{n,k}> from its closed form, sqrt(prod_p binom(2s, j_p) / binom(2sn, k)) per basis state."""
    d, n = spec.d, spec.n
    check_capacity(d, n)
    digits = digit_table(d, n)
    support = np.flatnonzero(digits.sum(axis=1) == spec.k)

    # The amplitude depends only on the level occupations of a basis state
    occupations = np.stack([(digits[support] == j).sum(axis=1) for j in range(d)], axis=1)
    distinct, inverse = np.unique(occupations, axis=0, return_inverse=True)
    denominator = binomial(spec.k_max, spec.k)
    values = np.array(
        [
            ExactAmplitude(closed_form_weight(spec.s2, KVector(row).multiset()), denominator).to_float()
            for row in distinct
        ]
    )

    amps = np.zeros(d**n, dtype=np.complex128)
    amps[support] = values[np.asarray(inverse).reshape(-1)]
    return StateVector(d, n, amps)


def lowering_oracle_state(spec: DickeSpec) -> StateVector:
    """normalization_a * (sum_p S^-_p)^k |0...0>, built without the closed form."""
    lowering = spin_matrices(spec.s2).lowering
    state = basis_state(spec.d, [0] * spec.n)
    for _ in range(spec.k):
        state = apply_total(state, lowering)
    return StateVector(spec.d, spec.n, state.amps * normalization_a(spec).to_float())


def reference_state(spec: DickeSpec) -> StateVector:
    """|0>^(n-l-1) |i> |2s>^l, the product state circuits start from."""
    if spec.ell == spec.n:
        digits = [spec.s2] * spec.n
    else:
        digits = [spec.s2] * spec.ell + [spec.i] + [0] * (spec.n - spec.ell - 1)
    return basis_state(spec.d, digits)


def qudit_dicke_state(d: int, n: int, kvec: KVector) -> StateVector:
    """Uniform superposition of the distinct arrangements of the occupation multiset."""
    if len(kvec) != d:
        raise DimensionMismatch(f"Occupation vector has {len(kvec)} levels, expected {d}")
    if kvec.n != n:
        raise SumMismatch(f"Counts ({kvec}) sum to {kvec.n}, expected {n}")
    check_capacity(d, n)
    amplitude = sqrt_ratio(1, multinomial(n, kvec))
    amps = np.zeros(d**n, dtype=np.complex128)
    for word in multiset_permutations(kvec.multiset()):
        # word is written most significant qudit first
        amps[encode_index(d, word[::-1])] = amplitude
    return StateVector(d, n, amps)


def reconstruct_from_decomposition(spec: DickeSpec) -> StateVector:
    """sum over occupation vectors of alpha * qudit Dicke state."""
    check_capacity(spec.d, spec.n)
    amps = np.zeros(spec.d**spec.n, dtype=np.complex128)
    for kvec, alpha in decompose(spec):
        amps += alpha.to_float() * qudit_dicke_state(spec.d, spec.n, kvec).amps
    return StateVector(spec.d, spec.n, amps)
