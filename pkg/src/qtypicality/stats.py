"""Statistical experiments: outcome frequencies, typical sets, tail bounds.

A repeated n-outcome experiment is modeled two ways. Combinatorially: the
weight of every length-N outcome sequence is the product of its outcome
probabilities, and the atypical mass sums the weights of sequences whose
quadratic frequency deviation reaches the cutoff. Quantum mechanically: a
product-space structure whose final-time cells are the disjoint
outcome-sequence supports, so the same mass appears as an exclusion
measure. Both are exact and must agree.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import FactorUnitary, QuantumStructure
from .errors import ResourceLimitError, ValidationError

ENUMERATION_LIMIT = 2**20
COMPOSITION_LIMIT = 2 * 10**6


@dataclass(frozen=True)
class ExperimentSpec:
    """Outcome count, probabilities, repetition count, deviation cutoff."""

    n: int
    probs: tuple
    N: int
    epsilon: float

    def __init__(self, n: int, probs: Sequence[float], N: int, epsilon: float):
        probs = tuple(float(p) for p in probs)
        if int(n) != len(probs):
            raise ValidationError(f"expected {n} probabilities, got {len(probs)}")
        if any(p < 0.0 for p in probs):
            raise ValidationError("negative outcome probability")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {sum(probs)}")
        if int(N) < 1:
            raise ValidationError("repetition count must be at least 1")
        if float(epsilon) <= 0.0:
            raise ValidationError("deviation cutoff must be positive")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "epsilon", float(epsilon))


def frequency(s: int, sequence: Sequence[int]) -> float:
    """Relative frequency of outcome ``s`` in an outcome sequence."""
    if len(sequence) == 0:
        raise ValidationError("empty outcome sequence")
    return sum(1 for x in sequence if x == s) / len(sequence)


def deviation(sequence: Sequence[int], probs: Sequence[float]) -> float:
    """Quadratic distance of the empirical frequencies from ``probs``."""
    if len(sequence) == 0:
        raise ValidationError("empty outcome sequence")
    if any(not 0 <= x < len(probs) for x in sequence):
        raise ValidationError("outcome out of range for the probability vector")
    return sum((frequency(s, sequence) - p) ** 2 for s, p in enumerate(probs))


def _count_deviation(counts: Sequence[int], N: int, probs: Sequence[float]) -> float:
    return sum((k / N - p) ** 2 for k, p in zip(counts, probs))


def _compositions(total: int, parts: int):
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _multinomial(counts: Sequence[int]) -> int:
    out = math.factorial(sum(counts))
    for k in counts:
        out //= math.factorial(k)
    return out


def typical_set_complement_mass(spec: ExperimentSpec) -> float:
    """Exact product-measure mass of sequences with deviation >= epsilon.

    Sequences are grouped by their frequency-count vector (the deviation
    depends only on counts), with exact integer multinomial weights; the
    result is identical to full sequence enumeration. The mass is checked
    against the Markov-style bound sum_s p_s(1-p_s)/(eps*N) before return.
    """
    n_compositions = math.comb(spec.N + spec.n - 1, spec.n - 1)
    if n_compositions > COMPOSITION_LIMIT and spec.n ** spec.N > ENUMERATION_LIMIT:
        raise ResourceLimitError(
            f"{n_compositions} count vectors exceed the aggregation limit"
        )
    mass = 0.0
    for counts in _compositions(spec.N, spec.n):
        if _count_deviation(counts, spec.N, spec.probs) < spec.epsilon:
            continue
        weight = float(_multinomial(counts))
        for k, p in zip(counts, spec.probs):
            weight *= p**k
        mass += weight
    markov = sum(p * (1.0 - p) for p in spec.probs) / (spec.epsilon * spec.N)
    assert mass <= markov + 1e-12, f"tail mass {mass} exceeds Markov bound {markov}"
    return mass


def typical_set_bound(spec: ExperimentSpec) -> float:
    """The guaranteed upper bound 1/(epsilon * N) on the atypical mass."""
    return 1.0 / (spec.epsilon * spec.N)


def sequence_label(sequence: Sequence[int]) -> str:
    return ",".join(str(s) for s in sequence)


def _check_enumerable(spec: ExperimentSpec) -> None:
    if spec.n ** spec.N > ENUMERATION_LIMIT:
        raise ResourceLimitError(
            f"{spec.n}**{spec.N} sequences exceed the enumeration limit"
        )


def atypical_region(spec: ExperimentSpec) -> frozenset:
    """Cell labels of the sequences at or beyond the deviation cutoff."""
    _check_enumerable(spec)
    return frozenset(
        sequence_label(seq)
        for seq in itertools.product(range(spec.n), repeat=spec.N)
        if deviation(seq, spec.probs) >= spec.epsilon
    )


def typical_region(spec: ExperimentSpec) -> frozenset:
    """Cell labels of the sequences strictly inside the deviation cutoff."""
    _check_enumerable(spec)
    return frozenset(
        sequence_label(seq)
        for seq in itertools.product(range(spec.n), repeat=spec.N)
        if deviation(seq, spec.probs) < spec.epsilon
    )


def _splitting_unitary(probs: Sequence[float]) -> np.ndarray:
    """Real orthogonal matrix whose first column is the amplitude vector."""
    amps = np.sqrt(np.asarray(probs, dtype=float))
    n = amps.shape[0]
    w = np.zeros(n)
    w[0] = 1.0
    w -= amps
    norm_sq = float(w @ w)
    if norm_sq < 1e-30:
        return np.eye(n)
    # Householder reflection mapping e0 exactly onto the amplitude vector.
    return np.eye(n) - 2.0 * np.outer(w, w) / norm_sq


def build_measurement_chain(spec: ExperimentSpec) -> QuantumStructure:
    """Product-space structure whose step k splits the k-th measurement.

    The basis indexes outcome sequences (most significant digit first);
    device states are absorbed into the basis labels, which keeps the
    outcome-sequence supports exactly disjoint. Cell labels are
    comma-separated outcome digits, and the occupation of a sequence cell
    at the final time is the product of its outcome probabilities.
    """
    dim = spec.n ** spec.N
    if dim > ENUMERATION_LIMIT:
        raise ResourceLimitError(f"dimension {dim} exceeds {ENUMERATION_LIMIT}")
    split = _splitting_unitary(spec.probs)
    schedule = [
        FactorUnitary(split, index=i, num_factors=spec.N) for i in range(spec.N)
    ]
    cells = {
        sequence_label(seq): [idx]
        for idx, seq in enumerate(itertools.product(range(spec.n), repeat=spec.N))
    }
    psi0 = np.zeros(dim, dtype=complex)
    psi0[0] = 1.0
    return QuantumStructure(dim, psi0, schedule, cells)


def born_frequency_report(spec: ExperimentSpec) -> np.ndarray:
    """Expected outcome counts N * p_s from the single-system representation."""
    return spec.N * np.asarray(spec.probs, dtype=float)
