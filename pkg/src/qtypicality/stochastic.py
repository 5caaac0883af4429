"""Finite Markov processes and the quantum/stochastic correspondence audit.

The twin of a quantum structure is a finite-state Markov chain sharing its
cell labels and step count. Its cylinder-set measure is exactly additive,
which is precisely the property the chained quantum squared norm lacks; the
audit quantifies both sides.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import core, typicality
from .core import QuantumStructure, SSet
from .errors import SchemaError, TimeRangeError, ValidationError

ROW_SUM_TOL = 1e-12
MARGINAL_TOL = 1e-10
REGIME_THRESHOLD = 0.08
NONADDITIVITY_WITNESS = 0.1


class StochasticProcessSpec:
    """States, initial distribution, and one row-stochastic kernel per step."""

    def __init__(
        self,
        states: Sequence[str],
        initial: Sequence[float],
        kernels: Sequence,
    ):
        self.states = tuple(str(s) for s in states)
        if len(set(self.states)) != len(self.states):
            raise ValidationError("duplicate state labels")
        self.initial = np.asarray(initial, dtype=float)
        if self.initial.shape != (len(self.states),):
            raise ValidationError("initial distribution has wrong length")
        if np.any(self.initial < 0.0) or abs(self.initial.sum() - 1.0) > ROW_SUM_TOL:
            raise ValidationError("initial distribution is not a probability vector")
        self.kernels = tuple(np.asarray(k, dtype=float) for k in kernels)
        n = len(self.states)
        for t, kernel in enumerate(self.kernels):
            if kernel.shape != (n, n):
                raise ValidationError(f"kernel {t} is not {n}x{n}")
            if np.any(kernel < 0.0) or np.any(np.abs(kernel.sum(axis=1) - 1.0) > ROW_SUM_TOL):
                raise ValidationError(f"kernel {t} is not row-stochastic")
        self._index = {s: i for i, s in enumerate(self.states)}

    @property
    def n_steps(self) -> int:
        return len(self.kernels)

    @property
    def times(self) -> range:
        return range(self.n_steps + 1)

    def region_mask(self, region: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self.states), dtype=bool)
        for label in region:
            try:
                mask[self._index[label]] = True
            except KeyError:
                raise SchemaError(f"unknown state label {label!r}") from None
        return mask

    def marginal(self, time: int) -> np.ndarray:
        if not 0 <= time <= self.n_steps:
            raise TimeRangeError(f"time index {time} outside 0..{self.n_steps}")
        dist = self.initial.copy()
        for t in range(time):
            dist = dist @ self.kernels[t]
        return dist


def cylinder_measure(spec: StochasticProcessSpec, ssets: Sequence[SSet]) -> float:
    """Exact measure of the intersection of s-sets by masked propagation."""
    by_time: dict[int, np.ndarray] = {}
    for sset in ssets:
        if not 0 <= sset.time <= spec.n_steps:
            raise TimeRangeError(f"time index {sset.time} outside 0..{spec.n_steps}")
        mask = spec.region_mask(sset.region)
        by_time[sset.time] = by_time.get(sset.time, np.ones_like(mask)) & mask
    if not by_time:
        return 1.0
    last = max(by_time)
    dist = spec.initial.copy()
    for t in range(last + 1):
        if t in by_time:
            dist = dist * by_time[t]
        if t < last:
            dist = dist @ spec.kernels[t]
    return float(dist.sum())


def mu_sset(spec: StochasticProcessSpec, sset: SSet) -> float:
    return cylinder_measure(spec, [sset])


def mu_symmetric_difference(spec: StochasticProcessSpec, s1: SSet, s2: SSet) -> float:
    """mu(S1 and not S2) + mu(not S1 and S2)."""
    all_states = frozenset(spec.states)
    c1 = SSet(s1.time, all_states - s1.region)
    c2 = SSet(s2.time, all_states - s2.region)
    return cylinder_measure(spec, [s1, c2]) + cylinder_measure(spec, [c1, s2])


def mu_typicality(
    spec: StochasticProcessSpec,
    s1: SSet,
    s2: SSet,
    threshold: float = REGIME_THRESHOLD,
) -> typicality.TypicalityReport:
    """Probabilistic mutual typicality report for a pair of s-sets."""
    return typicality.mutual_typicality_measure_mu(
        mu_sset(spec, s1),
        mu_sset(spec, s2),
        mu_symmetric_difference(spec, s1, s2),
        threshold=threshold,
    )


def matched_markov_chain(structure: QuantumStructure) -> StochasticProcessSpec:
    """Markov twin whose single-time marginals equal the cell occupations.

    Each step first tries the per-branch occupation transfer (mask one cell,
    evolve one step, read cell masses). Where interference makes that
    transfer miss the true next-time marginal, the step falls back to rows
    equal to the next marginal, which matches it by construction.
    """
    labels = structure.labels
    n = len(labels)
    occs = [
        np.array([core.occupations(structure, t)[lab] for lab in labels])
        for t in structure.times
    ]
    kernels = []
    for t in range(structure.n_steps):
        kernel = np.empty((n, n))
        psi = core.state_at(structure, t).amplitudes
        for i, label in enumerate(labels):
            branch = psi * structure.region_mask([label])
            mass = float(np.vdot(branch, branch).real)
            if mass < 1e-14:
                kernel[i] = occs[t + 1]
                continue
            moved = core._apply_step(structure.schedule[t], branch)
            weights = np.abs(moved) ** 2
            kernel[i] = [
                np.sum(weights[structure.cells[lab]]) / mass for lab in labels
            ]
        if np.abs(occs[t] @ kernel - occs[t + 1]).max() > MARGINAL_TOL:
            kernel = np.tile(occs[t + 1], (n, 1))
        kernels.append(kernel)
    return StochasticProcessSpec(labels, occs[0], kernels)


@dataclass(frozen=True)
class CorrespondenceAudit:
    """Witness values for the single-time, regime, and additivity checks."""

    c3_max_error: float
    c3_pass: bool
    c5_pairs_in_regime: int
    c5_agreements: int
    c5_pass: bool
    c7_mu_additive: bool
    c7_max_defect: float
    c7_witness: dict | None

    @property
    def passed(self) -> bool:
        return self.c3_pass and self.c5_pass and self.c7_mu_additive

    def to_dict(self) -> dict:
        return {
            "c3": {"max_error": self.c3_max_error, "pass": self.c3_pass},
            "c5": {
                "pairs_in_regime": self.c5_pairs_in_regime,
                "agreements": self.c5_agreements,
                "pass": self.c5_pass,
            },
            "c7": {
                "mu_additive": self.c7_mu_additive,
                "max_quantum_defect": self.c7_max_defect,
                "witness": self.c7_witness,
            },
            "passed": self.passed,
        }


def correspondence_audit(
    q: QuantumStructure,
    c: StochasticProcessSpec,
    pairing: Mapping[int, int] | None = None,
    marginal_tol: float = MARGINAL_TOL,
) -> CorrespondenceAudit:
    """Compare a structure with its stochastic twin.

    Checks single-time marginal agreement, verdict agreement for pairs
    where both measures sit inside the typicality regime, additivity of the
    cylinder measure, and searches for a chained-norm nonadditivity witness
    on the quantum side. A marginal mismatch is reported, not raised.
    """
    if set(q.labels) != set(c.states):
        raise ValidationError("structure and chain use different cell labels")
    if pairing is None:
        if q.n_steps != c.n_steps:
            raise ValidationError("step counts differ and no pairing was given")
        pairing = {t: t for t in q.times}

    # (c3): occupations against single-time marginals.
    c3_max = 0.0
    for qt, ct in pairing.items():
        occ = core.occupations(q, qt)
        for label in q.labels:
            mu = mu_sset(c, SSet(ct, {label}))
            c3_max = max(c3_max, abs(occ[label] - mu))
    c3_pass = c3_max <= marginal_tol

    # (c5)/(c6): verdict agreement inside the typicality regime, over all
    # singleton and full regions at the paired times.
    full = frozenset(q.labels)
    regions = [frozenset({label}) for label in q.labels] + [full]
    ssets = [
        (SSet(qt, r), SSet(ct, r))
        for qt, ct in sorted(pairing.items())
        for r in regions
    ]
    in_regime = 0
    agreements = 0
    for (qa, ca), (qb, cb) in itertools.combinations(ssets, 2):
        rep_q = typicality.mutual_typicality(q, qa, qb, threshold=REGIME_THRESHOLD)
        rep_mu = mu_typicality(c, ca, cb, threshold=REGIME_THRESHOLD)
        if rep_q.degenerate or rep_mu.degenerate:
            continue
        if rep_q.m_big <= REGIME_THRESHOLD and rep_mu.m_big <= REGIME_THRESHOLD:
            in_regime += 1
            if rep_q.verdict is rep_mu.verdict:
                agreements += 1
    c5_pass = in_regime == agreements

    # (c7): additivity of mu, nonadditivity witness for the chained norm.
    mu_additive = True
    max_defect = 0.0
    witness = None
    for (qt1, ct1), (qt2, ct2) in itertools.combinations(sorted(pairing.items()), 2):
        for label2 in q.labels:
            s2q, s2c = SSet(qt2, {label2}), SSet(ct2, {label2})
            chained_sum = sum(
                core.chain_project(q, [SSet(qt1, {lab}), s2q]).norm_sq
                for lab in q.labels
            )
            total = core.heisenberg_project(
                q, s2q, core.ProjectedVector(q.psi0, 0)
            ).norm_sq
            defect = abs(total - chained_sum)
            if defect > max_defect:
                max_defect = defect
                if defect > NONADDITIVITY_WITNESS:
                    witness = {
                        "t1": qt1,
                        "t2": qt2,
                        "region2": [label2],
                        "quantum_total": total,
                        "quantum_termwise_sum": chained_sum,
                    }
            mu_sum = sum(
                cylinder_measure(c, [SSet(ct1, {lab}), s2c]) for lab in q.labels
            )
            if abs(mu_sset(c, s2c) - mu_sum) > 1e-12:
                mu_additive = False
    return CorrespondenceAudit(
        c3_max_error=c3_max,
        c3_pass=c3_pass,
        c5_pairs_in_regime=in_regime,
        c5_agreements=agreements,
        c5_pass=c5_pass,
        c7_mu_additive=mu_additive,
        c7_max_defect=max_defect,
        c7_witness=witness,
    )


# -- scenario JSON (the "stochastic" section) -------------------------------


def process_from_dict(data: Mapping) -> StochasticProcessSpec:
    try:
        return StochasticProcessSpec(
            states=[str(s) for s in data["states"]],
            initial=data["initial"],
            kernels=data["kernels"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed stochastic section: {exc}") from exc


def process_to_dict(spec: StochasticProcessSpec) -> dict:
    return {
        "states": list(spec.states),
        "initial": spec.initial.tolist(),
        "kernels": [k.tolist() for k in spec.kernels],
    }
