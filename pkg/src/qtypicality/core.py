"""Finite-dimensional quantum structures and Heisenberg-projected vectors.

A quantum structure bundles a Hilbert space of dimension ``dim``, a unit
initial vector, a schedule of per-step unitaries (step ``k`` evolves time
index ``k`` to ``k + 1``), and a labeled partition of the basis index set
that plays the role of a projection-valued measure on configuration space.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to evaluate concurrently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import SchemaError, TimeRangeError, ValidationError

UNITARITY_TOL = 1e-10
NORM_TOL = 1e-12


class FactorUnitary:
    """A unitary acting on one tensor factor of a ``base**num_factors`` space.

    Stores only the small ``base x base`` factor matrix; application reshapes
    the state vector instead of materializing the full Kronecker product, so
    it stays cheap at dimensions where a dense matrix would not fit.
    """

    def __init__(self, matrix: np.ndarray, index: int, num_factors: int):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError("factor matrix must be square")
        if not 0 <= index < num_factors:
            raise ValidationError(f"factor index {index} out of range")
        self.matrix = matrix
        self.index = index
        self.num_factors = num_factors
        self.base = matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.base ** self.num_factors

    def apply(self, vec: np.ndarray, adjoint: bool = False) -> np.ndarray:
        m = self.matrix.conj().T if adjoint else self.matrix
        t = vec.reshape((self.base,) * self.num_factors)
        t = np.moveaxis(np.tensordot(m, t, axes=(1, self.index)), 0, self.index)
        return np.ascontiguousarray(t).reshape(-1)

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.abs(m.conj().T @ m - np.eye(self.base)).max())


def _step_dim(step) -> int:
    if isinstance(step, np.ndarray):
        return step.shape[0]
    return step.dim


def _step_defect(step) -> float:
    if isinstance(step, np.ndarray):
        return float(np.abs(step.conj().T @ step - np.eye(step.shape[0])).max())
    return step.unitarity_defect()


def _apply_step(step, vec: np.ndarray, adjoint: bool = False) -> np.ndarray:
    if isinstance(step, np.ndarray):
        return step.conj().T @ vec if adjoint else step @ vec
    return step.apply(vec, adjoint=adjoint)


@dataclass(frozen=True)
class SSet:
    """Single-time cylinder set: a (time index, set of cell labels) pair."""

    time: int
    region: frozenset

    def __init__(self, time: int, region: Iterable[str]):
        object.__setattr__(self, "time", int(time))
        object.__setattr__(self, "region", frozenset(region))


@dataclass(frozen=True)
class ProjectedVector:
    """A (possibly non-normalized) vector tagged with its expression time."""

    amplitudes: np.ndarray
    at_time: int

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


class QuantumStructure:
    """Hilbert dimension, initial state, step unitaries, and labeled cells."""

    def __init__(
        self,
        dim: int,
        psi0: np.ndarray,
        schedule: Sequence,
        cells: Mapping[str, Iterable[int]],
    ):
        self.dim = int(dim)
        self.psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
        if self.psi0.shape[0] != self.dim:
            raise ValidationError("psi0 length does not match dim")
        if abs(np.vdot(self.psi0, self.psi0).real - 1.0) > NORM_TOL:
            raise ValidationError("psi0 is not unit norm")

        self.schedule = tuple(
            np.asarray(s, dtype=complex) if not isinstance(s, FactorUnitary) else s
            for s in schedule
        )
        for k, step in enumerate(self.schedule):
            if _step_dim(step) != self.dim:
                raise ValidationError(f"schedule step {k} has wrong dimension")
            if _step_defect(step) > UNITARITY_TOL:
                raise ValidationError(f"schedule step {k} is not unitary")

        self.cells = {
            str(label): np.asarray(sorted(idx), dtype=np.intp)
            for label, idx in cells.items()
        }
        cell_id = np.full(self.dim, -1, dtype=np.intp)
        self._labels = tuple(self.cells)
        self._label_to_id = {}
        for cid, (label, idx) in enumerate(self.cells.items()):
            if idx.size and (idx.min() < 0 or idx.max() >= self.dim):
                raise ValidationError(f"cell {label!r} has out-of-range indices")
            if np.any(cell_id[idx] != -1):
                raise ValidationError(f"cell {label!r} overlaps another cell")
            cell_id[idx] = cid
            self._label_to_id[label] = cid
        if np.any(cell_id == -1):
            raise ValidationError("cells do not cover the basis index set")
        self._cell_id = cell_id

    # -- time bookkeeping ---------------------------------------------------

    @property
    def n_steps(self) -> int:
        return len(self.schedule)

    @property
    def times(self) -> range:
        return range(self.n_steps + 1)

    def check_time(self, t: int) -> int:
        t = int(t)
        if not 0 <= t <= self.n_steps:
            raise TimeRangeError(f"time index {t} outside 0..{self.n_steps}")
        return t

    # -- cells --------------------------------------------------------------

    @property
    def labels(self) -> tuple:
        return self._labels

    def region_mask(self, region: Iterable[str]) -> np.ndarray:
        ids = []
        for label in region:
            try:
                ids.append(self._label_to_id[label])
            except KeyError:
                raise SchemaError(f"unknown cell label {label!r}") from None
        if len(ids) == len(self._labels):
            return np.ones(self.dim, dtype=bool)
        return np.isin(self._cell_id, np.asarray(ids, dtype=np.intp))

    def check_sset(self, sset: SSet) -> SSet:
        self.check_time(sset.time)
        for label in sset.region:
            if label not in self._label_to_id:
                raise SchemaError(f"unknown cell label {label!r}")
        return sset


def evolve(structure: QuantumStructure, state: ProjectedVector, to_time: int) -> ProjectedVector:
    """Apply forward schedule steps (or adjoints, going backward) to ``state``."""
    t0 = structure.check_time(state.at_time)
    t1 = structure.check_time(to_time)
    vec = state.amplitudes
    if t1 >= t0:
        for k in range(t0, t1):
            vec = _apply_step(structure.schedule[k], vec)
    else:
        for k in range(t0 - 1, t1 - 1, -1):
            vec = _apply_step(structure.schedule[k], vec, adjoint=True)
    return ProjectedVector(vec, t1)


def state_at(structure: QuantumStructure, time: int) -> ProjectedVector:
    """The full state Psi(t) obtained by evolving the initial vector."""
    return evolve(structure, ProjectedVector(structure.psi0, 0), time)


def heisenberg_project(
    structure: QuantumStructure,
    sset: SSet,
    state: ProjectedVector,
    at_time: int | None = None,
) -> ProjectedVector:
    """Project ``state`` onto the cylinder set's region at its time.

    The state is evolved to ``sset.time``, masked to the region's cells, and
    expressed at ``at_time`` (default: the state's original time). Repeating
    the same projection is an exact no-op.
    """
    structure.check_sset(sset)
    ref = state.at_time if at_time is None else at_time
    moved = evolve(structure, state, sset.time)
    masked = moved.amplitudes * structure.region_mask(sset.region)
    return evolve(structure, ProjectedVector(masked, sset.time), ref)


def chain_project(
    structure: QuantumStructure,
    ssets: Sequence[SSet],
    at_time: int | None = None,
) -> ProjectedVector:
    """Time-ordered chained projection of the initial vector.

    Cylinder sets are sorted by time; sets at equal times compose as the
    intersection of their regions. The result is expressed at ``at_time``
    (default: the latest projection time, or 0 for an empty chain).
    """
    merged: list[SSet] = []
    for sset in sorted(ssets, key=lambda s: s.time):
        structure.check_sset(sset)
        if merged and merged[-1].time == sset.time:
            merged[-1] = SSet(sset.time, merged[-1].region & sset.region)
        else:
            merged.append(sset)
    out = ProjectedVector(structure.psi0, 0)
    for sset in merged:
        out = heisenberg_project(structure, sset, out, at_time=sset.time)
    if at_time is None:
        at_time = merged[-1].time if merged else 0
    return evolve(structure, out, at_time)


def occupations(structure: QuantumStructure, time: int) -> dict:
    """Per-cell probability mass ||E(cell) Psi(t)||^2 at one time index."""
    psi = state_at(structure, time).amplitudes
    weights = np.abs(psi) ** 2
    return {
        label: float(np.sum(weights[idx])) for label, idx in structure.cells.items()
    }


# -- scenario JSON ----------------------------------------------------------
#
# Schema (see schemas/scenario.schema.json): complex numbers are [re, im]
# pairs, matrices are row-major nested lists, cells map labels to basis index
# lists. An optional "stochastic" section is consumed by the stochastic
# module.


def _complex_in(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise SchemaError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _complex_out(arr: np.ndarray):
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def structure_from_dict(data: Mapping) -> QuantumStructure:
    try:
        dim = int(data["dim"])
        psi0 = _complex_in(data["psi0"])
        schedule = [_complex_in(m) for m in data["schedule"]]
        cells = {str(k): [int(i) for i in v] for k, v in data["cells"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed scenario: {exc}") from exc
    for k, m in enumerate(schedule):
        if m.shape != (dim, dim):
            raise SchemaError(f"schedule matrix {k} is not {dim}x{dim}")
    return QuantumStructure(dim, psi0, schedule, cells)


def structure_to_dict(structure: QuantumStructure) -> dict:
    schedule = []
    for step in structure.schedule:
        if isinstance(step, FactorUnitary):
            raise SchemaError("factored steps cannot be serialized as dense matrices")
        schedule.append(_complex_out(step))
    return {
        "dim": structure.dim,
        "psi0": _complex_out(structure.psi0),
        "schedule": schedule,
        "cells": {label: idx.tolist() for label, idx in structure.cells.items()},
    }


def load_scenario(path) -> tuple[QuantumStructure, dict]:
    """Read a scenario file; returns the structure and the raw parsed dict."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise SchemaError("scenario file must contain a JSON object")
    return structure_from_dict(data), data
