"""Admissible trajectory reconstruction from exclusions and typicality links.

A partition schedule slices a handful of time indices into disjoint,
exhaustive cell regions. Each (time, region) node carries its occupation
mass; nodes with negligible occupation are excluded, and node pairs across
slices whose mutual typicality is small become forced equivalences. An
admissible trajectory visits one node per slice, avoids excluded nodes, and
respects every forced link in both directions.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import core, typicality
from .core import QuantumStructure, SSet
from .errors import ResourceLimitError, ValidationError

OCCUPATION_SUM_TOL = 1e-10
PATH_SPACE_LIMIT = 10**6
DEFAULT_EPSILON_EXCLUDE = 0.01
DEFAULT_TAU_LINK = 0.08


@dataclass(frozen=True)
class PartitionSchedule:
    """Ordered time slices, each a tuple of disjoint exhaustive regions."""

    slices: tuple

    def __init__(self, slices: Iterable):
        normalized = tuple(
            (int(t), tuple(frozenset(region) for region in regions))
            for t, regions in slices
        )
        object.__setattr__(self, "slices", normalized)

    def validate(self, structure: QuantumStructure) -> None:
        if not self.slices:
            raise ValidationError("partition schedule is empty")
        times = [t for t, _ in self.slices]
        if len(set(times)) != len(times):
            raise ValidationError("duplicate time index in partition schedule")
        for t, regions in self.slices:
            structure.check_time(t)
            seen: set = set()
            for region in regions:
                for label in region:
                    if label not in structure.cells:
                        raise ValidationError(f"unknown cell label {label!r}")
                    if label in seen:
                        raise ValidationError(
                            f"slice t={t}: label {label!r} appears in two regions"
                        )
                    seen.add(label)
            if seen != set(structure.labels):
                raise ValidationError(f"slice t={t} does not cover all cells")


@dataclass(frozen=True)
class GraphNode:
    time: int
    region: frozenset
    occupation: float
    excluded: bool

    @property
    def name(self) -> str:
        return "+".join(sorted(self.region)) + f"@{self.time}"


@dataclass(frozen=True)
class TrajectoryGraph:
    """Nodes per slice, forced links (with their measures), admissible paths."""

    nodes: tuple
    slices: tuple  # node-index lists, one per schedule slice
    links: tuple  # (node_a, node_b, m_big) triples, a < b
    paths: tuple  # tuples of node indices, one per slice

    def node_names(self, path: Sequence[int]) -> tuple:
        return tuple(self.nodes[i].name for i in path)

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "time": n.time,
                    "region": sorted(n.region),
                    "occupation": n.occupation,
                    "excluded": n.excluded,
                }
                for n in self.nodes
            ],
            "links": [
                {"a": a, "b": b, "m_big": m} for a, b, m in self.links
            ],
            "paths": [list(p) for p in self.paths],
            "path_names": [list(self.node_names(p)) for p in self.paths],
        }

    def to_edge_csv(self) -> str:
        """Plot-ready edge list: forced links plus consecutive path edges."""
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["kind", "path_id", "time_a", "region_a", "time_b", "region_b", "value"]
        )
        for a, b, m in self.links:
            na, nb = self.nodes[a], self.nodes[b]
            writer.writerow(
                ["link", "", na.time, "+".join(sorted(na.region)),
                 nb.time, "+".join(sorted(nb.region)), repr(m)]
            )
        for pid, path in enumerate(self.paths):
            for a, b in zip(path, path[1:]):
                na, nb = self.nodes[a], self.nodes[b]
                writer.writerow(
                    ["path", pid, na.time, "+".join(sorted(na.region)),
                     nb.time, "+".join(sorted(nb.region)), ""]
                )
        return buf.getvalue()


def build_graph(
    structure: QuantumStructure,
    schedule: PartitionSchedule,
    epsilon_exclude: float = DEFAULT_EPSILON_EXCLUDE,
    tau_link: float = DEFAULT_TAU_LINK,
) -> TrajectoryGraph:
    """Build the exclusion/link graph and enumerate admissible paths."""
    schedule.validate(structure)
    for name, value in (("epsilon_exclude", epsilon_exclude), ("tau_link", tau_link)):
        if not 0.0 < value < 1.0:
            raise ValidationError(f"{name}={value} outside (0, 1)")

    path_space = 1
    for _, regions in schedule.slices:
        path_space *= max(len(regions), 1)
    if path_space > PATH_SPACE_LIMIT:
        raise ResourceLimitError(f"path space {path_space} exceeds {PATH_SPACE_LIMIT}")

    nodes: list[GraphNode] = []
    slices: list[tuple] = []
    for t, regions in schedule.slices:
        occ = core.occupations(structure, t)
        slice_nodes = []
        total = 0.0
        for region in regions:
            mass = sum(occ[label] for label in region)
            total += mass
            slice_nodes.append(len(nodes))
            nodes.append(GraphNode(t, region, mass, mass <= epsilon_exclude))
        if abs(total - 1.0) > OCCUPATION_SUM_TOL:
            raise ValidationError(f"slice t={t} occupations sum to {total}")
        slices.append(tuple(slice_nodes))

    # Links across all slice pairs, not only adjacent ones: the rule holds
    # for arbitrary pairs of s-sets.
    links = []
    for si, sj in itertools.combinations(range(len(slices)), 2):
        for a in slices[si]:
            if nodes[a].excluded:
                continue
            for b in slices[sj]:
                if nodes[b].excluded:
                    continue
                report = typicality.mutual_typicality(
                    structure,
                    SSet(nodes[a].time, nodes[a].region),
                    SSet(nodes[b].time, nodes[b].region),
                    threshold=tau_link,
                )
                if not report.degenerate and report.m_big <= tau_link:
                    links.append((a, b, report.m_big))

    candidates = [
        [i for i in slice_nodes if not nodes[i].excluded] for slice_nodes in slices
    ]
    paths = []
    for combo in itertools.product(*candidates):
        visited = set(combo)
        if all((a in visited) == (b in visited) for a, b, _ in links):
            paths.append(tuple(combo))

    return TrajectoryGraph(
        nodes=tuple(nodes),
        slices=tuple(tuple(s) for s in slices),
        links=tuple(links),
        paths=tuple(paths),
    )


def branch_following_check(
    structure: QuantumStructure,
    branch_regions: Sequence[SSet],
    tau: float = DEFAULT_TAU_LINK,
) -> bool:
    """Check that a nested branch list confines trajectories.

    For every earlier/later pair the pair must either be mutually typical
    (measure at most ``tau``) or the later projection must survive chaining
    through the earlier one up to a relative mass loss of ``tau``.
    """
    times = [s.time for s in branch_regions]
    if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
        raise ValidationError("branch regions must be strictly time-ordered")
    for s in branch_regions:
        structure.check_sset(s)
    for i, j in itertools.combinations(range(len(branch_regions)), 2):
        s_i, s_j = branch_regions[i], branch_regions[j]
        report = typicality.mutual_typicality(structure, s_i, s_j, threshold=tau)
        if not report.degenerate and report.m_big <= tau:
            continue
        later = core.heisenberg_project(
            structure, s_j, core.ProjectedVector(structure.psi0, 0)
        )
        chained = core.chain_project(structure, [s_i, s_j], at_time=0)
        if later.norm_sq < typicality.DEGENERATE_NORM_TOL:
            continue  # dead branch constrains nothing
        loss = later.amplitudes - chained.amplitudes
        if float((loss.conj() @ loss).real) / later.norm_sq > tau:
            return False
    return True
