"""Characteristic-node detection, segment partitioning, and cross-domain matching.

Boundary nodes are clusters that reach into the dilated domain boundary;
singular nodes have graph degree above two. Removing both leaves only paths,
cycles, and isolated nodes, which classify the point subsets as open curve
segments, closed curve segments, and isolated intersection points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .mapper import MapperGraph

log = logging.getLogger(__name__)

KIND_OPEN = "open"
KIND_CLOSED = "closed"
KIND_ISOLATED = "isolated"
# Shape that survives characteristic removal but is neither path, cycle nor
# single node; reported as-is instead of being misclassified.
KIND_ANOMALOUS = "anomalous"


@dataclass(frozen=True)
class BoundarySpec:
    """Domain bounds with the dilation radius applied to the boundary bands."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    delta: float
    periodic_u: bool = False
    periodic_v: bool = False

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigurationError(f"dilation radius must be positive, got {self.delta}")
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ConfigurationError("degenerate domain bounds")


@dataclass(frozen=True)
class CharacteristicNodes:
    boundary_nodes: frozenset[int]
    singular_nodes: frozenset[int]

    @property
    def all_nodes(self) -> frozenset[int]:
        return self.boundary_nodes | self.singular_nodes


@dataclass(frozen=True)
class Segment:
    """One partition subset with the graph shape that produced it."""

    point_indices: tuple[int, ...]
    kind: str
    node_ids: tuple[int, ...]


@dataclass(frozen=True)
class PartitionResult:
    segments: tuple[Segment, ...]
    removed_boundary_points: frozenset[int]
    removed_singular_points: frozenset[int]

    def point_to_segment(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for si, seg in enumerate(self.segments):
            for p in seg.point_indices:
                out[p] = si
        return out

    def segment_kinds(self) -> list[str]:
        return [seg.kind for seg in self.segments]


@dataclass(frozen=True)
class CrossDomainMatch:
    """(segment id in domain 1, segment id in domain 2, shared record count)."""

    pairs: tuple[tuple[int, int, int], ...]

    def as_mapping(self) -> dict[tuple[int, int], int]:
        return {(a, b): c for a, b, c in self.pairs}


def approximate_boundary_set(points: np.ndarray, spec: BoundarySpec) -> np.ndarray:
    """Indices of points strictly inside the dilated boundary bands.

    The four domain sides are banded by the clustering radius; for a periodic
    axis the two bands are the two unrollings of the seam.
    """
    half_u = 0.5 * (spec.u_max - spec.u_min)
    half_v = 0.5 * (spec.v_max - spec.v_min)
    if spec.delta >= half_u or spec.delta >= half_v:
        raise ConfigurationError(
            f"dilation radius {spec.delta} covers the whole domain; nothing would survive"
        )
    pts = np.asarray(points, dtype=np.float64)
    u = pts[:, 0]
    v = pts[:, 1]
    mask = (
        (u < spec.u_min + spec.delta)
        | (u > spec.u_max - spec.delta)
        | (v < spec.v_min + spec.delta)
        | (v > spec.v_max - spec.delta)
    )
    return np.nonzero(mask)[0]


def classify_characteristic_nodes(
    graph: MapperGraph, boundary_indices: np.ndarray
) -> CharacteristicNodes:
    """Boundary nodes meet the boundary point set; singular nodes have degree > 2."""
    boundary = frozenset(int(i) for i in np.asarray(boundary_indices).ravel())
    boundary_nodes = frozenset(
        n.id for n in graph.nodes if n.points & boundary
    )
    degrees = graph.degrees()
    singular_nodes = frozenset(nid for nid, d in degrees.items() if d > 2)
    if singular_nodes:
        # Near curve crossings the sampled set has no positive reach, so the
        # clustering-radius admissibility condition cannot be verified there.
        log.warning(
            "%d singular node(s) detected; graph connectivity near them "
            "reflects the crossing region, not a regular curve",
            len(singular_nodes),
        )
    return CharacteristicNodes(boundary_nodes, singular_nodes)


def partition(graph: MapperGraph, characteristic: CharacteristicNodes) -> PartitionResult:
    """Remove characteristic nodes and classify the remaining components.

    Points shared between a removed node and a survivor stay with the
    survivor; only points exclusive to removed nodes land in the removed sets.
    """
    removed_ids = characteristic.all_nodes
    survivors = [n for n in graph.nodes if n.id not in removed_ids]
    surviving_ids = {n.id for n in survivors}
    surviving_points: set[int] = set()
    for n in survivors:
        surviving_points |= n.points

    adj: dict[int, set[int]] = {n.id: set() for n in survivors}
    edge_count_between: set[tuple[int, int]] = set()
    for a, b in graph.edges:
        if a in surviving_ids and b in surviving_ids:
            adj[a].add(b)
            adj[b].add(a)
            edge_count_between.add((min(a, b), max(a, b)))

    by_id = {n.id: n for n in survivors}
    seen: set[int] = set()
    segments: list[Segment] = []
    for n in survivors:
        if n.id in seen:
            continue
        comp = []
        stack = [n.id]
        seen.add(n.id)
        while stack:
            cur = stack.pop()
            comp.append(cur)
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        comp.sort()
        comp_edges = _edges_within(edge_count_between, set(comp))
        kind = _classify_component(comp, adj, comp_edges)
        pts: set[int] = set()
        for nid in comp:
            pts |= by_id[nid].points
        segments.append(Segment(tuple(sorted(pts)), kind, tuple(comp)))

    # Deterministic report order: by smallest point index, then node id.
    segments.sort(key=lambda s: (s.point_indices[0] if s.point_indices else -1, s.node_ids))

    removed_boundary: set[int] = set()
    for nid in characteristic.boundary_nodes:
        removed_boundary |= graph.node_by_id(nid).points
    removed_singular: set[int] = set()
    for nid in characteristic.singular_nodes:
        removed_singular |= graph.node_by_id(nid).points

    return PartitionResult(
        segments=tuple(segments),
        removed_boundary_points=frozenset(removed_boundary - surviving_points),
        removed_singular_points=frozenset(removed_singular - surviving_points),
    )


def _edges_within(edges: set[tuple[int, int]], comp: set[int]) -> int:
    return sum(1 for a, b in edges if a in comp and b in comp)


def _classify_component(comp: list[int], adj: dict[int, set[int]], n_edges: int) -> str:
    n = len(comp)
    degs = [len(adj[nid]) for nid in comp]
    if n == 1 and n_edges == 0:
        return KIND_ISOLATED
    if max(degs) <= 2 and degs.count(1) == 2 and n_edges == n - 1:
        return KIND_OPEN
    if n >= 3 and all(d == 2 for d in degs) and n_edges == n:
        return KIND_CLOSED
    return KIND_ANOMALOUS


def match_across_domains(
    part1: PartitionResult, part2: PartitionResult, correspondences: np.ndarray
) -> CrossDomainMatch:
    """Pair segments across domains through the box-pair correspondence records.

    A pair (A, B) is emitted iff some record links a point of A to a point of
    B; the count is the number of such records. Removed points do not vote.
    """
    corr = np.asarray(correspondences)
    if corr.size == 0:
        log.warning("empty correspondence list; cross-domain match is empty")
        return CrossDomainMatch(())
    map1 = part1.point_to_segment()
    map2 = part2.point_to_segment()
    counts: dict[tuple[int, int], int] = {}
    for i, j in corr:
        a = map1.get(int(i))
        b = map2.get(int(j))
        if a is None or b is None:
            continue
        counts[(a, b)] = counts.get((a, b), 0) + 1
    pairs = tuple((a, b, c) for (a, b), c in sorted(counts.items()))
    return CrossDomainMatch(pairs)
