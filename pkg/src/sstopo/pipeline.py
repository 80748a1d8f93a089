"""End-to-end driver: subdivision, two-step Mapper per domain, partitioning,
cross-domain matching, and machine-readable result documents."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .exports import segment_colors, write_gml, write_svg
from .geometry import BSplineSurface
from .mapper import MapperGraph, MapperNode, MapperParams, default_delta
from .partition import (
    BoundarySpec,
    CharacteristicNodes,
    CrossDomainMatch,
    PartitionResult,
    Segment,
    approximate_boundary_set,
    classify_characteristic_nodes,
    match_across_domains,
    partition,
)
from .subdivision import dump_box_pairs, hausdorff_bound, intersect_surfaces
from .twostep import run_two_step


@dataclass(frozen=True)
class PipelineConfig:
    epsilon: float = 0.01
    theta_ov: float = 0.2
    alpha: float = 0.001
    delta_override: float | None = None
    seed: int = 0
    out_dir: str | None = None
    emit_graph: bool = False
    emit_svg: bool = False
    dump_boxes: bool = False
    overlap_warn_ratio: float = 0.5

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ConfigurationError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.theta_ov < 0.5:
            raise ConfigurationError(
                f"theta_ov must lie strictly between 0 and 0.5, got {self.theta_ov}"
            )
        if self.alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}")
        if self.delta_override is not None and self.delta_override <= 0:
            raise ConfigurationError("delta override must be positive")

    def echo(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "theta_ov": self.theta_ov,
            "alpha": self.alpha,
            "delta_override": self.delta_override,
            "seed": self.seed,
        }


@dataclass
class DomainResult:
    name: str
    points: np.ndarray
    delta: float
    graph: MapperGraph
    characteristic: CharacteristicNodes
    partition: PartitionResult
    seconds_initial: float
    seconds_refine: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "points": [[float(x), float(y)] for x, y in self.points],
            "delta": self.delta,
            "graph": {
                "nodes": [
                    {
                        "id": n.id,
                        "points": list(n.sorted_points()),
                        "intervals": list(n.intervals),
                        "refined": n.refined,
                    }
                    for n in self.graph.nodes
                ],
                "edges": [list(e) for e in sorted(self.graph.edges)],
            },
            "boundary_nodes": sorted(self.characteristic.boundary_nodes),
            "singular_nodes": sorted(self.characteristic.singular_nodes),
            "segments": [
                {
                    "id": si,
                    "kind": seg.kind,
                    "points": list(seg.point_indices),
                    "nodes": list(seg.node_ids),
                }
                for si, seg in enumerate(self.partition.segments)
            ],
            "removed_boundary_points": sorted(self.partition.removed_boundary_points),
            "removed_singular_points": sorted(self.partition.removed_singular_points),
            "seconds_initial": self.seconds_initial,
            "seconds_refine": self.seconds_refine,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DomainResult":
        nodes = tuple(
            MapperNode(
                n["id"],
                frozenset(n["points"]),
                intervals=tuple(n["intervals"]),
                refined=bool(n["refined"]),
            )
            for n in data["graph"]["nodes"]
        )
        edges = frozenset((int(a), int(b)) for a, b in data["graph"]["edges"])
        segments = tuple(
            Segment(tuple(s["points"]), s["kind"], tuple(s["nodes"]))
            for s in data["segments"]
        )
        return cls(
            name=data["name"],
            points=np.asarray(data["points"], dtype=np.float64).reshape(-1, 2),
            delta=float(data["delta"]),
            graph=MapperGraph(nodes=nodes, edges=edges),
            characteristic=CharacteristicNodes(
                frozenset(data["boundary_nodes"]), frozenset(data["singular_nodes"])
            ),
            partition=PartitionResult(
                segments=segments,
                removed_boundary_points=frozenset(data["removed_boundary_points"]),
                removed_singular_points=frozenset(data["removed_singular_points"]),
            ),
            seconds_initial=float(data["seconds_initial"]),
            seconds_refine=float(data["seconds_refine"]),
        )


@dataclass
class ResultDocument:
    kind: str  # "intersect" or "mapper"
    config: dict
    no_intersection: bool
    overlap_suspected: bool
    domains: list[DomainResult]
    match: CrossDomainMatch | None
    timings: dict  # initial / subdivision / total (+ surface_subdivision)
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config,
            "no_intersection": self.no_intersection,
            "overlap_suspected": self.overlap_suspected,
            "domains": [d.to_dict() for d in self.domains],
            "match": None if self.match is None else [list(p) for p in self.match.pairs],
            "timings": self.timings,
            "extras": self.extras,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResultDocument":
        match = data.get("match")
        return cls(
            kind=data["kind"],
            config=data["config"],
            no_intersection=bool(data["no_intersection"]),
            overlap_suspected=bool(data["overlap_suspected"]),
            domains=[DomainResult.from_dict(d) for d in data["domains"]],
            match=None if match is None else CrossDomainMatch(
                tuple((int(a), int(b), int(c)) for a, b, c in match)
            ),
            timings=data["timings"],
            extras=data.get("extras", {}),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    @classmethod
    def load(cls, path) -> "ResultDocument":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def result_digest(doc: ResultDocument) -> str:
    """SHA-256 over the canonical document with wall-clock fields stripped."""
    data = doc.to_dict()
    data.pop("timings", None)
    for dom in data["domains"]:
        dom.pop("seconds_initial", None)
        dom.pop("seconds_refine", None)
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _analyze_domain(
    name: str,
    points: np.ndarray,
    delta: float,
    config: PipelineConfig,
    bounds: BoundarySpec | None,
) -> DomainResult:
    params = MapperParams(delta=delta, theta_ov=config.theta_ov, alpha=config.alpha)
    two_step = run_two_step(points, params)
    if bounds is not None:
        boundary_idx = approximate_boundary_set(points, bounds)
    else:
        boundary_idx = np.empty(0, dtype=np.int64)
    characteristic = classify_characteristic_nodes(two_step.graph, boundary_idx)
    part = partition(two_step.graph, characteristic)
    return DomainResult(
        name=name,
        points=points,
        delta=delta,
        graph=two_step.graph,
        characteristic=characteristic,
        partition=part,
        seconds_initial=two_step.seconds_initial,
        seconds_refine=two_step.seconds_refine,
    )


def run_pipeline(
    config: PipelineConfig, surface1: BSplineSurface, surface2: BSplineSurface
) -> ResultDocument:
    """Full chain: subdivision -> per-domain two-step Mapper -> partition -> match.

    Timing fields: "initial" sums the initial Mapper graph seconds of both
    domains, "subdivision" sums the orthogonal refinement seconds, "total" is
    the end-to-end wall clock, and "surface_subdivision" records the box-pair
    recursion separately.
    """
    t_start = time.perf_counter()
    sets = intersect_surfaces(
        surface1,
        surface2,
        config.epsilon,
        collect_pairs=config.dump_boxes,
        overlap_warn_ratio=config.overlap_warn_ratio,
    )
    t_subdivided = time.perf_counter()

    if sets.is_empty:
        doc = ResultDocument(
            kind="intersect",
            config=config.echo(),
            no_intersection=True,
            overlap_suspected=False,
            domains=[],
            match=None,
            timings={
                "initial": 0.0,
                "subdivision": 0.0,
                "total": time.perf_counter() - t_start,
                "surface_subdivision": t_subdivided - t_start,
            },
        )
        _emit(doc, config, sets=sets)
        return doc

    bounds1, bounds2 = hausdorff_bound(sets)
    if config.delta_override is not None:
        delta1 = delta2 = config.delta_override
    else:
        delta1 = default_delta(sets.cell_diag1)
        delta2 = default_delta(sets.cell_diag2)

    u_min, u_max, v_min, v_max = surface1.param_range
    spec1 = BoundarySpec(u_min, u_max, v_min, v_max, delta1,
                         surface1.periodic_u, surface1.periodic_v)
    s_min, s_max, t_min, t_max = surface2.param_range
    spec2 = BoundarySpec(s_min, s_max, t_min, t_max, delta2,
                         surface2.periodic_u, surface2.periodic_v)

    dom1 = _analyze_domain("uv", sets.points1, delta1, config, spec1)
    dom2 = _analyze_domain("st", sets.points2, delta2, config, spec2)
    match = match_across_domains(dom1.partition, dom2.partition, sets.correspondences)

    total = time.perf_counter() - t_start
    doc = ResultDocument(
        kind="intersect",
        config=config.echo(),
        no_intersection=False,
        overlap_suspected=sets.overlap_suspected,
        domains=[dom1, dom2],
        match=match,
        timings={
            "initial": dom1.seconds_initial + dom2.seconds_initial,
            "subdivision": dom1.seconds_refine + dom2.seconds_refine,
            "total": total,
            "surface_subdivision": t_subdivided - t_start,
        },
        extras={
            "epsilon": sets.epsilon,
            "cell_diag": [sets.cell_diag1, sets.cell_diag2],
            "hausdorff_bound": [bounds1, bounds2],
            "point_counts": [int(sets.points1.shape[0]), int(sets.points2.shape[0])],
            "correspondence_count": int(sets.correspondences.shape[0]),
        },
    )
    _emit(doc, config, sets=sets)
    return doc


def run_mapper_only(
    config: PipelineConfig,
    points: np.ndarray,
    *,
    bounds: BoundarySpec | None = None,
) -> ResultDocument:
    """Two-step Mapper plus partition on a raw planar cloud.

    Requires `delta_override` (there are no subdivision cells to derive the
    clustering radius from); boundary classification happens only when a
    domain box is supplied.
    """
    if config.delta_override is None:
        raise ConfigurationError("mapper-only runs need an explicit delta")
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    t_start = time.perf_counter()
    dom = _analyze_domain("cloud", points, config.delta_override, config, bounds)
    doc = ResultDocument(
        kind="mapper",
        config=config.echo(),
        no_intersection=points.shape[0] == 0,
        overlap_suspected=False,
        domains=[dom],
        match=None,
        timings={
            "initial": dom.seconds_initial,
            "subdivision": dom.seconds_refine,
            "total": time.perf_counter() - t_start,
        },
    )
    _emit(doc, config)
    return doc


def sweep_theta(
    config: PipelineConfig,
    theta_list,
    *,
    cloud: np.ndarray | None = None,
    surfaces: tuple[BSplineSurface, BSplineSurface] | None = None,
) -> dict:
    """Run the pipeline once per overlap ratio; report node/edge counts and time."""
    if (cloud is None) == (surfaces is None):
        raise ConfigurationError("sweep needs exactly one of cloud or surfaces")
    for theta in theta_list:
        if not 0.0 < theta < 0.5:
            raise ConfigurationError(
                f"theta_ov must lie strictly between 0 and 0.5, got {theta}"
            )
    entries = []
    for theta in theta_list:
        cfg = dataclasses.replace(config, theta_ov=theta, out_dir=None)
        if surfaces is not None:
            doc = run_pipeline(cfg, *surfaces)
        else:
            doc = run_mapper_only(cfg, cloud)
        entries.append(
            {
                "theta_ov": theta,
                "nodes": sum(d.graph.node_count for d in doc.domains),
                "edges": sum(d.graph.edge_count for d in doc.domains),
                "seconds": doc.timings["total"],
            }
        )
    report = {"mode": "surfaces" if surfaces is not None else "cloud", "entries": entries}
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=1)
    return report


def _emit(doc: ResultDocument, config: PipelineConfig, sets=None) -> None:
    if config.out_dir is None:
        return
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc.save(out / "result.json")
    for dom in doc.domains:
        if config.emit_graph:
            write_gml(out / f"graph_{dom.name}.gml", dom.graph)
        if config.emit_svg:
            colors = segment_colors(dom.points.shape[0], dom.partition)
            write_svg(out / f"points_{dom.name}.svg", dom.points, colors)
    if config.dump_boxes and sets is not None and sets.terminal_pairs is not None:
        dump_box_pairs(out / "boxes.json", sets.terminal_pairs)
