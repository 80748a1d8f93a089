"""Tensor-product B-spline surfaces, parameter rectangles, and patch bounds.

Surfaces are immutable after construction and all operations are pure, so
callers may evaluate/split/bound concurrently without coordination. Patch
restriction works by knot insertion; the control net of a restricted patch
encloses the patch by the convex-hull property, which is what makes the
subdivision bounding boxes conservative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ParameterRangeError


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class KnotVector:
    """Nondecreasing knot sequence with its polynomial degree.

    ``periodic`` marks an unclamped vector backing a closed direction; the
    valid parameter range is [knots[degree], knots[-degree-1]] either way.
    """

    knots: np.ndarray
    degree: int
    periodic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "knots", _readonly(np.ravel(self.knots)))
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.knots.size < self.degree + 2:
            raise ValueError("knot vector too short for degree")
        if np.any(np.diff(self.knots) < 0):
            raise ValueError("knots must be nondecreasing")
        if not self.start < self.end:
            raise ValueError("valid parameter range is empty")

    @property
    def count(self) -> int:
        """Number of basis functions / control rows this vector supports."""
        return self.knots.size - self.degree - 1

    @property
    def start(self) -> float:
        return float(self.knots[self.degree])

    @property
    def end(self) -> float:
        return float(self.knots[self.knots.size - self.degree - 1])

    def multiplicity(self, t: float) -> int:
        return int(np.count_nonzero(self.knots == t))

    def is_clamped(self) -> bool:
        return (
            self.multiplicity(float(self.knots[0])) >= self.degree + 1
            and self.multiplicity(float(self.knots[-1])) >= self.degree + 1
        )


def uniform_clamped_knots(degree: int, count: int, start: float = 0.0, end: float = 1.0) -> KnotVector:
    """Clamped knot vector with uniformly spaced interior knots for `count` control rows."""
    if count < degree + 1:
        raise ValueError("count must be at least degree+1")
    interior = np.linspace(start, end, count - degree + 1)[1:-1]
    knots = np.concatenate([np.full(degree + 1, start), interior, np.full(degree + 1, end)])
    return KnotVector(knots, degree)


def uniform_periodic_knots(degree: int, count: int, start: float = 0.0, end: float = 1.0) -> KnotVector:
    """Unclamped uniform vector whose valid range is exactly [start, end].

    `count` is the number of control rows including the `degree` wrapped
    duplicates a closed direction carries.
    """
    n_seg = count - degree
    if n_seg < 1:
        raise ValueError("count must exceed degree")
    h = (end - start) / n_seg
    idx = np.arange(count + degree + 1, dtype=np.float64) - degree
    return KnotVector(start + idx * h, degree, periodic=True)


@dataclass(frozen=True, eq=False)
class BSplineSurface:
    knots_u: KnotVector
    knots_v: KnotVector
    control_points: np.ndarray  # (count_u, count_v, 3)
    periodic_u: bool = field(init=False)
    periodic_v: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "control_points", _readonly(self.control_points))
        object.__setattr__(self, "periodic_u", self.knots_u.periodic)
        object.__setattr__(self, "periodic_v", self.knots_v.periodic)
        cp = self.control_points
        if cp.ndim != 3 or cp.shape[2] != 3:
            raise ValueError("control_points must have shape (count_u, count_v, 3)")
        if cp.shape[0] != self.knots_u.count or cp.shape[1] != self.knots_v.count:
            raise ValueError("control grid does not match knot counts")

    @property
    def degree_u(self) -> int:
        return self.knots_u.degree

    @property
    def degree_v(self) -> int:
        return self.knots_v.degree

    @property
    def param_range(self) -> tuple[float, float, float, float]:
        return (self.knots_u.start, self.knots_u.end, self.knots_v.start, self.knots_v.end)

    def full_rect(self, surface_id: int = 1) -> "ParamRect":
        u0, u1, v0, v1 = self.param_range
        return ParamRect(u0, u1, v0, v1, surface_id)

    def evaluate(self, u: float, v: float) -> np.ndarray:
        return evaluate(self, u, v)


@dataclass(frozen=True)
class ParamRect:
    """Axis-aligned rectangle in one surface's parameter domain."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    surface_id: int = 1

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ParameterRangeError(f"degenerate rectangle {self}")

    @property
    def width_u(self) -> float:
        return self.u_max - self.u_min

    @property
    def width_v(self) -> float:
        return self.v_max - self.v_min

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width_u, self.width_v))

    @property
    def centroid(self) -> tuple[float, float]:
        return (0.5 * (self.u_min + self.u_max), 0.5 * (self.v_min + self.v_max))

    @property
    def area(self) -> float:
        return self.width_u * self.width_v


@dataclass(frozen=True, eq=False)
class AABB3:
    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "min_corner", _readonly(self.min_corner))
        object.__setattr__(self, "max_corner", _readonly(self.max_corner))
        if np.any(self.min_corner > self.max_corner):
            raise ValueError("AABB min corner exceeds max corner")

    def intersects(self, other: "AABB3") -> bool:
        # Closed boxes: touching counts as intersecting.
        return bool(
            np.all(self.min_corner <= other.max_corner)
            and np.all(other.min_corner <= self.max_corner)
        )

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.max_corner - self.min_corner))


def evaluate(surface: BSplineSurface, u: float, v: float) -> np.ndarray:
    """Surface point at (u, v) by the de Boor recursion. Exact at clamped corners."""
    u0, u1, v0, v1 = surface.param_range
    if not (u0 <= u <= u1 and v0 <= v <= v1):
        raise ParameterRangeError(f"({u}, {v}) outside parameter range {surface.param_range}")
    return _kernels.deboor_point(
        surface.knots_u.knots,
        surface.degree_u,
        surface.knots_v.knots,
        surface.degree_v,
        surface.control_points,
        float(u),
        float(v),
    )


def evaluate_grid(surface: BSplineSurface, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Points at the tensor grid us x vs, shape (len(us), len(vs), 3)."""
    out = np.empty((len(us), len(vs), 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            out[i, j] = evaluate(surface, float(u), float(v))
    return out


def _split_net(knots: np.ndarray, net: np.ndarray, degree: int, t: float):
    """Split a control net along axis 0 at t. Returns (knots, net) for each side."""
    flat = np.ascontiguousarray(net.reshape(net.shape[0], -1), dtype=np.float64)
    mult = int(np.count_nonzero(knots == t))
    times = degree - mult
    if times > 0:
        knots, flat = _kernels.insert_knot(knots, flat, degree, float(t), times)
    k = int(np.searchsorted(knots, t, side="right")) - 1
    tail = net.shape[1:]
    left_knots = np.concatenate([knots[: k + 1], [t]])
    left = flat[: k - degree + 1].reshape((k - degree + 1,) + tail)
    right_knots = np.concatenate([np.full(degree + 1, t), knots[k + 1 :]])
    right = flat[k - degree :].reshape((flat.shape[0] - (k - degree),) + tail)
    return (left_knots, left), (right_knots, right)


def _trim_axis(knots: np.ndarray, net: np.ndarray, degree: int, lo: float, hi: float):
    """Restrict along axis 0 to [lo, hi] by knot insertion; output is clamped."""
    start = knots[degree]
    end = knots[knots.size - degree - 1]
    if not (lo == start and np.count_nonzero(knots == lo) >= degree + 1):
        _, (knots, net) = _split_net(knots, net, degree, lo)
    if not (hi == end and np.count_nonzero(knots == hi) >= degree + 1):
        (knots, net), _ = _split_net(knots, net, degree, hi)
    return knots, net


def restrict(surface: BSplineSurface, rect: ParamRect) -> BSplineSurface:
    """The sub-surface identical to `surface` on `rect`, with clamped knots."""
    u0, u1, v0, v1 = surface.param_range
    if rect.u_min < u0 or rect.u_max > u1 or rect.v_min < v0 or rect.v_max > v1:
        raise ParameterRangeError(f"{rect} outside parameter range {surface.param_range}")
    ku, net = _trim_axis(
        surface.knots_u.knots, surface.control_points, surface.degree_u, rect.u_min, rect.u_max
    )
    net_t = np.ascontiguousarray(net.transpose(1, 0, 2))
    kv, net_t = _trim_axis(surface.knots_v.knots, net_t, surface.degree_v, rect.v_min, rect.v_max)
    return BSplineSurface(
        KnotVector(ku, surface.degree_u),
        KnotVector(kv, surface.degree_v),
        net_t.transpose(1, 0, 2),
    )


def subpatch_control_net(surface: BSplineSurface, rect: ParamRect) -> np.ndarray:
    """Control net of the restriction of `surface` to `rect` (knot insertion)."""
    return restrict(surface, rect).control_points


def patch_aabb(surface: BSplineSurface, rect: ParamRect) -> AABB3:
    """Axis-aligned box of the subpatch control net; encloses the patch over `rect`."""
    net = subpatch_control_net(surface, rect)
    return AABB3(net.min(axis=(0, 1)), net.max(axis=(0, 1)))


def split_rect(rect: ParamRect) -> tuple[ParamRect, ParamRect]:
    """Bisect along the longer parameter side; a tie splits u. Halves tile exactly."""
    if rect.width_u >= rect.width_v:
        mid = 0.5 * (rect.u_min + rect.u_max)
        return (
            ParamRect(rect.u_min, mid, rect.v_min, rect.v_max, rect.surface_id),
            ParamRect(mid, rect.u_max, rect.v_min, rect.v_max, rect.surface_id),
        )
    mid = 0.5 * (rect.v_min + rect.v_max)
    return (
        ParamRect(rect.u_min, rect.u_max, rect.v_min, mid, rect.surface_id),
        ParamRect(rect.u_min, rect.u_max, mid, rect.v_max, rect.surface_id),
    )


# ---------------------------------------------------------------------------
# Surface file format (JSON; see cli module for the full schema)
# ---------------------------------------------------------------------------


def surface_to_dict(surface: BSplineSurface) -> dict:
    return {
        "degree_u": surface.degree_u,
        "degree_v": surface.degree_v,
        "knots_u": surface.knots_u.knots.tolist(),
        "knots_v": surface.knots_v.knots.tolist(),
        "control_points": surface.control_points.tolist(),
        "periodic_u": surface.periodic_u,
        "periodic_v": surface.periodic_v,
    }


def surface_from_dict(data: dict) -> BSplineSurface:
    ku = KnotVector(np.asarray(data["knots_u"], dtype=float), int(data["degree_u"]),
                    bool(data.get("periodic_u", False)))
    kv = KnotVector(np.asarray(data["knots_v"], dtype=float), int(data["degree_v"]),
                    bool(data.get("periodic_v", False)))
    return BSplineSurface(ku, kv, np.asarray(data["control_points"], dtype=float))


def save_surface(path, surface: BSplineSurface) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(surface_to_dict(surface), fh, indent=2)


def load_surface(path) -> BSplineSurface:
    with open(path, "r", encoding="utf-8") as fh:
        return surface_from_dict(json.load(fh))
