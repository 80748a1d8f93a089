"""Hot numeric kernels with a numba path and a pure numpy/scipy fallback.

The numba path compiles the explicit-loop implementations below with
``@njit(cache=True)``. Setting the environment variable ``SSTOPO_NO_NUMBA=1``
(checked once at import) forces the fallback path, which replaces the
grid-hash neighbor kernels with cKDTree/csgraph equivalents and runs the
spline kernels interpreted. Both paths implement identical contracts;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = os.environ.get("SSTOPO_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _ENV_FLAG not in ("1", "true", "yes", "on")

if NUMBA_REQUESTED:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

# Below this cloud size the neighbor searches use a shared vectorized
# brute-force path instead of the grid/tree structures.
BRUTE_FORCE_LIMIT = 256


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# B-spline span search / de Boor / knot insertion
# ---------------------------------------------------------------------------


def _find_span_impl(knots, degree, t):
    # Largest k in [degree, len(knots)-degree-2] with knots[k] <= t.
    lo = degree
    hi = knots.shape[0] - degree - 2
    if t >= knots[hi]:
        return hi
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if knots[mid] <= t:
            lo = mid
        else:
            hi = mid - 1
    return lo


if NUMBA_ENABLED:
    _find_span_nb = njit(cache=True)(_find_span_impl)
    _span = _find_span_nb
else:
    _span = _find_span_impl


def _deboor_point_impl(knots_u, degree_u, knots_v, degree_v, ctrl, u, v):
    su = _span(knots_u, degree_u, u)
    sv = _span(knots_v, degree_v, v)
    d = ctrl[su - degree_u : su + 1, sv - degree_v : sv + 1, :].copy()
    for r in range(1, degree_u + 1):
        for j in range(degree_u, r - 1, -1):
            i = j + su - degree_u
            denom = knots_u[j + 1 + su - r] - knots_u[i]
            alpha = (u - knots_u[i]) / denom
            for q in range(degree_v + 1):
                for c in range(3):
                    d[j, q, c] = (1.0 - alpha) * d[j - 1, q, c] + alpha * d[j, q, c]
    row = d[degree_u]
    for r in range(1, degree_v + 1):
        for j in range(degree_v, r - 1, -1):
            i = j + sv - degree_v
            denom = knots_v[j + 1 + sv - r] - knots_v[i]
            alpha = (v - knots_v[i]) / denom
            for c in range(3):
                row[j, c] = (1.0 - alpha) * row[j - 1, c] + alpha * row[j, c]
    return row[degree_v].copy()


def _insert_knot_impl(knots, ctrl, degree, t, times):
    # Boehm insertion of t, `times` times, along axis 0 of a (n, w) net.
    # Span: last index with knots[k] <= t, clamped to the top control row so
    # inserting at the valid end of an unclamped vector stays in bounds.
    cur_knots = knots
    cur = ctrl
    for _ in range(times):
        k = np.searchsorted(cur_knots, t, side="right") - 1
        if k > cur.shape[0] - 1:
            k = cur.shape[0] - 1
        n = cur.shape[0]
        w = cur.shape[1]
        out = np.empty((n + 1, w), dtype=np.float64)
        for i in range(k - degree + 1):
            for c in range(w):
                out[i, c] = cur[i, c]
        for i in range(k - degree + 1, k + 1):
            denom = cur_knots[i + degree] - cur_knots[i]
            alpha = (t - cur_knots[i]) / denom
            for c in range(w):
                out[i, c] = (1.0 - alpha) * cur[i - 1, c] + alpha * cur[i, c]
        for i in range(k + 1, n + 1):
            for c in range(w):
                out[i, c] = cur[i - 1, c]
        new_knots = np.empty(cur_knots.shape[0] + 1, dtype=np.float64)
        for i in range(k + 1):
            new_knots[i] = cur_knots[i]
        new_knots[k + 1] = t
        for i in range(k + 1, cur_knots.shape[0]):
            new_knots[i + 1] = cur_knots[i]
        cur_knots = new_knots
        cur = out
    return cur_knots, cur


if NUMBA_ENABLED:
    deboor_point = njit(cache=True)(_deboor_point_impl)
    insert_knot = njit(cache=True)(_insert_knot_impl)
else:
    deboor_point = _deboor_point_impl
    insert_knot = _insert_knot_impl


def find_span(knots: np.ndarray, degree: int, t: float) -> int:
    return int(_span(knots, degree, t))


# ---------------------------------------------------------------------------
# Fixed-radius neighbor kernels (strict < delta)
# ---------------------------------------------------------------------------


def _uf_find_impl(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


if NUMBA_ENABLED:
    _uf_find = njit(cache=True)(_uf_find_impl)
else:
    _uf_find = _uf_find_impl


def _grid_keys_impl(pts, delta):
    # Cell key per point (row-major over shifted cell coords) plus the y-span
    # needed to decode neighbor offsets.
    n = pts.shape[0]
    inv = 1.0 / delta
    cx = np.empty(n, dtype=np.int64)
    cy = np.empty(n, dtype=np.int64)
    for i in range(n):
        cx[i] = np.int64(np.floor(pts[i, 0] * inv))
        cy[i] = np.int64(np.floor(pts[i, 1] * inv))
    minx = cx.min()
    miny = cy.min()
    span_y = (cy.max() - miny) + 1
    keys = np.empty(n, dtype=np.int64)
    for i in range(n):
        keys[i] = (cx[i] - minx) * span_y + (cy[i] - miny)
    return keys, span_y


def _grid_components_impl(pts, delta):
    # One pass over occupied cells; each unordered cell pair is visited once
    # via the four forward neighbor offsets.
    n = pts.shape[0]
    keys, span_y = _grid_keys(pts, delta)
    order = np.argsort(keys)
    skeys = keys[order]
    parent = np.arange(n)
    d2max = delta * delta
    i = 0
    while i < n:
        j = i + 1
        while j < n and skeys[j] == skeys[i]:
            j += 1
        for a in range(i, j):
            pa = order[a]
            for b in range(a + 1, j):
                pb = order[b]
                ddx = pts[pa, 0] - pts[pb, 0]
                ddy = pts[pa, 1] - pts[pb, 1]
                if ddx * ddx + ddy * ddy < d2max:
                    ra = _uf_find(parent, pa)
                    rb = _uf_find(parent, pb)
                    if ra != rb:
                        if ra < rb:
                            parent[rb] = ra
                        else:
                            parent[ra] = rb
        key = skeys[i]
        gx = key // span_y
        gy = key - gx * span_y
        for t in range(4):
            if t == 0:
                dx, dy = 0, 1
            elif t == 1:
                dx, dy = 1, -1
            elif t == 2:
                dx, dy = 1, 0
            else:
                dx, dy = 1, 1
            ny = gy + dy
            if ny < 0 or ny >= span_y:
                continue
            key2 = (gx + dx) * span_y + ny
            lo = np.searchsorted(skeys, key2)
            if lo >= n or skeys[lo] != key2:
                continue
            hi = np.searchsorted(skeys, key2 + 1)
            for a in range(i, j):
                pa = order[a]
                xa = pts[pa, 0]
                ya = pts[pa, 1]
                for b in range(lo, hi):
                    pb = order[b]
                    ddx = xa - pts[pb, 0]
                    ddy = ya - pts[pb, 1]
                    if ddx * ddx + ddy * ddy < d2max:
                        ra = _uf_find(parent, pa)
                        rb = _uf_find(parent, pb)
                        if ra != rb:
                            if ra < rb:
                                parent[rb] = ra
                            else:
                                parent[ra] = rb
        i = j
    labels = np.full(n, -1, dtype=np.int64)
    next_id = 0
    for i in range(n):
        r = _uf_find(parent, i)
        if labels[r] == -1:
            labels[r] = next_id
            next_id += 1
        labels[i] = labels[r]
    return labels


def _grid_sup_diff_impl(pts, vals, delta):
    n = pts.shape[0]
    keys, span_y = _grid_keys(pts, delta)
    order = np.argsort(keys)
    skeys = keys[order]
    d2max = delta * delta
    sup = 0.0
    found = False
    i = 0
    while i < n:
        j = i + 1
        while j < n and skeys[j] == skeys[i]:
            j += 1
        for a in range(i, j):
            pa = order[a]
            for b in range(a + 1, j):
                pb = order[b]
                ddx = pts[pa, 0] - pts[pb, 0]
                ddy = pts[pa, 1] - pts[pb, 1]
                if ddx * ddx + ddy * ddy < d2max:
                    found = True
                    diff = vals[pa] - vals[pb]
                    if diff < 0.0:
                        diff = -diff
                    if diff > sup:
                        sup = diff
        key = skeys[i]
        gx = key // span_y
        gy = key - gx * span_y
        for t in range(4):
            if t == 0:
                dx, dy = 0, 1
            elif t == 1:
                dx, dy = 1, -1
            elif t == 2:
                dx, dy = 1, 0
            else:
                dx, dy = 1, 1
            ny = gy + dy
            if ny < 0 or ny >= span_y:
                continue
            key2 = (gx + dx) * span_y + ny
            lo = np.searchsorted(skeys, key2)
            if lo >= n or skeys[lo] != key2:
                continue
            hi = np.searchsorted(skeys, key2 + 1)
            for a in range(i, j):
                pa = order[a]
                xa = pts[pa, 0]
                ya = pts[pa, 1]
                va = vals[pa]
                for b in range(lo, hi):
                    pb = order[b]
                    ddx = xa - pts[pb, 0]
                    ddy = ya - pts[pb, 1]
                    if ddx * ddx + ddy * ddy < d2max:
                        found = True
                        diff = va - vals[pb]
                        if diff < 0.0:
                            diff = -diff
                        if diff > sup:
                            sup = diff
        i = j
    return sup, found


if NUMBA_ENABLED:
    _grid_keys = njit(cache=True)(_grid_keys_impl)
    _grid_components = njit(cache=True)(_grid_components_impl)
    _grid_sup_diff = njit(cache=True)(_grid_sup_diff_impl)
else:
    _grid_keys = _grid_keys_impl


def _strict_pairs_kdtree(pts, delta):
    from scipy.spatial import cKDTree

    pairs = cKDTree(pts).query_pairs(delta, output_type="ndarray")
    if pairs.shape[0]:
        diff = pts[pairs[:, 0]] - pts[pairs[:, 1]]
        close = (diff * diff).sum(axis=1) < delta * delta
        pairs = pairs[close]
    return pairs


def _labels_first_occurrence(labels):
    # Relabel components so ids follow the first point index of each component.
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.argsort(np.argsort(first))
    return rank[inverse]


def _components_scipy(pts, delta):
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    n = pts.shape[0]
    pairs = _strict_pairs_kdtree(pts, delta)
    data = np.ones(pairs.shape[0], dtype=np.int8)
    graph = coo_matrix((data, (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    return _labels_first_occurrence(labels)


def _sup_diff_scipy(pts, vals, delta):
    pairs = _strict_pairs_kdtree(pts, delta)
    if pairs.shape[0] == 0:
        return 0.0, False
    return float(np.abs(vals[pairs[:, 0]] - vals[pairs[:, 1]]).max()), True


def _brute_pairs(pts, delta):
    diff = pts[:, None, :] - pts[None, :, :]
    d2 = (diff * diff).sum(axis=2)
    ii, jj = np.nonzero(np.triu(d2 < delta * delta, k=1))
    return np.column_stack([ii, jj])


def _components_brute(pts, delta):
    n = pts.shape[0]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in _brute_pairs(pts, delta):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            if ri < rj:
                parent[rj] = ri
            else:
                parent[ri] = rj
    labels = np.fromiter((find(i) for i in range(n)), dtype=np.int64, count=n)
    return _labels_first_occurrence(labels)


def _sup_diff_brute(pts, vals, delta):
    pairs = _brute_pairs(pts, delta)
    if pairs.shape[0] == 0:
        return 0.0, False
    return float(np.abs(vals[pairs[:, 0]] - vals[pairs[:, 1]]).max()), True


def neighbor_components(points: np.ndarray, delta: float) -> np.ndarray:
    """Connected-component labels of the strict-<delta neighborhood graph.

    Labels are canonical: component ids are assigned in order of each
    component's first point index, so the partition (and its encoding) is
    identical across backends.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if n < BRUTE_FORCE_LIMIT:
        return _components_brute(pts, delta)
    if NUMBA_ENABLED:
        return _grid_components(pts, delta)
    return _components_scipy(pts, delta)


def neighbor_sup_abs_diff(
    points: np.ndarray, values: np.ndarray, delta: float
) -> tuple[float, bool]:
    """Max |values[i]-values[j]| over point pairs at distance < delta.

    Returns ``(0.0, False)`` when no pair qualifies.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    vals = np.ascontiguousarray(values, dtype=np.float64)
    n = pts.shape[0]
    if n < 2:
        return 0.0, False
    if n < BRUTE_FORCE_LIMIT:
        return _sup_diff_brute(pts, vals, delta)
    if NUMBA_ENABLED:
        sup, found = _grid_sup_diff(pts, vals, delta)
        return float(sup), bool(found)
    return _sup_diff_scipy(pts, vals, delta)


def warm_up() -> None:
    """Trigger JIT compilation of every kernel on tiny inputs (no-op without numba)."""
    knots = np.array([0.0, 0.0, 1.0, 1.0])
    ctrl = np.zeros((2, 2, 3))
    ctrl[1, :, 0] = 1.0
    ctrl[:, 1, 1] = 1.0
    deboor_point(knots, 1, knots, 1, ctrl, 0.5, 0.5)
    insert_knot(knots, ctrl.reshape(2, 6), 1, 0.5, 1)
    pts = np.random.default_rng(0).random((BRUTE_FORCE_LIMIT + 8, 2))
    neighbor_components(pts, 0.1)
    neighbor_sup_abs_diff(pts, pts[:, 0], 0.1)
