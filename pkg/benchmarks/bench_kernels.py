#!/usr/bin/env python3
"""Benchmark the numba kernels against the numpy/scipy fallback path.

Compares both implementations of each hot kernel in one process (the numba
path must be enabled, i.e. do not set SSTOPO_NO_NUMBA), then times the
end-to-end two-step Mapper run under the currently selected backend.

    python benchmarks/bench_kernels.py --sizes 2000,6000 --repeats 5

To time the full pipeline on the pure numpy path instead, rerun the script
with SSTOPO_NO_NUMBA=1.
"""

import argparse
import time

import numpy as np

from sstopo import _kernels
from sstopo.mapper import MapperParams
from sstopo.synthetic import Circle, SegmentCurve, SyntheticSpec, generate_synthetic
from sstopo.twostep import run_two_step


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cloud(n, seed=0):
    rng = np.random.default_rng(seed)
    return np.ascontiguousarray(rng.uniform(0, 1, (n, 2)) * [3.0, 1.0])


def bench_neighbors(sizes, repeats):
    rows = []
    for n in sizes:
        pts = make_cloud(n)
        vals = np.ascontiguousarray(pts[:, 0])
        delta = 2.0 / np.sqrt(n)  # keeps neighborhood sizes comparable
        if _kernels.NUMBA_ENABLED:
            _kernels._grid_components(pts, delta)  # compile outside timing
            _kernels._grid_sup_diff(pts, vals, delta)
            t_nb_c = best_of(lambda: _kernels._grid_components(pts, delta), repeats)
            t_nb_s = best_of(lambda: _kernels._grid_sup_diff(pts, vals, delta), repeats)
        else:
            t_nb_c = t_nb_s = float("nan")
        t_np_c = best_of(lambda: _kernels._components_scipy(pts, delta), repeats)
        t_np_s = best_of(lambda: _kernels._sup_diff_scipy(pts, vals, delta), repeats)
        rows.append(("components", n, t_nb_c, t_np_c))
        rows.append(("pair_sup", n, t_nb_s, t_np_s))
    return rows


def bench_spline(repeats):
    knots = np.concatenate([[0.0] * 4, np.linspace(0, 1, 12)[1:-1], [1.0] * 4])
    n = knots.size - 4
    ctrl2 = np.ascontiguousarray(np.random.default_rng(1).random((n, 18)))
    ctrl3 = np.ascontiguousarray(ctrl2.reshape(n, 6, 3))
    kv = np.array([0.0, 0.0, 1.0, 1.0])

    def run_insert(fn):
        for t in np.linspace(0.05, 0.95, 64):
            fn(knots, ctrl2, 3, float(t), 3)

    def run_eval(fn):
        for u in np.linspace(0.0, 1.0, 256):
            fn(knots, 3, kv[: 4], 1, ctrl3[:, :2, :], float(u), 0.5)

    rows = []
    if _kernels.NUMBA_ENABLED:
        run_insert(_kernels.insert_knot)
        run_eval(_kernels.deboor_point)
        t_nb_i = best_of(lambda: run_insert(_kernels.insert_knot), repeats)
        t_nb_e = best_of(lambda: run_eval(_kernels.deboor_point), repeats)
    else:
        t_nb_i = t_nb_e = float("nan")
    t_np_i = best_of(lambda: run_insert(_kernels._insert_knot_impl), repeats)
    t_np_e = best_of(lambda: run_eval(_kernels._deboor_point_impl), repeats)
    rows.append(("insert_knot x64", None, t_nb_i, t_np_i))
    rows.append(("deboor_point x256", None, t_nb_e, t_np_e))
    return rows


def bench_end_to_end(repeats):
    curves = (
        Circle((0.0, 0.0), 1.0),
        Circle((2.2, 0.0), 0.8),
        SegmentCurve((-1.5, -1.6), (3.5, -1.6)),
        SegmentCurve((-1.5, 1.6), (3.5, 1.6)),
    )
    total = sum(c.length for c in curves)
    step = total / 6000
    pts, _ = generate_synthetic(SyntheticSpec(curves=curves, step=step, noise=0.01, seed=11))
    params = MapperParams(delta=4 * (0.01 + step / 2))
    run_two_step(pts, params)  # warm
    t = best_of(lambda: run_two_step(pts, params), repeats)
    return len(pts), t


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,4000,12000")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",") if s]

    print(f"selected backend: {_kernels.backend()}")
    if not _kernels.NUMBA_ENABLED:
        print("numba path disabled or unavailable; numba columns will be nan")

    rows = bench_neighbors(sizes, args.repeats) + bench_spline(args.repeats)
    print(f"\n{'kernel':<20}{'n':>8}{'numba (s)':>14}{'numpy (s)':>14}{'speedup':>10}")
    for name, n, t_nb, t_np in rows:
        n_str = "-" if n is None else str(n)
        speedup = t_np / t_nb if t_nb == t_nb and t_nb > 0 else float("nan")
        print(f"{name:<20}{n_str:>8}{t_nb:>14.6f}{t_np:>14.6f}{speedup:>10.2f}")

    n_pts, t = bench_end_to_end(args.repeats)
    print(f"\ntwo-step Mapper end to end ({_kernels.backend()} backend): "
          f"{n_pts} points in {t:.4f}s")


if __name__ == "__main__":
    main()
