#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--rows N] [--dims D] [--repeat R]

Times the four shared kernels at survey scale plus two end-to-end fits, and
checks that both backends agree on every labeling decision while timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from clustergrid import kernels
from clustergrid.algorithms.kmeans import kmeans
from clustergrid.synth import make_blobs


def best_of(repeat, fn, *args):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=519)
    parser.add_argument("--dims", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    names = kernels.available_backends()
    if len(names) < 2:
        print("compiled backend not built; nothing to compare")
        return 1
    backends = {name: kernels.get_backend(name) for name in names}

    x, _ = make_blobs(args.rows, args.dims, 3, seed=4)
    labels = (np.arange(args.rows) % 3).astype(np.int64)
    centers = x[:8].copy()
    sq = backends["py"].pairwise_sq_dists(x)

    cases = {
        "pairwise_sq_dists": lambda b: b.pairwise_sq_dists(x),
        "assign_nearest": lambda b: b.assign_nearest(x, centers),
        "dist_sums_by_cluster": lambda b: b.dist_sums_by_cluster(x, labels, 3),
        "lance_williams (ward)": lambda b: b.lance_williams_merge(
            sq, kernels.LINKAGE_WARD, 3
        ),
        "kmeans fit (k=4, 10 restarts)": None,  # handled below
    }

    print(f"rows={args.rows} dims={args.dims} repeat={args.repeat} (best-of timing)")
    header = f"{'kernel':<32}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for label, runner in cases.items():
        timings = {}
        results = {}
        for name, backend in backends.items():
            if runner is None:
                timings[name], results[name] = best_of(
                    max(1, args.repeat // 2),
                    lambda b=backend: _kmeans_with(b, x),
                )
            else:
                timings[name], results[name] = best_of(
                    args.repeat, runner, backend
                )
        _check_agreement(label, results)
        ratio = timings["py"] / timings["native"]
        cells = "".join(f"{timings[n] * 1e3:>10.2f}ms" for n in names)
        print(f"{label:<32}{cells}{ratio:>9.1f}x")
    return 0


def _kmeans_with(backend, x):
    saved = (
        kernels.assign_nearest,
        kernels.pairwise_sq_dists,
        kernels.dist_sums_by_cluster,
        kernels.lance_williams_merge,
    )
    kernels.assign_nearest = backend.assign_nearest
    kernels.pairwise_sq_dists = backend.pairwise_sq_dists
    kernels.dist_sums_by_cluster = backend.dist_sums_by_cluster
    kernels.lance_williams_merge = backend.lance_williams_merge
    try:
        return kmeans(x, 4, seed=0, n_init=10)
    finally:
        (
            kernels.assign_nearest,
            kernels.pairwise_sq_dists,
            kernels.dist_sums_by_cluster,
            kernels.lance_williams_merge,
        ) = saved


def _check_agreement(label, results):
    a, b = list(results.values())
    if hasattr(a, "labels"):
        assert np.array_equal(a.labels, b.labels), f"{label}: labels diverge"
        return
    if isinstance(a, tuple):
        for left, right in zip(a, b):
            if left.dtype.kind == "i":
                assert np.array_equal(left, right), f"{label}: decisions diverge"
            else:
                assert np.allclose(left, right, rtol=1e-9), f"{label}: values diverge"
    else:
        assert np.allclose(a, b, rtol=1e-9), f"{label}: values diverge"


if __name__ == "__main__":
    raise SystemExit(main())
