"""Pure-numpy kernel implementations.

Fallback backend used when the compiled extension is unavailable (or forced
via CLUSTERGRID_KERNELS=py). Must stay semantically interchangeable with
kernels._native: identical labels/merge decisions, floats equal to within
normal summation-order noise.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

LINKAGE_SINGLE = 0
LINKAGE_COMPLETE = 1
LINKAGE_AVERAGE = 2
LINKAGE_WARD = 3


def pairwise_sq_dists(x: np.ndarray) -> np.ndarray:
    """Full matrix of squared Euclidean distances between rows of x."""
    n = x.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    # Row-blocked to keep the (block, n, d) temporary small.
    block = max(1, int(4e6 // max(1, n * x.shape[1])))
    for start in range(0, n, block):
        stop = min(n, start + block)
        diff = x[start:stop, None, :] - x[None, :, :]
        out[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def assign_nearest(x: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-center label per row (ties -> lowest index) and its squared distance."""
    diff = x[:, None, :] - centers[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    labels = np.argmin(sq, axis=1).astype(np.int64)
    return labels, sq[np.arange(x.shape[0]), labels]


def dist_sums_by_cluster(x: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """(n, k) sums of plain Euclidean distances from each row to each cluster's members.

    The self-distance (zero) is included in the row's own cluster sum.
    """
    d = np.sqrt(pairwise_sq_dists(x))
    out = np.zeros((x.shape[0], k), dtype=np.float64)
    for c in range(k):
        members = labels == c
        if members.any():
            out[:, c] = d[:, members].sum(axis=1)
    return out


def lance_williams_merge(
    dist: np.ndarray, linkage: int, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Agglomerate singletons until k clusters remain.

    dist is the full symmetric matrix of initial inter-point distances
    (squared Euclidean for ward, plain Euclidean otherwise); it is consumed.
    Cluster ids equal the smallest member row index: a merge of (a, b) with
    a < b keeps id a. The merged pair is always the minimum-distance pair,
    ties broken lexicographically on (lower id, higher id).

    Returns (per-row cluster ids, merge heights in order performed).
    """
    n = dist.shape[0]
    work = dist.astype(np.float64, copy=True)
    iu = np.triu_indices(n)
    work[iu[1], iu[0]] = np.inf  # lower triangle unused
    np.fill_diagonal(work, np.inf)

    sizes = np.ones(n, dtype=np.int64)
    ids = np.arange(n, dtype=np.int64)
    heights = np.empty(n - k, dtype=np.float64)

    for m in range(n - k):
        flat = np.argmin(work)
        a, b = divmod(int(flat), n)
        h = work[a, b]
        heights[m] = h

        # Lance-Williams update of d(a∪b, c) for every other active cluster c,
        # written into row/col a; row/col b is retired.
        all_dac = np.where(np.arange(n) < a, work[:, a], work[a, :])
        all_dbc = np.where(np.arange(n) < b, work[:, b], work[b, :])
        cols = np.nonzero(np.isfinite(all_dac) & np.isfinite(all_dbc))[0]
        dac = all_dac[cols]
        dbc = all_dbc[cols]
        na, nb = sizes[a], sizes[b]
        if linkage == LINKAGE_SINGLE:
            merged = np.minimum(dac, dbc)
        elif linkage == LINKAGE_COMPLETE:
            merged = np.maximum(dac, dbc)
        elif linkage == LINKAGE_AVERAGE:
            merged = (na * dac + nb * dbc) / (na + nb)
        elif linkage == LINKAGE_WARD:
            nc = sizes[cols]
            merged = ((na + nc) * dac + (nb + nc) * dbc - nc * h) / (na + nb + nc)
        else:
            raise ValueError(f"unknown linkage code {linkage}")

        lower = cols < a
        work[cols[lower], a] = merged[lower]
        work[a, cols[~lower]] = merged[~lower]
        work[b, :] = np.inf
        work[:, b] = np.inf
        sizes[a] += sizes[b]
        ids[ids == b] = a

    return ids, heights
