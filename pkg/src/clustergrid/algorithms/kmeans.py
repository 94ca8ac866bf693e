"""Lloyd's k-means with k-means++ seeding and deterministic restarts."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import ParameterError
from .assignment import ClusterAssignment


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng((seed % 2**64, restart))


def _plusplus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: first center uniform, then D^2-weighted draws."""
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]), dtype=np.float64)
    centers[0] = x[int(rng.integers(n))]
    d2 = np.einsum("ij,ij->i", x - centers[0], x - centers[0])
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            cum = np.cumsum(d2)
            idx = int(np.searchsorted(cum, rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))  # all mass on chosen points (duplicates)
        centers[j] = x[idx]
        cand = np.einsum("ij,ij->i", x - centers[j], x - centers[j])
        np.minimum(d2, cand, out=d2)
    return centers


def _lloyd(x: np.ndarray, k: int, rng: np.random.Generator, max_iter: int, tol: float):
    """One restart; returns (labels, inertia). Inertia is asserted non-increasing."""
    n = x.shape[0]
    centers = _plusplus_init(x, k, rng)
    prev_labels = None
    prev_inertia = np.inf
    labels = np.zeros(n, dtype=np.int64)
    inertia = 0.0
    for _ in range(max_iter):
        labels, sqd = kernels.assign_nearest(x, centers)
        inertia = float(sqd.sum())
        assert inertia <= prev_inertia * (1.0 + 1e-12) + 1e-12, "inertia increased"
        prev_inertia = inertia

        counts = np.bincount(labels, minlength=k)
        for c in np.nonzero(counts == 0)[0]:
            # Re-seed an empty cluster at the point farthest from its centroid.
            farthest = int(np.argmax(sqd))
            labels = labels.copy()
            labels[farthest] = c
            sqd = sqd.copy()
            sqd[farthest] = 0.0
            counts = np.bincount(labels, minlength=k)
            inertia = float(sqd.sum())

        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels

        sums = np.zeros_like(centers)
        np.add.at(sums, labels, x)
        new_centers = np.where(
            (counts > 0)[:, None], sums / np.maximum(counts, 1)[:, None], centers
        )
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        centers = new_centers
        if shift <= tol:
            labels, sqd = kernels.assign_nearest(x, centers)
            inertia = float(sqd.sum())
            break
    return labels, inertia


def kmeans(
    data: np.ndarray,
    k: int,
    *,
    seed: int = 0,
    n_init: int = 10,
    max_iter: int = 300,
    tol: float = 0.0,
) -> ClusterAssignment:
    """Best-of-n_init Lloyd runs; restart r is seeded from (seed, r).

    Returns the restart with minimal inertia (ties: earliest restart), so the
    result is a pure function of (data, k, seed, n_init, max_iter, tol).
    """
    x = np.ascontiguousarray(data, dtype=np.float64)
    n = x.shape[0]
    if k < 1 or k > n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")
    if n_init < 1:
        raise ParameterError(f"n_init must be >= 1, got {n_init}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}")

    if k == n:
        return ClusterAssignment(
            labels=np.arange(n, dtype=np.int64), k=k, algorithm_id="kmeans", objective=0.0
        )

    best_labels = None
    best_inertia = np.inf
    for restart in range(n_init):
        labels, inertia = _lloyd(x, k, _restart_rng(seed, restart), max_iter, tol)
        if inertia < best_inertia:
            best_inertia = inertia
            best_labels = labels
    return ClusterAssignment(
        labels=best_labels, k=k, algorithm_id="kmeans", objective=best_inertia
    )
