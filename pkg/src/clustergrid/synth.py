"""Deterministic synthetic blob datasets for demos and tests."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def make_blobs(
    rows: int,
    dims: int,
    k: int,
    *,
    block_value: float = 12.0,
    cluster_std: float = 1.0,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian blobs around block-structured centers.

    The feature axes are split into k contiguous blocks; center j is
    block_value on its own block and zero elsewhere, so centers are pairwise
    at least block_value * sqrt(2) apart and each cluster owns a disjoint
    nonnegative feature pattern (recoverable by NMF, not just by distance
    methods). Rows interleave across clusters so row order carries no signal.

    Returns (values, generating_labels).
    """
    if k > dims:
        raise ValueError(f"need dims >= k for block centers, got {dims} < {k}")
    rng = np.random.default_rng(seed)
    bounds = np.linspace(0, dims, k + 1).astype(int)
    centers = np.zeros((k, dims))
    for j in range(k):
        centers[j, bounds[j] : bounds[j + 1]] = block_value
    labels = np.arange(rows) % k
    values = centers[labels] + rng.normal(0.0, cluster_std, size=(rows, dims))
    return values, labels.astype(np.int64)


def write_blob_csv(
    path: str | Path,
    rows: int,
    dims: int,
    k: int,
    *,
    block_value: float = 12.0,
    cluster_std: float = 1.0,
    seed: int = 0,
) -> list[str]:
    """Write a blob dataset as CSV with columns f01..fNN; returns the names."""
    values, _ = make_blobs(
        rows, dims, k, block_value=block_value, cluster_std=cluster_std, seed=seed
    )
    names = [f"f{j + 1:02d}" for j in range(dims)]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(names)
        for row in values:
            out.writerow([f"{cell:.6f}" for cell in row])
    return names
