"""Non-negative matrix factorization by multiplicative updates.

Minimizes the squared Frobenius reconstruction error ||V - WH||^2. Rows are
clustered by the dominant column of W. The update steps are plain BLAS matrix
products, so both kernel backends share this implementation.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, ParameterError
from .assignment import ClusterAssignment

_DENOM_FLOOR = 1e-12  # keeps multiplicative updates finite on zero denominators


def nmf(
    data: np.ndarray,
    rank: int,
    *,
    seed: int = 0,
    max_iter: int = 500,
    tol: float = 1e-5,
) -> ClusterAssignment:
    """Factor V (n x p, nonnegative) as W (n x rank) @ H (rank x p).

    W and H start uniform on (0, 1] from the given seed; updates stop when the
    relative objective decrease falls to tol or max_iter is hit. Labels are the
    per-row argmax over W's columns (ties to the lowest index).
    """
    v = np.ascontiguousarray(data, dtype=np.float64)
    n, p = v.shape
    if (v < 0).any():
        i, j = np.argwhere(v < 0)[0]
        raise DomainError(f"negative cell at ({i}, {j}); NMF needs nonnegative input")
    if rank < 1 or rank > min(n, p):
        raise ParameterError(f"rank must be in [1, {min(n, p)}], got {rank}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    if tol < 0:
        raise ParameterError(f"tol must be >= 0, got {tol}")

    rng = np.random.default_rng(seed % 2**64)
    w = 1.0 - rng.random((n, rank))  # uniform on (0, 1]
    h = 1.0 - rng.random((rank, p))

    prev = _objective(v, w, h)
    for _ in range(max_iter):
        h *= (w.T @ v) / np.maximum(w.T @ w @ h, _DENOM_FLOOR)
        w *= (v @ h.T) / np.maximum(w @ h @ h.T, _DENOM_FLOOR)
        cur = _objective(v, w, h)
        assert cur <= prev + 1e-10 * (1.0 + prev), "NMF objective increased"
        if prev - cur <= tol * prev:
            prev = cur
            break
        prev = cur

    labels = np.argmax(w, axis=1).astype(np.int64)
    return ClusterAssignment(
        labels=labels, k=rank, algorithm_id="nmf", objective=max(0.0, prev)
    )


def _objective(v: np.ndarray, w: np.ndarray, h: np.ndarray) -> float:
    resid = v - w @ h
    return float(np.einsum("ij,ij->", resid, resid))
