"""Agglomerative hierarchical clustering via Lance-Williams updates.

Works on the full pairwise distance matrix (O(n^2) memory), which is fine at
survey scale. Fully deterministic: minimum-distance pair each step, ties
broken lexicographically on (lower cluster id, higher cluster id).
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import ParameterError
from .assignment import ClusterAssignment

LINKAGES = ("ward", "complete", "average", "single")

_LINKAGE_CODES = {
    "single": kernels.LINKAGE_SINGLE,
    "complete": kernels.LINKAGE_COMPLETE,
    "average": kernels.LINKAGE_AVERAGE,
    "ward": kernels.LINKAGE_WARD,
}


def agglomerative(data: np.ndarray, k: int, linkage: str = "ward") -> ClusterAssignment:
    """Merge singletons bottom-up until exactly k clusters remain.

    The objective is the height (inter-cluster distance) of the final merge,
    0 when k equals the row count. Ward heights are reported in distance
    units (square root of the Lance-Williams squared-distance value).
    """
    x = np.ascontiguousarray(data, dtype=np.float64)
    n = x.shape[0]
    if k < 1 or k > n:
        raise ParameterError(f"k must be in [1, {n}], got {k}")
    if linkage not in _LINKAGE_CODES:
        raise ParameterError(
            f"linkage must be one of {', '.join(LINKAGES)}; got {linkage!r}"
        )

    if k == n:
        return ClusterAssignment(
            labels=np.arange(n, dtype=np.int64), k=k, algorithm_id="ahc", objective=0.0
        )

    dist = kernels.pairwise_sq_dists(x)
    if linkage != "ward":
        dist = np.sqrt(dist)  # ward's recurrence runs on squared distances

    ids, heights = kernels.lance_williams_merge(dist, _LINKAGE_CODES[linkage], k)
    if linkage == "single":
        assert (np.diff(heights) >= 0).all(), "single-linkage heights must be sorted"

    # Cluster ids are min member row indices; relabel in first-appearance order.
    _, labels = np.unique(ids, return_inverse=True)
    objective = max(0.0, float(heights[-1]))  # fp noise can dip just below zero
    if linkage == "ward":
        objective = float(np.sqrt(objective))
    return ClusterAssignment(
        labels=labels.astype(np.int64), k=k, algorithm_id="ahc", objective=objective
    )
