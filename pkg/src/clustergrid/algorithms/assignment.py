"""Common result type for all clustering algorithms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClusterAssignment:
    """A labeling of every row into one of k clusters.

    objective is algorithm-specific: k-means inertia, AHC final merge height,
    NMF squared reconstruction error. Clusters may be empty (NMF can collapse
    factors); the gate flags that downstream.
    """

    labels: np.ndarray
    k: int
    algorithm_id: str
    objective: float

    def __post_init__(self):
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("labels must be 1-D")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"labels must lie in [0, {self.k})")
        if not self.objective >= 0.0:
            raise ValueError(f"objective must be nonnegative, got {self.objective}")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def sizes(self) -> np.ndarray:
        """Cluster sizes indexed 0..k-1 (zeros for empty clusters)."""
        return np.bincount(self.labels, minlength=self.k)
