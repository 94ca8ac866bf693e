"""Internal cluster validation indices collected for every candidate.

All three indices are computed from the data and labels alone. Empty clusters
(possible with NMF) are excluded: indices are evaluated over the clusters
actually present, and the gate reports the emptiness separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algorithms import ClusterAssignment
from .errors import DegenerateMetricError, MetricUndefinedError


@dataclass(frozen=True)
class MetricsRecord:
    """One candidate's internal metrics; None marks a metric that was undefined
    or degenerate for this labeling (the gate carries the reason)."""

    silhouette: float | None
    calinski_harabasz: float | None  # math.inf when within-dispersion is zero
    davies_bouldin: float | None
    cluster_sizes: tuple[int, ...]


def _compact(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map labels onto 0..m-1 over the clusters actually present."""
    present, compact = np.unique(labels, return_inverse=True)
    return present, compact


def _centroids(x: np.ndarray, compact: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(compact, minlength=m)
    sums = np.zeros((m, x.shape[1]), dtype=np.float64)
    np.add.at(sums, compact, x)
    return sums / counts[:, None], counts


def silhouette(data: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette value s(i) = (b - a) / max(a, b); singletons score 0."""
    x = np.ascontiguousarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    present, compact = _compact(labels)
    m = len(present)
    n = x.shape[0]
    if m < 2:
        raise MetricUndefinedError(f"silhouette needs >= 2 clusters, got {m}")
    if m == n:
        return 0.0  # all singletons

    sums = kernels.dist_sums_by_cluster(x, compact.astype(np.int64), m)
    sizes = np.bincount(compact, minlength=m)
    own_size = sizes[compact]

    with np.errstate(invalid="ignore", divide="ignore"):
        a = sums[np.arange(n), compact] / (own_size - 1)
    other = sums / sizes[None, :]
    other[np.arange(n), compact] = np.inf
    b = other.min(axis=1)

    denom = np.maximum(a, b)
    s = np.zeros(n, dtype=np.float64)
    ok = (own_size > 1) & (denom > 0)
    s[ok] = (b[ok] - a[ok]) / denom[ok]
    return float(s.mean())


def calinski_harabasz(data: np.ndarray, labels: np.ndarray) -> float:
    """Between/within dispersion ratio [B/(m-1)] / [W/(n-m)]; inf when W = 0."""
    x = np.ascontiguousarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    _, compact = _compact(labels)
    m = int(compact.max()) + 1
    n = x.shape[0]
    if m < 2 or m > n - 1:
        raise MetricUndefinedError(
            f"calinski-harabasz needs 2 <= clusters <= rows-1, got {m} of {n}"
        )
    centroids, counts = _centroids(x, compact, m)
    grand = x.mean(axis=0)
    between = float((counts * ((centroids - grand) ** 2).sum(axis=1)).sum())
    within = float(((x - centroids[compact]) ** 2).sum())
    if within == 0.0:
        return math.inf
    return (between / (m - 1)) / (within / (n - m))


def davies_bouldin(data: np.ndarray, labels: np.ndarray) -> float:
    """Mean over clusters of max_j (S_i + S_j) / M_ij with centroid scatter S."""
    x = np.ascontiguousarray(data, dtype=np.float64)
    labels = np.asarray(labels)
    _, compact = _compact(labels)
    m = int(compact.max()) + 1
    if m < 2:
        raise MetricUndefinedError(f"davies-bouldin needs >= 2 clusters, got {m}")
    centroids, counts = _centroids(x, compact, m)
    member_dist = np.sqrt(((x - centroids[compact]) ** 2).sum(axis=1))
    scatter = np.zeros(m, dtype=np.float64)
    np.add.at(scatter, compact, member_dist)
    scatter /= counts

    diff = centroids[:, None, :] - centroids[None, :, :]
    sep = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    off = ~np.eye(m, dtype=bool)
    if (sep[off] == 0.0).any():
        raise DegenerateMetricError("distinct clusters share a centroid")
    ratio = (scatter[:, None] + scatter[None, :]) / np.where(off, sep, np.inf)
    return float(ratio.max(axis=1).mean())


def compute_metrics(
    data: np.ndarray, assignment: ClusterAssignment
) -> tuple[MetricsRecord, list[str]]:
    """All three indices with per-metric degeneracy capture.

    A metric that is undefined or degenerate for this labeling yields None and
    a note; one pathological candidate must not abort the grid.
    """
    notes: list[str] = []
    values: dict[str, float | None] = {}
    for name, fn in (
        ("silhouette", silhouette),
        ("calinski_harabasz", calinski_harabasz),
        ("davies_bouldin", davies_bouldin),
    ):
        try:
            values[name] = fn(data, assignment.labels)
        except (MetricUndefinedError, DegenerateMetricError) as exc:
            values[name] = None
            notes.append(f"{name}: {exc}")
    record = MetricsRecord(
        silhouette=values["silhouette"],
        calinski_harabasz=values["calinski_harabasz"],
        davies_bouldin=values["davies_bouldin"],
        cluster_sizes=tuple(int(s) for s in assignment.sizes),
    )
    return record, notes
