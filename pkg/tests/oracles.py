"""Independent reference implementations used only to check the package.

Everything here is written from the definitions with naive loops -- no code
is shared with clustergrid's vectorized/compiled paths.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def euclid(a, b) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def naive_silhouette(x: np.ndarray, labels: np.ndarray) -> float:
    n = len(labels)
    clusters = sorted(set(int(v) for v in labels))
    scores = []
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            scores.append(0.0)
            continue
        a = sum(euclid(x[i], x[j]) for j in own) / len(own)
        b = math.inf
        for c in clusters:
            if c == labels[i]:
                continue
            members = [j for j in range(n) if labels[j] == c]
            b = min(b, sum(euclid(x[i], x[j]) for j in members) / len(members))
        denom = max(a, b)
        scores.append(0.0 if denom == 0 else (b - a) / denom)
    return sum(scores) / n


def naive_calinski_harabasz(x: np.ndarray, labels: np.ndarray) -> float:
    n = len(labels)
    clusters = sorted(set(int(v) for v in labels))
    k = len(clusters)
    grand = [sum(row[j] for row in x) / n for j in range(x.shape[1])]
    between = 0.0
    within = 0.0
    for c in clusters:
        members = [i for i in range(n) if labels[i] == c]
        centroid = [sum(x[i][j] for i in members) / len(members) for j in range(x.shape[1])]
        between += len(members) * sum((a - b) ** 2 for a, b in zip(centroid, grand))
        for i in members:
            within += sum((x[i][j] - centroid[j]) ** 2 for j in range(x.shape[1]))
    if within == 0.0:
        return math.inf
    return (between / (k - 1)) / (within / (n - k))


def naive_davies_bouldin(x: np.ndarray, labels: np.ndarray) -> float:
    n = len(labels)
    clusters = sorted(set(int(v) for v in labels))
    centroids = []
    scatters = []
    for c in clusters:
        members = [i for i in range(n) if labels[i] == c]
        centroid = [sum(x[i][j] for i in members) / len(members) for j in range(x.shape[1])]
        centroids.append(centroid)
        scatters.append(sum(euclid(x[i], centroid) for i in members) / len(members))
    total = 0.0
    for i in range(len(clusters)):
        worst = 0.0
        for j in range(len(clusters)):
            if i == j:
                continue
            worst = max(worst, (scatters[i] + scatters[j]) / euclid(centroids[i], centroids[j]))
        total += worst
    return total / len(clusters)


def brute_force_min_inertia(x: np.ndarray, k: int) -> float:
    """Exhaustive minimum over all k^n labelings of centroid inertia."""
    n = len(x)
    best = math.inf
    for labeling in itertools.product(range(k), repeat=n):
        inertia = 0.0
        for c in range(k):
            members = [i for i in range(n) if labeling[i] == c]
            if not members:
                continue
            centroid = [
                sum(x[i][j] for i in members) / len(members) for j in range(x.shape[1])
            ]
            inertia += sum(
                (x[i][j] - centroid[j]) ** 2 for i in members for j in range(x.shape[1])
            )
        best = min(best, inertia)
    return best


def _cluster_distance(x: np.ndarray, a: list[int], b: list[int], linkage: str) -> float:
    pair_dists = [euclid(x[i], x[j]) for i in a for j in b]
    if linkage == "single":
        return min(pair_dists)
    if linkage == "complete":
        return max(pair_dists)
    if linkage == "average":
        return sum(pair_dists) / len(pair_dists)
    if linkage == "ward":
        # Lance-Williams ward value: 2x the ESS increase of merging a and b.
        ca = [sum(x[i][j] for i in a) / len(a) for j in range(x.shape[1])]
        cb = [sum(x[i][j] for i in b) / len(b) for j in range(x.shape[1])]
        gap = sum((p - q) ** 2 for p, q in zip(ca, cb))
        return 2.0 * len(a) * len(b) / (len(a) + len(b)) * gap
    raise ValueError(linkage)


def naive_agglomerative(x: np.ndarray, k: int, linkage: str):
    """Greedy merging straight from the linkage definitions.

    Cluster id = smallest member row index; ties on distance break
    lexicographically on (lower id, higher id). Returns (labels, heights)
    with ward heights converted to distance units (sqrt).
    """
    clusters: dict[int, list[int]] = {i: [i] for i in range(len(x))}
    heights = []
    while len(clusters) > k:
        ids = sorted(clusters)
        best = None
        best_pair = None
        for ia, ib in itertools.combinations(ids, 2):
            d = _cluster_distance(x, clusters[ia], clusters[ib], linkage)
            if best is None or d < best:
                best = d
                best_pair = (ia, ib)
        ia, ib = best_pair
        clusters[ia] = sorted(clusters[ia] + clusters[ib])
        del clusters[ib]
        heights.append(best)
    labels = np.empty(len(x), dtype=np.int64)
    for rank, cid in enumerate(sorted(clusters)):
        for i in clusters[cid]:
            labels[i] = rank
    if linkage == "ward":
        heights = [math.sqrt(max(0.0, h)) for h in heights]
    return labels, heights


def partition_of(labels) -> frozenset[frozenset[int]]:
    groups: dict[int, set[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(int(lab), set()).add(i)
    return frozenset(frozenset(g) for g in groups.values())


def same_partition(a, b) -> bool:
    return partition_of(a) == partition_of(b)


def random_labels_all_present(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Random labeling guaranteed to use every cluster index."""
    labels = rng.integers(0, k, size=n)
    labels[rng.permutation(n)[:k]] = np.arange(k)
    return labels.astype(np.int64)
