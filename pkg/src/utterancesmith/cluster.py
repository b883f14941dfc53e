"""Seeded, fully deterministic k-means (k-means++ init, Lloyd iterations)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .hashing import SplitMix64
from .validation import check_cluster_count, check_matrix

MAX_ITER = 100


@dataclass(frozen=True)
class KMeansResult:
    """Converged clustering: one assignment per input point."""

    assignments: tuple[int, ...]
    centers: np.ndarray
    sizes: tuple[int, ...]


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n_points, n_centers) matrix of squared Euclidean distances."""
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _init_plus_plus(points: np.ndarray, k: int, rng: SplitMix64) -> np.ndarray:
    n = points.shape[0]
    chosen = [rng.below(n)]
    while len(chosen) < k:
        d2 = _squared_distances(points, points[chosen]).min(axis=1)
        total = float(d2.sum())
        if total == 0.0:
            # all remaining points coincide with a chosen center
            remaining = [i for i in range(n) if i not in chosen]
            chosen.append(remaining[rng.below(len(remaining))])
            continue
        r = rng.next_float() * total
        acc = 0.0
        pick = n - 1
        for i in range(n):
            acc += float(d2[i])
            if acc > r:
                pick = i
                break
        chosen.append(pick)
    return points[chosen].copy()


def _assign(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Nearest-center labels; ties go to the lowest center index."""
    return _squared_distances(points, centers).argmin(axis=1)


def _repair_empty(labels: np.ndarray, points: np.ndarray, centers: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point farthest from its current center.

    Points that are the sole member of their cluster stay put so a repair
    never creates a new empty cluster.  Processing order (ascending empty
    cluster index, argmax with first-wins ties) keeps this deterministic.
    """
    labels = labels.copy()
    for empty in range(k):
        if (labels == empty).any():
            continue
        dist_own = np.sqrt(((points - centers[labels]) ** 2).sum(axis=1))
        counts = np.bincount(labels, minlength=k)
        movable = counts[labels] > 1
        if not movable.any():
            continue
        dist_own[~movable] = -1.0
        labels[int(dist_own.argmax())] = empty
    return labels


def kmeans(points, k: int, seed: int) -> KMeansResult:
    """Cluster row vectors into k groups, reproducibly for a given seed."""
    X = check_matrix(points)
    k = check_cluster_count(k, X.shape[0])
    rng = SplitMix64(seed)

    centers = _init_plus_plus(X, k, rng)
    labels = _repair_empty(_assign(X, centers), X, centers, k)
    for _ in range(MAX_ITER):
        centers = np.stack([X[labels == j].mean(axis=0) for j in range(k)])
        new_labels = _repair_empty(_assign(X, centers), X, centers, k)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    else:
        centers = np.stack([X[labels == j].mean(axis=0) for j in range(k)])

    sizes = np.bincount(labels, minlength=k)
    return KMeansResult(
        assignments=tuple(int(v) for v in labels),
        centers=centers,
        sizes=tuple(int(v) for v in sizes),
    )


class SeededKMeans(ClusterMixin, BaseEstimator):
    """Estimator wrapper around :func:`kmeans` with sklearn attribute names."""

    def __init__(self, n_clusters: int = 2, seed: int = 0):
        self.n_clusters = n_clusters
        self.seed = seed

    def fit(self, X, y=None):
        result = kmeans(X, self.n_clusters, self.seed)
        self.labels_ = np.asarray(result.assignments, dtype=np.int64)
        self.cluster_centers_ = result.centers
        self.cluster_sizes_ = np.asarray(result.sizes, dtype=np.int64)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
