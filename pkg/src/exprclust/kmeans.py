"""Euclidean K-Means (Lloyd iteration) and the centroid machinery shared by
the seeding and adaptive algorithms."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import AlgorithmError, EmptyClusterError
from .matrix_io import as_array

log = logging.getLogger(__name__)


@dataclass
class ClusteringResult:
    """Outcome of a clustering run.

    ``objective_history`` holds the within-cluster sum of squared distances
    after each assignment step of the last K-Means pass, so it is
    non-increasing. ``iterations`` counts assignment steps over all passes.
    ``events`` is filled by the adaptive algorithms with ``(outer_iteration,
    kind, detail)`` tuples for every discard, split and merge.
    """

    labels: np.ndarray
    centroids: np.ndarray
    objective_history: list[float]
    iterations: int
    converged: bool = True
    outer_iterations: int = 0
    events: list[tuple[int, str, dict]] = field(default_factory=list)

    @property
    def final_k(self) -> int:
        return self.centroids.shape[0]

    def count(self, kind: str) -> int:
        return sum(1 for e in self.events if e[1] == kind)


def euclidean_distance(x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise AlgorithmError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(((x - y) ** 2).sum()))


def nearest_centroid(point, centroids) -> tuple[int, float]:
    """Return ``(index, distance)`` of the closest centroid; ties go to the lowest index."""
    point = np.asarray(point, dtype=np.float64)
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    if centroids.shape[0] < 1:
        raise AlgorithmError("no centroids given")
    if point.ndim != 1 or centroids.shape[1] != point.shape[0]:
        raise AlgorithmError(f"dimension mismatch: point {point.shape} vs centroids {centroids.shape}")
    labels, d2 = kernels.assign_nearest(point[None, :], centroids)
    return int(labels[0]), float(np.sqrt(d2[0]))


def assign(data, centroids) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-centroid labels and squared distances for every row."""
    return kernels.assign_nearest(as_array(data), centroids)


def recompute_centroids(data, labels, k: int) -> np.ndarray:
    """Arithmetic mean of each cluster's members.

    Raises
    ------
    EmptyClusterError
        If some cluster in ``range(k)`` has no members.
    """
    x = as_array(data)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (x.shape[0],):
        raise AlgorithmError(f"assignment has length {labels.shape}, expected {x.shape[0]}")
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise AlgorithmError(f"assignment index outside [0, {k})")
    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise EmptyClusterError(int(empty[0]))
    sums = np.column_stack([np.bincount(labels, weights=x[:, d], minlength=k) for d in range(x.shape[1])])
    return sums / counts[:, None]


def repair_empty(data, labels, d2, centers) -> int:
    """Re-seed empty clusters in place with the row farthest from its center.

    Returns the number of repairs. When every row already sits on its
    center, a row is taken from the lowest-index cluster with spare members.
    """
    x = as_array(data)
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    repairs = 0
    while (counts == 0).any():
        c = int(np.flatnonzero(counts == 0)[0])
        if d2.max() > 0:
            p = int(np.argmax(d2))
        else:
            p = int(np.flatnonzero(counts[labels] >= 2)[0])
        counts[labels[p]] -= 1
        labels[p] = c
        counts[c] += 1
        d2[p] = 0.0
        centers[c] = x[p]
        repairs += 1
    if repairs:
        log.debug("repaired %d empty cluster(s)", repairs)
    return repairs


def random_init(data, k: int, seed=None) -> np.ndarray:
    """``k`` distinct rows of ``data`` drawn without replacement."""
    x = as_array(data)
    _check_k(k, x.shape[0])
    rng = np.random.default_rng(seed)
    idx = rng.choice(x.shape[0], size=k, replace=False)
    return x[idx].copy()


def _check_k(k, n):
    if k < 1:
        raise AlgorithmError(f"K must be at least 1, got {k}")
    if k > n:
        raise AlgorithmError(f"K={k} exceeds the number of rows n={n}")


def resolve_init(data, k, init, seed) -> np.ndarray:
    """Turn ``init`` (centroid array, or ``None`` for seeded random rows) into centers."""
    x = as_array(data)
    if init is None:
        if k is None:
            raise AlgorithmError("K is required with random initialization")
        return random_init(x, k, seed)
    centers = np.array(init, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[1] != x.shape[1]:
        raise AlgorithmError(f"initial centroids have shape {centers.shape}, expected (K, {x.shape[1]})")
    if k is not None and centers.shape[0] != k:
        raise AlgorithmError(f"{centers.shape[0]} initial centroids given for K={k}")
    _check_k(centers.shape[0], x.shape[0])
    if not np.isfinite(centers).all():
        raise AlgorithmError("initial centroids contain non-finite values")
    return centers


def kmeans(data, k: int | None = None, init=None, *, seed=None, max_iter: int = 100,
           tol: float = 1e-8) -> ClusteringResult:
    """Lloyd's K-Means with Euclidean distance.

    Parameters
    ----------
    data : ExpressionMatrix or array_like, shape (n, m)
    k : int, optional
        Number of clusters; may be omitted when ``init`` is given.
    init : array_like, shape (k, m), optional
        Initial centroids. If omitted, ``k`` distinct rows are drawn with
        ``numpy.random.default_rng(seed)``.
    seed : int or numpy.random.Generator, optional
    max_iter : int
        Maximum number of assignment steps.
    tol : float
        Stop once every centroid moves less than this.

    Iteration also stops when the assignment repeats. Clusters that lose
    all members are re-seeded with the farthest row so K stays fixed.
    """
    x = as_array(data)
    if max_iter < 1:
        raise AlgorithmError("max_iter must be at least 1")
    if tol < 0:
        raise AlgorithmError("tol must be non-negative")
    centers = resolve_init(x, k, init, seed)
    k = centers.shape[0]

    history: list[float] = []
    prev = None
    converged = False
    it = 0
    labels = None
    while it < max_iter:
        it += 1
        labels, d2 = kernels.assign_nearest(x, centers)
        repair_empty(x, labels, d2, centers)
        history.append(float(d2.sum()))
        if prev is not None and np.array_equal(labels, prev):
            converged = True
            break
        new = recompute_centroids(x, labels, k)
        shift = np.sqrt(((new - centers) ** 2).sum(axis=1)).max()
        centers = new
        prev = labels
        if shift < tol:
            converged = True
            break
    centers = recompute_centroids(x, labels, k)
    return ClusteringResult(labels=labels, centroids=centers, objective_history=history,
                            iterations=it, converged=converged)


def objective(data, labels, centroids) -> float:
    """Within-cluster sum of squared distances."""
    x = as_array(data)
    diff = x - np.asarray(centroids)[np.asarray(labels)]
    return float((diff * diff).sum())
