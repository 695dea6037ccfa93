"""Split/merge clustering: ISODATA, AGMFI and the CCIA-seeded EIAGMFI.

All three wrap K-Means passes with phases that discard undersized clusters,
split wide ones and merge close ones, so the final cluster count is driven
by the data rather than fixed by the caller.

AGMFI derives its merge threshold from the current centroids (half the mean
pairwise centroid distance by default) and alternates phases: odd outer
iterations split, even ones merge. It stops after ``max_iter`` outer
iterations or once a split phase and a merge phase in a row changed nothing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AlgorithmError
from .kmeans import ClusteringResult, kmeans, recompute_centroids, resolve_init
from .matrix_io import as_array
from .seeding import ccia_seed

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsodataParams:
    k_init: int
    theta_n: int = 1
    theta_s: float = 1.0
    theta_c: float = 1.0
    max_iter: int = 20
    kmeans_max_iter: int = 100
    tol: float = 1e-8

    def __post_init__(self):
        if self.k_init < 1:
            raise AlgorithmError("k_init must be at least 1")
        if self.theta_n < 1:
            raise AlgorithmError("theta_n must be at least 1")
        if not self.theta_s > 0:
            raise AlgorithmError("theta_s must be positive")
        if not self.theta_c >= 0:
            raise AlgorithmError("theta_c must be non-negative")
        if self.max_iter < 1:
            raise AlgorithmError("max_iter must be at least 1")


@dataclass(frozen=True)
class AgmfiParams:
    """Parameters for :func:`agmfi`.

    ``split_factor`` multiplies the dataset-wide per-dimension standard
    deviation to give the split threshold; ``merge_multiplier`` scales the
    automatic merge factor.
    """

    k_init: int = 10
    min_cluster_size: int = 1
    max_iter: int = 20
    split_factor: float = 1.0
    merge_multiplier: float = 0.5
    kmeans_max_iter: int = 100
    tol: float = 1e-8

    def __post_init__(self):
        if self.k_init < 1:
            raise AlgorithmError("k_init must be at least 1")
        if self.min_cluster_size < 1:
            raise AlgorithmError("min_cluster_size must be at least 1")
        if self.max_iter < 1:
            raise AlgorithmError("max_iter must be at least 1")
        if not self.split_factor > 0:
            raise AlgorithmError("split_factor must be positive")
        if not self.merge_multiplier >= 0:
            raise AlgorithmError("merge_multiplier must be non-negative")


def split_cluster(data, members, center) -> tuple[np.ndarray, np.ndarray]:
    """Two child centers offset by half a standard deviation along the widest dimension.

    The widest dimension is the one with the largest population standard
    deviation among ``members`` (lowest index on ties). Returns the child
    below the parent first.
    """
    x = as_array(data)
    members = np.asarray(members, dtype=np.int64)
    if members.size < 2:
        raise AlgorithmError(f"cannot split a cluster of {members.size} member(s)")
    sigma = x[members].std(axis=0)
    j = int(np.argmax(sigma))
    lo = np.array(center, dtype=np.float64)
    hi = lo.copy()
    lo[j] -= 0.5 * sigma[j]
    hi[j] += 0.5 * sigma[j]
    return lo, hi


def merge_clusters(centroids, i: int, j: int, sizes) -> np.ndarray:
    """Replace centers ``i`` and ``j`` by their size-weighted mean.

    The merged center takes the lower of the two positions; the others keep
    their relative order.
    """
    centroids = np.asarray(centroids, dtype=np.float64)
    k = centroids.shape[0]
    if not (0 <= i < k and 0 <= j < k):
        raise AlgorithmError(f"merge indices ({i}, {j}) out of range for K={k}")
    if i == j:
        raise AlgorithmError("cannot merge a cluster with itself")
    wi, wj = float(sizes[i]), float(sizes[j])
    if wi + wj > 0:
        merged = (wi * centroids[i] + wj * centroids[j]) / (wi + wj)
    else:
        merged = 0.5 * (centroids[i] + centroids[j])
    lo, hi = min(i, j), max(i, j)
    out = np.delete(centroids, hi, axis=0)
    out[lo] = merged
    return out


def auto_merge_factor(centroids) -> float:
    """Mean of all pairwise distances between centroids."""
    centroids = np.atleast_2d(np.asarray(centroids, dtype=np.float64))
    k = centroids.shape[0]
    if k < 2:
        raise AlgorithmError(f"merge factor needs at least 2 centroids, got {k}")
    iu = np.triu_indices(k, 1)
    return float(np.sqrt(kernels.pairwise_sqdist(centroids)[iu]).mean())


class _State:
    """Mutable centroids/labels/sizes between K-Means passes."""

    def __init__(self, x, result: ClusteringResult, outer: int, events: list):
        self.x = x
        self.centers = result.centroids.copy()
        self.labels = result.labels.copy()
        self.sizes = np.bincount(self.labels, minlength=len(self.centers))
        self.outer = outer
        self.events = events

    @property
    def k(self):
        return self.centers.shape[0]

    def log(self, kind, **detail):
        self.events.append((self.outer, kind, detail))
        log.debug("iteration %d: %s %s", self.outer, kind, detail)

    def discard(self, min_size: int) -> bool:
        keep = self.sizes >= min_size
        if keep.all():
            return False
        if not keep.any():
            raise AlgorithmError(f"all clusters discarded (every cluster has fewer than {min_size} members)")
        for c in np.flatnonzero(~keep):
            self.log("discard", cluster=int(c), size=int(self.sizes[c]))
        remap = np.cumsum(keep) - 1
        survivors = self.centers[keep]
        labels = remap[self.labels]
        orphans = ~keep[self.labels]
        if orphans.any():
            labels[orphans] = kernels.assign_nearest(self.x[orphans], survivors)[0]
        self.labels = labels
        self.centers = recompute_centroids(self.x, labels, survivors.shape[0])
        self.sizes = np.bincount(labels, minlength=self.k)
        return True

    def split(self, too_wide, min_size: int, cap: int) -> bool:
        """Split every cluster flagged by ``too_wide(members)`` while K stays within ``cap``."""
        centers, sizes, labels = [], [], np.empty_like(self.labels)
        live = self.k
        for c in range(self.k):
            members = np.flatnonzero(self.labels == c)
            if (live < cap and members.size >= max(2, 2 * min_size) and too_wide(members)):
                lo, hi = split_cluster(self.x, members, self.centers[c])
                side = kernels.assign_nearest(self.x[members], np.vstack([lo, hi]))[0]
                labels[members] = len(centers) + side
                centers += [lo, hi]
                sizes += [int((side == 0).sum()), int((side == 1).sum())]
                live += 1
                self.log("split", cluster=c, size=int(members.size))
            else:
                labels[members] = len(centers)
                centers.append(self.centers[c])
                sizes.append(int(members.size))
        if live == self.k:
            return False
        self.centers = np.vstack(centers)
        self.sizes = np.array(sizes, dtype=np.int64)
        self.labels = labels
        return True

    def merge(self, threshold: float) -> bool:
        """Merge the closest pair while closer than ``threshold``, at most K//2 times."""
        merged = 0
        for _ in range(self.k // 2):
            if self.k < 2:
                break
            d2 = kernels.pairwise_sqdist(self.centers)
            d2[np.tril_indices(self.k)] = np.inf
            i, j = divmod(int(np.argmin(d2)), self.k)
            dist = math.sqrt(d2[i, j])
            if not dist < threshold:
                break
            self.log("merge", clusters=(i, j), distance=dist, threshold=threshold)
            self.centers = merge_clusters(self.centers, i, j, self.sizes)
            self.sizes[i] += self.sizes[j]
            self.sizes = np.delete(self.sizes, j)
            self.labels[self.labels == j] = i
            self.labels[self.labels > j] -= 1
            merged += 1
        return merged > 0


def _finish(result: ClusteringResult, iterations: int, outer: int, events: list) -> ClusteringResult:
    result.iterations = iterations
    result.outer_iterations = outer
    result.events = events
    return result


def isodata(data, params: IsodataParams, init=None, *, seed=None) -> ClusteringResult:
    """ISODATA with size-based discard, variance split and distance merge.

    Each outer iteration runs K-Means to stability, then discards clusters
    below ``theta_n`` members, splits clusters whose largest per-dimension
    standard deviation exceeds ``theta_s`` (if they hold at least
    ``2 * theta_n`` rows), and merges the closest centroid pair while it is
    nearer than ``theta_c``. Stops when an iteration changes nothing.
    """
    x = as_array(data)
    centers = resolve_init(x, params.k_init if init is None else None, init, seed)
    cap = 2 * params.k_init
    result = kmeans(x, init=centers, max_iter=params.kmeans_max_iter, tol=params.tol)
    iterations = result.iterations
    events: list = []
    outer = 0
    for outer in range(1, params.max_iter + 1):
        state = _State(x, result, outer, events)
        changed = state.discard(params.theta_n)
        changed |= state.split(lambda m: x[m].std(axis=0).max() > params.theta_s, params.theta_n, cap)
        changed |= state.merge(params.theta_c)
        if not changed:
            break
        result = kmeans(x, init=state.centers, max_iter=params.kmeans_max_iter, tol=params.tol)
        iterations += result.iterations
    return _finish(result, iterations, outer, events)


def agmfi(data, params: AgmfiParams, init=None, *, seed=None) -> ClusteringResult:
    """K-Means refined by automatic-merge-factor split/merge phases.

    Parameters
    ----------
    data : ExpressionMatrix or array_like
    params : AgmfiParams
    init : array_like, optional
        Initial centroids; random distinct rows drawn from ``seed`` if omitted.

    Per outer iteration ``t``: compute the merge factor from the current
    centroids, discard clusters smaller than ``min_cluster_size``, then merge
    (even ``t``) or split (odd ``t``) and rerun K-Means from the resulting
    centroids. Splits never take K above ``2 * k_init``.
    """
    x = as_array(data)
    centers = resolve_init(x, params.k_init if init is None else None, init, seed)
    data_std = x.std(axis=0)
    split_limit = params.split_factor * data_std
    cap = 2 * params.k_init
    result = kmeans(x, init=centers, max_iter=params.kmeans_max_iter, tol=params.tol)
    iterations = result.iterations
    events: list = []
    idle = 0
    outer = 0
    for outer in range(1, params.max_iter + 1):
        state = _State(x, result, outer, events)
        threshold = params.merge_multiplier * auto_merge_factor(state.centers) if state.k >= 2 else 0.0
        changed = state.discard(params.min_cluster_size)
        if outer % 2 == 0:
            changed |= state.merge(threshold)
        else:
            changed |= state.split(lambda m: bool((x[m].std(axis=0) > split_limit).any()),
                                   params.min_cluster_size, cap)
        if not changed:
            idle += 1
            if idle >= 2:
                break
            continue
        idle = 0
        result = kmeans(x, init=state.centers, max_iter=params.kmeans_max_iter, tol=params.tol)
        iterations += result.iterations
    return _finish(result, iterations, outer, events)


def eiagmfi(data, params: AgmfiParams) -> ClusteringResult:
    """AGMFI started from CCIA centroids instead of random rows; fully deterministic."""
    x = as_array(data)
    return agmfi(x, params, init=ccia_seed(x, params.k_init))
