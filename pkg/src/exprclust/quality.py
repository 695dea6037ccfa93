"""Silhouette-based cluster quality."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AlgorithmError
from .matrix_io import as_array


@dataclass(frozen=True)
class QualityReport:
    """Per-point silhouettes and their aggregates.

    ``per_cluster_mean`` is NaN for clusters with no members.
    ``scaled_score`` is 100 times the overall mean silhouette.
    """

    per_point: np.ndarray
    per_cluster_mean: np.ndarray
    overall: float

    @property
    def scaled_score(self) -> float:
        return 100.0 * self.overall

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "scaled_score": self.scaled_score,
            "per_cluster_mean": [None if np.isnan(v) else float(v) for v in self.per_cluster_mean],
        }

    def to_keyvalue(self) -> str:
        lines = [f"overall={self.overall!r}", f"scaled_score={self.scaled_score!r}"]
        lines += [f"cluster.{c}={float(v)!r}" for c, v in enumerate(self.per_cluster_mean)]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def silhouette(data, labels, n_clusters: int | None = None) -> QualityReport:
    """Silhouette width of every row.

    For row ``i``, ``a`` is its mean distance to the other members of its
    cluster and ``b`` the smallest mean distance to the members of another
    non-empty cluster; ``s = (b - a) / max(a, b)``. Rows in singleton
    clusters score 0.

    Raises
    ------
    AlgorithmError
        If fewer than two clusters are non-empty or ``labels`` has the
        wrong length.
    """
    x = as_array(data)
    labels = np.asarray(labels, dtype=np.int64)
    n = x.shape[0]
    if labels.shape != (n,):
        raise AlgorithmError(f"assignment has length {labels.shape}, expected {n}")
    if labels.min() < 0:
        raise AlgorithmError("negative cluster index in assignment")
    k = int(labels.max()) + 1 if n_clusters is None else int(n_clusters)
    if labels.max() >= k:
        raise AlgorithmError(f"assignment index outside [0, {k})")
    sizes = np.bincount(labels, minlength=k)
    if (sizes > 0).sum() < 2:
        raise AlgorithmError("silhouette needs at least 2 non-empty clusters")

    sums = kernels.cluster_distance_sums(x, labels, k)
    own = sizes[labels]
    rows = np.arange(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = sums[rows, labels] / (own - 1)
        means = sums / sizes
    means[:, sizes == 0] = np.inf
    means[rows, labels] = np.inf
    b = means.min(axis=1)
    denom = np.maximum(a, b)
    s = np.zeros(n)
    ok = (own > 1) & (denom > 0)
    s[ok] = (b[ok] - a[ok]) / denom[ok]
    np.clip(s, -1.0, 1.0, out=s)

    per_cluster = np.full(k, np.nan)
    nonempty = sizes > 0
    per_cluster[nonempty] = np.bincount(labels, weights=s, minlength=k)[nonempty] / sizes[nonempty]
    return QualityReport(per_point=s, per_cluster_mean=per_cluster, overall=float(s.mean()))


def quality_score(report: QualityReport) -> float:
    """Cluster quality on the -100..100 scale (100 x mean silhouette)."""
    return report.scaled_score
