"""Deterministic CCIA seeding.

Groups are grown one at a time: the closest remaining pair of rows founds a
group, which then absorbs the remaining row nearest to any of its members
until it holds ``ceil(0.75 * n / K)`` rows. Group means are the centroids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AlgorithmError
from .matrix_io import as_array


@dataclass(frozen=True)
class SeedGroups:
    groups: tuple[np.ndarray, ...]

    @property
    def consumed(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def k(self) -> int:
        return len(self.groups)


def group_target(n: int, k: int) -> int:
    """``ceil(0.75 * n / k)`` in exact integer arithmetic."""
    return -(-3 * n // (4 * k))


def ccia_groups(data, k: int) -> SeedGroups:
    x = as_array(data)
    n = x.shape[0]
    if k < 1:
        raise AlgorithmError(f"K must be at least 1, got {k}")
    if n < 2 * k:
        raise AlgorithmError(f"CCIA needs n >= 2K, got n={n}, K={k}")
    groups = kernels.ccia_groups(x, k, group_target(n, k))
    if len(groups) < k:
        raise AlgorithmError(f"pool exhausted after {len(groups)} of {k} groups")
    return SeedGroups(tuple(groups))


def ccia_seed(data, k: int) -> np.ndarray:
    """Initial centroids, one per group, in group creation order."""
    x = as_array(data)
    seeds = ccia_groups(x, k)
    return np.vstack([x[g].mean(axis=0) for g in seeds.groups])
