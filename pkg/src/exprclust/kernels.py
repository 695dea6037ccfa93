"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when the
``EXPRCLUST_PURE_PYTHON`` environment variable is set to a non-empty value,
the numpy fallback is used. Both produce bitwise-identical squared
distances, assignments and CCIA groups.
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("EXPRCLUST_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def assign_nearest(data, centers):
    """Index of the nearest center per row (lowest index on ties) and the squared distance."""
    return _impl.assign_nearest(_c(data), _c(centers))


def pairwise_sqdist(data):
    return _impl.pairwise_sqdist(_c(data))


def ccia_groups(data, k, target):
    return _impl.ccia_groups(_c(data), int(k), int(target))


def cluster_distance_sums(data, labels, k):
    """n x k matrix: summed Euclidean distance from each row to the members of each cluster."""
    return _impl.cluster_distance_sums(_c(data), np.ascontiguousarray(labels, dtype=np.int64), int(k))
