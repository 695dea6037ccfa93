"""Pure numpy implementations of the hot kernels.

Squared distances are accumulated one coordinate at a time, in index order,
so that they are bitwise identical to the compiled kernels.
"""

import numpy as np

_CHUNK = 256


def _sqdist_to(data, point):
    out = np.zeros(data.shape[0])
    for d in range(data.shape[1]):
        t = data[:, d] - point[d]
        out += t * t
    return out


def _sqdist_block(rows, data):
    out = np.zeros((rows.shape[0], data.shape[0]))
    for d in range(data.shape[1]):
        t = rows[:, d, None] - data[None, :, d]
        out += t * t
    return out


def assign_nearest(data, centers):
    n = data.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    best = _sqdist_to(data, centers[0])
    for c in range(1, centers.shape[0]):
        d2 = _sqdist_to(data, centers[c])
        closer = d2 < best
        labels[closer] = c
        best[closer] = d2[closer]
    return labels, best


def pairwise_sqdist(data):
    n = data.shape[0]
    out = np.empty((n, n))
    for start in range(0, n, _CHUNK):
        out[start:start + _CHUNK] = _sqdist_block(data[start:start + _CHUNK], data)
    return out


def ccia_groups(data, k, target):
    n = data.shape[0]
    d2 = pairwise_sqdist(data)
    removed = np.zeros(n, dtype=bool)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    groups = []
    for _ in range(k):
        left = n - removed.sum()
        if left == 0:
            break
        if left == 1:
            groups.append(np.flatnonzero(~removed))
            removed[:] = True
            continue
        live = ~removed
        masked = np.where(upper & live[:, None] & live[None, :], d2, np.inf)
        a, b = divmod(int(np.argmin(masked)), n)
        members = [a, b]
        removed[a] = removed[b] = True
        gdist = np.minimum(d2[a], d2[b])
        gdist[removed] = np.inf
        while len(members) < target and not removed.all():
            p = int(np.argmin(gdist))
            members.append(p)
            removed[p] = True
            gdist = np.minimum(gdist, d2[p])
            gdist[removed] = np.inf
        groups.append(np.array(members, dtype=np.int64))
    return groups


def cluster_distance_sums(data, labels, k):
    n = data.shape[0]
    onehot = np.zeros((n, k))
    onehot[np.arange(n), labels] = 1.0
    out = np.empty((n, k))
    for start in range(0, n, _CHUNK):
        dist = np.sqrt(_sqdist_block(data[start:start + _CHUNK], data))
        out[start:start + _CHUNK] = dist @ onehot
    return out
