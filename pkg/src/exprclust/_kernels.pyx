# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Must stay bitwise compatible with ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()


cdef inline double _sqdist(const double[:, ::1] a, Py_ssize_t i,
                           const double[:, ::1] b, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t d
    cdef double s = 0.0, t
    for d in range(a.shape[1]):
        t = a[i, d] - b[j, d]
        s += t * t
    return s


def assign_nearest(const double[:, ::1] data, const double[:, ::1] centers):
    cdef Py_ssize_t n = data.shape[0], k = centers.shape[0], i, c
    cdef double best, d2
    cdef Py_ssize_t arg
    labels_arr = np.empty(n, dtype=np.int64)
    dist_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] dist = dist_arr
    with nogil:
        for i in range(n):
            best = _sqdist(data, i, centers, 0)
            arg = 0
            for c in range(1, k):
                d2 = _sqdist(data, i, centers, c)
                if d2 < best:
                    best = d2
                    arg = c
            labels[i] = arg
            dist[i] = best
    return labels_arr, dist_arr


def pairwise_sqdist(const double[:, ::1] data):
    cdef Py_ssize_t n = data.shape[0], i, j
    cdef double s
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i, i] = 0.0
            for j in range(i + 1, n):
                s = _sqdist(data, i, data, j)
                out[i, j] = s
                out[j, i] = s
    return out_arr


def ccia_groups(const double[:, ::1] data, Py_ssize_t k, Py_ssize_t target):
    cdef Py_ssize_t n = data.shape[0], i, j, a, b, p, g, left, size
    cdef double best, v
    d2_arr = pairwise_sqdist(data)
    cdef const double[:, ::1] d2 = d2_arr
    removed_arr = np.zeros(n, dtype=np.uint8)
    gdist_arr = np.empty(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] removed = removed_arr
    cdef double[::1] gdist = gdist_arr
    cdef cnp.int64_t[::1] mv
    groups = []
    left = n
    for g in range(k):
        if left == 0:
            break
        if left == 1:
            for i in range(n):
                if not removed[i]:
                    removed[i] = 1
                    groups.append(np.array([i], dtype=np.int64))
            left = 0
            continue
        members_arr = np.empty(max(target, 2), dtype=np.int64)
        mv = members_arr
        with nogil:
            best = INFINITY
            a = -1
            b = -1
            for i in range(n):
                if removed[i]:
                    continue
                for j in range(i + 1, n):
                    if removed[j]:
                        continue
                    if d2[i, j] < best or a < 0:
                        best = d2[i, j]
                        a = i
                        b = j
            removed[a] = 1
            removed[b] = 1
            left -= 2
            for i in range(n):
                if removed[i]:
                    gdist[i] = INFINITY
                else:
                    gdist[i] = d2[a, i] if d2[a, i] < d2[b, i] else d2[b, i]
        size = 2
        mv[0] = a
        mv[1] = b
        while size < target and left > 0:
            with nogil:
                best = INFINITY
                p = -1
                for i in range(n):
                    if not removed[i] and (gdist[i] < best or p < 0):
                        best = gdist[i]
                        p = i
                removed[p] = 1
                left -= 1
                for i in range(n):
                    if removed[i]:
                        gdist[i] = INFINITY
                    else:
                        v = d2[p, i]
                        if v < gdist[i]:
                            gdist[i] = v
            mv[size] = p
            size += 1
        groups.append(members_arr[:size].copy())
    return groups


def cluster_distance_sums(const double[:, ::1] data, const cnp.int64_t[::1] labels, Py_ssize_t k):
    cdef Py_ssize_t n = data.shape[0], i, j
    cdef double d
    out_arr = np.zeros((n, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d = sqrt(_sqdist(data, i, data, j))
                out[i, labels[j]] += d
                out[j, labels[i]] += d
    return out_arr
