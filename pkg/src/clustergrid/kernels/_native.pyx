# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Hot loops behind the clustering pipeline: pairwise distances, nearest-center
assignment, per-cluster distance sums (silhouette), and the Lance-Williams
merge loop. Semantics must match kernels._py exactly; see that module for the
contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

BACKEND_NAME = "native"

LINKAGE_SINGLE = 0
LINKAGE_COMPLETE = 1
LINKAGE_AVERAGE = 2
LINKAGE_WARD = 3


def pairwise_sq_dists(cnp.ndarray x_arr):
    cdef const double[:, ::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff
    with nogil:
        for i in range(n):
            out[i, i] = 0.0
            for j in range(i + 1, n):
                acc = 0.0
                for m in range(d):
                    diff = x[i, m] - x[j, m]
                    acc += diff * diff
                out[i, j] = acc
                out[j, i] = acc
    return out_arr


def assign_nearest(cnp.ndarray x_arr, cnp.ndarray centers_arr):
    cdef const double[:, ::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef const double[:, ::1] c = np.ascontiguousarray(centers_arr, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], k = c.shape[0], d = x.shape[1]
    labels_arr = np.empty(n, dtype=np.int64)
    best_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] best = best_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, b
    cdef Py_ssize_t bj
    with nogil:
        for i in range(n):
            b = INFINITY
            bj = 0
            for j in range(k):
                acc = 0.0
                for m in range(d):
                    diff = x[i, m] - c[j, m]
                    acc += diff * diff
                if acc < b:
                    b = acc
                    bj = j
            labels[i] = bj
            best[i] = b
    return labels_arr, best_arr


def dist_sums_by_cluster(cnp.ndarray x_arr, cnp.ndarray labels_arr, int k):
    cdef const double[:, ::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef const long long[::1] labels = np.ascontiguousarray(labels_arr, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    out_arr = np.zeros((n, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, m
    cdef double acc, diff, dist
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for m in range(d):
                    diff = x[i, m] - x[j, m]
                    acc += diff * diff
                dist = sqrt(acc)
                out[i, labels[j]] += dist
                out[j, labels[i]] += dist
    return out_arr


def lance_williams_merge(cnp.ndarray dist_arr, int linkage, int k):
    cdef Py_ssize_t n = dist_arr.shape[0]
    work_arr = dist_arr.astype(np.float64, copy=True)
    cdef double[:, ::1] work = work_arr
    sizes_arr = np.ones(n, dtype=np.int64)
    ids_arr = np.arange(n, dtype=np.int64)
    heights_arr = np.empty(n - k, dtype=np.float64)
    cdef long long[::1] sizes = sizes_arr
    cdef long long[::1] ids = ids_arr
    cdef double[::1] heights = heights_arr
    cdef Py_ssize_t i, j, a, b, c, m
    cdef double best, h, dac, dbc, merged
    cdef double na, nb, nc

    with nogil:
        for i in range(n):
            work[i, i] = INFINITY
            for j in range(i):
                work[i, j] = INFINITY

        for m in range(n - k):
            best = INFINITY
            a = 0
            b = 0
            for i in range(n):
                for j in range(i + 1, n):
                    if work[i, j] < best:
                        best = work[i, j]
                        a = i
                        b = j
            h = best
            heights[m] = h
            na = <double> sizes[a]
            nb = <double> sizes[b]
            for c in range(n):
                if c == a or c == b:
                    continue
                dac = work[c, a] if c < a else work[a, c]
                dbc = work[c, b] if c < b else work[b, c]
                if dac == INFINITY or dbc == INFINITY:
                    continue
                if linkage == 0:
                    merged = dac if dac < dbc else dbc
                elif linkage == 1:
                    merged = dac if dac > dbc else dbc
                elif linkage == 2:
                    merged = (na * dac + nb * dbc) / (na + nb)
                else:
                    nc = <double> sizes[c]
                    merged = ((na + nc) * dac + (nb + nc) * dbc - nc * h) / (na + nb + nc)
                if c < a:
                    work[c, a] = merged
                else:
                    work[a, c] = merged
            for c in range(n):
                work[b, c] = INFINITY
                work[c, b] = INFINITY
            sizes[a] = sizes[a] + sizes[b]
            for c in range(n):
                if ids[c] == b:
                    ids[c] = a

    return ids_arr, heights_arr
