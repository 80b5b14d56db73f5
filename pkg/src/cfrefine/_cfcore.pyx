# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``cfrefine._kernels_py``.

Same signatures and tie-break rules (first index wins); plain loops over
the per-node arrays, no temporaries.
"""

import numpy as np

cimport numpy as cnp

NAME = "compiled"


def nearest_entry(cnp.int64_t[::1] counts, double[:, ::1] ls, Py_ssize_t size,
                  double[::1] point):
    cdef Py_ssize_t dim = point.shape[0]
    cdef Py_ssize_t i, j, best = 0
    cdef double best_d = np.inf
    cdef double d, diff
    for i in range(size):
        d = 0.0
        for j in range(dim):
            diff = ls[i, j] / counts[i] - point[j]
            d += diff * diff
        if d < best_d:
            best_d = d
            best = i
    return best


def tentative_diameter_sq(long long n, double[::1] ls_row, double[::1] ss_row,
                          double[::1] point):
    cdef Py_ssize_t dim = point.shape[0]
    cdef Py_ssize_t j
    cdef double m = <double>(n + 1)
    cdef double ss_total = 0.0, ls_norm = 0.0, v
    for j in range(dim):
        ss_total += ss_row[j] + point[j] * point[j]
        v = ls_row[j] + point[j]
        ls_norm += v * v
    cdef double d2 = (2.0 * m * ss_total - 2.0 * ls_norm) / (m * (m - 1.0))
    return d2 if d2 > 0.0 else 0.0


def add_point(double[::1] ls_row, double[::1] ss_row, double[::1] point):
    cdef Py_ssize_t dim = point.shape[0]
    cdef Py_ssize_t j
    for j in range(dim):
        ls_row[j] += point[j]
        ss_row[j] += point[j] * point[j]


cdef inline double _centroid_dist_sq(cnp.int64_t[::1] counts, double[:, ::1] ls,
                                     Py_ssize_t a, Py_ssize_t b, Py_ssize_t dim):
    cdef Py_ssize_t j
    cdef double d = 0.0, diff
    for j in range(dim):
        diff = ls[a, j] / counts[a] - ls[b, j] / counts[b]
        d += diff * diff
    return d


def farthest_pair(cnp.int64_t[::1] counts, double[:, ::1] ls, Py_ssize_t size):
    cdef Py_ssize_t dim = ls.shape[1]
    cdef Py_ssize_t i, j, best_i = 0, best_j = 1
    cdef double best_d = -1.0, d
    for i in range(size):
        for j in range(i + 1, size):
            d = _centroid_dist_sq(counts, ls, i, j, dim)
            if d > best_d:
                best_d = d
                best_i = i
                best_j = j
    return best_i, best_j


def closest_pair(cnp.int64_t[::1] counts, double[:, ::1] ls, Py_ssize_t size):
    cdef Py_ssize_t dim = ls.shape[1]
    cdef Py_ssize_t i, j, best_i = 0, best_j = 1
    cdef double best_d = np.inf, d
    for i in range(size):
        for j in range(i + 1, size):
            d = _centroid_dist_sq(counts, ls, i, j, dim)
            if d < best_d:
                best_d = d
                best_i = i
                best_j = j
    return best_i, best_j


def assign_to_seeds(cnp.int64_t[::1] counts, double[:, ::1] ls, Py_ssize_t size,
                    Py_ssize_t seed_a, Py_ssize_t seed_b):
    cdef Py_ssize_t dim = ls.shape[1]
    cdef cnp.ndarray[cnp.int8_t, ndim=1] out = np.empty(size, dtype=np.int8)
    cdef Py_ssize_t i
    cdef double da, db
    for i in range(size):
        da = _centroid_dist_sq(counts, ls, i, seed_a, dim)
        db = _centroid_dist_sq(counts, ls, i, seed_b, dim)
        out[i] = 1 if db < da else 0
    out[seed_a] = 0
    out[seed_b] = 1
    return out
