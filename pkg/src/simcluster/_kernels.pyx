# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled margin kernels; see _kernels_py for the contract."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def own_margin(const double[:, ::1] P, const double[:, ::1] S):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t m = P.shape[1]
    idx_arr = np.empty(n, dtype=np.int64)
    margin_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] idx = idx_arr
    cdef double[::1] margin = margin_arr
    cdef Py_ssize_t r, j, best
    cdef double pbest, d, mn
    cdef bint first
    with nogil:
        for r in range(n):
            best = 0
            pbest = P[r, 0]
            for j in range(1, m):
                if P[r, j] > pbest:
                    pbest = P[r, j]
                    best = j
            first = True
            mn = 0.0
            for j in range(m):
                if j == best:
                    continue
                d = (pbest - P[r, j]) / S[best, j]
                if first or d < mn:
                    mn = d
                    first = False
            idx[r] = best
            margin[r] = mn
    return idx_arr, margin_arr


def all_margins(const double[:, ::1] P, const double[:, ::1] S):
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t m = P.shape[1]
    out_arr = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, j
    cdef double d, mn
    cdef bint first
    with nogil:
        for r in range(n):
            for i in range(m):
                first = True
                mn = 0.0
                for j in range(m):
                    if j == i:
                        continue
                    d = (P[r, i] - P[r, j]) / S[i, j]
                    if first or d < mn:
                        mn = d
                        first = False
                out[r, i] = mn
    return out_arr
