# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled power-iteration and cosine-scan kernels.

Drop-in replacement for fairuse._kernels_numpy; fairuse.kernels picks
whichever is available at import time.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

BACKEND_NAME = "compiled"


def pagerank_power(indptr, indices, Py_ssize_t n, double damping,
                   double tolerance, Py_ssize_t max_iterations):
    """Damped power iteration; see fairuse._kernels_numpy.pagerank_power."""
    cdef cnp.int64_t[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] dst = np.ascontiguousarray(indices, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_arr = np.full(n, 1.0 / n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] y = y_arr
    cdef double base = (1.0 - damping) / n
    cdef double dangle, share, value, total, delta, diff, max_sum_error
    cdef Py_ssize_t i, p, deg, iterations
    cdef bint converged = False

    max_sum_error = 0.0
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        dangle = 0.0
        for i in range(n):
            y[i] = 0.0
        for i in range(n):
            deg = iptr[i + 1] - iptr[i]
            if deg == 0:
                dangle += x[i]
            else:
                share = x[i] / deg
                for p in range(iptr[i], iptr[i + 1]):
                    y[dst[p]] += share
        total = 0.0
        delta = 0.0
        for i in range(n):
            value = base + damping * (y[i] + dangle / n)
            y[i] = value
            total += value
            diff = fabs(value - x[i])
            if diff > delta:
                delta = diff
        if fabs(total - 1.0) > max_sum_error:
            max_sum_error = fabs(total - 1.0)
        x_arr, y_arr = y_arr, x_arr
        x = x_arr
        y = y_arr
        if delta <= tolerance:
            converged = True
            break
    return x_arr, iterations, converged, max_sum_error


def cosine_scores(matrix, query):
    """Dot product of every (unit) row against a (unit) query vector."""
    cdef double[:, ::1] rows = np.ascontiguousarray(matrix, dtype=np.float64)
    cdef double[::1] q = np.ascontiguousarray(query, dtype=np.float64)
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t d = rows.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc
    cdef Py_ssize_t i, j
    for i in range(n):
        acc = 0.0
        for j in range(d):
            acc += rows[i, j] * q[j]
        out[i] = acc
    return out_arr
