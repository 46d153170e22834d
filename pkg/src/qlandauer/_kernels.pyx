# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar hot loops; see ``_kernels_py`` for the reference twin."""
from libc.math cimport log, sqrt

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double INV_PHI = (sqrt(5.0) - 1.0) / 2.0
cdef double INV_PHI_SQ = (3.0 - sqrt(5.0)) / 2.0


def merge_sorted_comb(const double[::1] q, const double[::1] w, double tol):
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t i, k = 0, count
    cdef double wsum, qw, qsum, prev, qi
    out_q_arr = np.empty(n, dtype=np.float64)
    out_w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out_q = out_q_arr
    cdef double[::1] out_w = out_w_arr
    if n == 0:
        return out_q_arr, out_w_arr
    wsum = w[0]
    qw = q[0] * w[0]
    qsum = q[0]
    count = 1
    prev = q[0]
    for i in range(1, n):
        qi = q[i]
        if qi - prev <= tol:
            wsum += w[i]
            qw += qi * w[i]
            qsum += qi
            count += 1
        else:
            out_q[k] = qw / wsum if wsum > 0.0 else qsum / count
            out_w[k] = wsum
            k += 1
            wsum = w[i]
            qw = qi * w[i]
            qsum = qi
            count = 1
        prev = qi
    out_q[k] = qw / wsum if wsum > 0.0 else qsum / count
    out_w[k] = wsum
    k += 1
    return out_q_arr[:k].copy(), out_w_arr[:k].copy()


cdef inline double _objective(double r, double d) nogil:
    cdef double lg = log((1.0 - r) * (d - 1.0) / r)
    return r * (1.0 - r) * lg * lg


def landauer_r_objective(double r, double d):
    return _objective(r, d)


def golden_max_r(double d, double a, double b, double tol):
    cdef double h = b - a
    cdef double c = a + INV_PHI_SQ * h
    cdef double e = a + INV_PHI * h
    cdef double fc = _objective(c, d)
    cdef double fe = _objective(e, d)
    while h > tol:
        if fc > fe:
            b = e
            e = c
            fe = fc
            h = INV_PHI * h
            c = a + INV_PHI_SQ * h
            fc = _objective(c, d)
        else:
            a = c
            c = e
            fc = fe
            h = INV_PHI * h
            e = a + INV_PHI * h
            fe = _objective(e, d)
    if fc > fe:
        return c, fc
    return e, fe
