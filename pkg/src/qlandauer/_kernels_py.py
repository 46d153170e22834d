"""Pure-Python implementations of the scalar hot loops.

These mirror ``_kernels.pyx`` operation for operation so that both backends
produce bitwise identical results.
"""
import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def merge_sorted_comb(q, w, tol):
    """Merge a sorted weighted comb whose neighbouring abscissae are within ``tol``.

    Consecutive points are chained while the gap to the previous point is
    ``<= tol``. Each chain collapses to its probability-weighted mean (plain
    mean if the chain carries zero weight) and summed weight.
    """
    n = len(q)
    out_q = np.empty(n, dtype=np.float64)
    out_w = np.empty(n, dtype=np.float64)
    if n == 0:
        return out_q, out_w
    k = 0
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
    return out_q[:k].copy(), out_w[:k].copy()


def landauer_r_objective(r, d):
    """r (1 - r) ln^2[(1 - r)(d - 1) / r]."""
    lg = math.log((1.0 - r) * (d - 1.0) / r)
    return r * (1.0 - r) * lg * lg


def golden_max_r(d, a, b, tol):
    """Golden-section maximization of the R objective on [a, b].

    Returns ``(r_best, f_best)``; stops once the bracket is no wider than ``tol``.
    """
    h = b - a
    c = a + INV_PHI_SQ * h
    e = a + INV_PHI * h
    fc = landauer_r_objective(c, d)
    fe = landauer_r_objective(e, d)
    while h > tol:
        if fc > fe:
            b = e
            e = c
            fe = fc
            h = INV_PHI * h
            c = a + INV_PHI_SQ * h
            fc = landauer_r_objective(c, d)
        else:
            a = c
            c = e
            fc = fe
            h = INV_PHI * h
            e = a + INV_PHI * h
            fe = landauer_r_objective(e, d)
    if fc > fe:
        return c, fc
    return e, fe
