# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar loops for the hypergeometric series kernels.

Mirrors the semantics of `_ref.hyp_grid`; per-element early stopping makes
this the hot path for eigenfunction matrices on large grids.
"""

import numpy as np

from ..errors import ConvergenceError

from libc.math cimport log1p

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)
    double complex conj(double complex)

cdef int _SERIES_CAP = 10000
cdef double _SERIES_RTOL = 1e-15


cdef int _series(double complex A, double complex B, double complex C,
                 double w, double complex* out, double* resid) nogil:
    # returns 0 on convergence, 1 if the term cap was hit
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef int streak = 0
    cdef int k
    cdef double dk, scale
    for k in range(_SERIES_CAP):
        dk = k
        term = term * ((A + dk) * (B + dk) / ((C + dk) * (dk + 1.0))) * w
        total = total + term
        if cabs(term) <= _SERIES_RTOL * cabs(total):
            streak += 1
            if streak >= 2:
                out[0] = total
                resid[0] = 0.0
                return 0
        else:
            streak = 0
    out[0] = total
    scale = cabs(total)
    if scale < 1e-300:
        scale = 1e-300
    resid[0] = cabs(term) / scale
    return 1


def hyp_grid(a, b, c, z, double w_switch, p1, p2, bint conj_pair):
    """Evaluate 2F1(a,b;c;z) on a 1-d array of z <= 0 (see _ref.hyp_grid)."""
    cdef double complex ca = a
    cdef double complex cb = b
    cdef double complex cc = c
    cdef double complex cp1 = p1
    cdef double complex cp2 = p2
    z_arr = np.ascontiguousarray(z, dtype=np.float64)
    out_arr = np.empty(z_arr.shape[0], dtype=np.complex128)
    cdef double[::1] zv = z_arr
    cdef double complex[::1] ov = out_arr
    cdef Py_ssize_t i, n = zv.shape[0]
    cdef double zi, w, L, u, resid
    cdef double worst = 0.0
    cdef double complex val, t1, t2
    cdef int bad = 0
    with nogil:
        for i in range(n):
            zi = zv[i]
            w = zi / (zi - 1.0)
            L = log1p(-zi)
            if w <= w_switch:
                bad |= _series(ca, cc - cb, cc, w, &val, &resid)
                if resid > worst:
                    worst = resid
                val = cexp(-ca * L) * val
            else:
                u = 1.0 / (1.0 - zi)
                bad |= _series(ca, cc - cb, ca - cb + 1.0, u, &t1, &resid)
                if resid > worst:
                    worst = resid
                t1 = cp1 * cexp(-ca * L) * t1
                if conj_pair:
                    val = t1 + conj(t1)
                else:
                    bad |= _series(cb, cc - ca, cb - ca + 1.0, u, &t2, &resid)
                    if resid > worst:
                        worst = resid
                    t2 = cp2 * cexp(-cb * L) * t2
                    val = t1 + t2
            ov[i] = val
    if bad:
        raise ConvergenceError(
            f"hypergeometric series did not converge within {_SERIES_CAP} terms",
            value=out_arr, residual=worst,
        )
    return out_arr
