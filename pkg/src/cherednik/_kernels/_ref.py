"""Pure-python hypergeometric series kernels, vectorized over the argument.

This module and the compiled `_fast` extension expose the same `hyp_grid`
contract; everything above them (prefactors, branch-point displacement,
argument validation) lives in `cherednik.special`.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError

SERIES_CAP = 10000
SERIES_RTOL = 1e-15


def gauss_series(A: complex, B: complex, C: complex, w, rtol: float = SERIES_RTOL,
                 kmax: int = SERIES_CAP) -> np.ndarray:
    """Sum the defining Gauss series of 2F1(A,B;C;w) for an array of w.

    Stops once every element's latest term has stayed below rtol times its
    partial sum for two consecutive terms (oscillating terms from complex
    parameters can dip below tolerance once without having converged).
    The caller keeps C away from nonpositive integers.
    """
    w = np.asarray(w, dtype=complex)
    term = np.ones_like(w)
    total = np.ones_like(w)
    streak = 0
    for k in range(kmax):
        term = term * ((A + k) * (B + k) / ((C + k) * (k + 1.0))) * w
        total = total + term
        if np.all(np.abs(term) <= rtol * np.abs(total)):
            streak += 1
            if streak >= 2:
                return total
        else:
            streak = 0
    worst = float(np.max(np.abs(term) / np.maximum(np.abs(total), 1e-300)))
    raise ConvergenceError(
        f"hypergeometric series did not converge within {kmax} terms",
        value=total, residual=worst,
    )


def hyp_grid(a: complex, b: complex, c: complex, z: np.ndarray, w_switch: float,
             p1: complex, p2: complex, conj_pair: bool) -> np.ndarray:
    """Evaluate 2F1(a,b;c;z) on a 1-d array of z <= 0.

    Where w = z/(z-1) <= w_switch the Pfaff-transformed series is summed
    directly; elsewhere the two-term expansion in 1/(1-z) is used, with the
    Gamma-quotient prefactors p1, p2 supplied by the caller.  conj_pair
    marks b == conj(a) with real c (and z real), where the second expansion
    term is the conjugate of the first and is not summed separately.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    z = np.asarray(z, dtype=float)
    out = np.empty(z.shape, dtype=complex)
    w = z / (z - 1.0)
    L = np.log1p(-z)  # log(1-z) >= 0, exact near z = 0
    near = w <= w_switch
    if near.any():
        out[near] = np.exp(-a * L[near]) * gauss_series(a, c - b, c, w[near])
    far = ~near
    if far.any():
        u = 1.0 / (1.0 - z[far])
        t1 = p1 * np.exp(-a * L[far]) * gauss_series(a, c - b, a - b + 1.0, u)
        if conj_pair:
            out[far] = t1 + np.conj(t1)
        else:
            t2 = p2 * np.exp(-b * L[far]) * gauss_series(b, c - a, b - a + 1.0, u)
            out[far] = t1 + t2
    return out
