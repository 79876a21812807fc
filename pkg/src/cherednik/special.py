"""Special functions: log-Gamma, the Gauss hypergeometric on (-inf, 0],
Jacobi functions, the first-order-operator eigenfunctions, the c-function,
the hyperbolic weight, and the Plancherel densities.

Everything here is a pure function of its arguments.  Array arguments are
accepted wherever a grid evaluation makes sense; scalars in, scalars out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import loggamma as _loggamma

from . import _kernels
from .errors import ParameterError, PoleError
from .params import Parameters

__all__ = [
    "log_gamma",
    "hyp2f1",
    "jacobi_phi",
    "opdam_g",
    "opdam_rows",
    "CFunctionValue",
    "c_function",
    "abs_c_inverse_sq",
    "weight",
    "PlancherelDensities",
    "plancherel_densities",
    "density_tables",
]

ArrayLike = Union[float, complex, np.ndarray]

# Distance of a-b to the nearest integer below which the two-term expansion
# is evaluated at displaced parameters instead (its Gamma prefactors blow up
# on integer a-b while the function itself stays finite).
_DEGENERATE_TOL = 2e-4
_DISPLACEMENT = 4e-4

# Both series branches lose significance like exp(loss) with
# loss = |Im(a-b)| * min(sqrt(w), (1-w)/4); past this many nats the result
# is recomputed in high precision.
_RESCUE_NATS = 13.5


def log_gamma(w: ArrayLike) -> ArrayLike:
    """Principal branch of log Gamma(w); poles raise instead of returning inf."""
    w = np.asarray(w)
    real_axis = np.isrealobj(w) | (np.imag(w) == 0)
    at_pole = real_axis & (np.real(w) <= 0) & (np.real(w) == np.round(np.real(w)))
    if np.any(at_pole):
        raise PoleError("log_gamma pole at nonpositive integer argument")
    out = _loggamma(np.asarray(w, dtype=complex))
    return complex(out) if out.ndim == 0 else out


def _exp_or_zero(logval: complex) -> complex:
    # A Gamma pole in the denominator sends the log to real part -inf (or to
    # nan via inf - inf); either way the corresponding expansion term is 0.
    if math.isfinite(logval.real) and math.isfinite(logval.imag):
        return complex(np.exp(logval))
    if logval.real == math.inf:
        raise PoleError("hypergeometric connection prefactor at a Gamma pole")
    return 0j


def _switch_point(m: float) -> float:
    # Pfaff loses ~exp(m*sqrt(w)) of significance, the two-term expansion
    # ~exp(m*(1-w)/4); the branch point balances them, clamped to [the
    # balance value 0.0557, 0.5].
    if m <= 0.0:
        return 0.5
    return max(0.0557, min(0.5, (12.0 / m) ** 2))


def _hyp_dispatch(a: complex, b: complex, c: complex, z: np.ndarray) -> np.ndarray:
    m = abs((a - b).imag)
    wsw = _switch_point(m)
    conj_pair = abs(b - a.conjugate()) <= 1e-14 * (1.0 + abs(a)) and c.imag == 0.0
    p1 = 0j
    p2 = 0j
    if np.any(z / (z - 1.0) > wsw):
        lg_c = _loggamma(complex(c))
        p1 = _exp_or_zero(lg_c + _loggamma(b - a) - _loggamma(complex(b)) - _loggamma(c - a))
        if conj_pair:
            p2 = p1.conjugate()
        else:
            p2 = _exp_or_zero(lg_c + _loggamma(a - b) - _loggamma(complex(a)) - _loggamma(c - b))
    return _kernels.hyp_grid(a, b, c, z, wsw, p1, p2, conj_pair)


def _mp_hyp2f1(a: complex, b: complex, c: complex, z: float) -> complex:
    import mpmath as mp

    with mp.workdps(30):
        return complex(mp.hyp2f1(mp.mpc(a), mp.mpc(b), mp.mpc(c), mp.mpf(z)))


def hyp2f1(a: complex, b: complex, c: complex, z: ArrayLike) -> ArrayLike:
    """Gauss hypergeometric 2F1(a,b;c;z) for real z <= 0.

    The argument is mapped to w = z/(z-1) in [0,1); small w is summed by the
    Pfaff-transformed series, large w by the two-term expansion in 1/(1-z).
    Near-integer a-b (where that expansion degenerates) is handled by
    averaging over displaced parameter pairs, and parameter regimes where
    both branches lose too many digits fall back to high-precision summation.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    if c.imag != 0.0 or c.real <= 0.0:
        raise ParameterError(f"hyp2f1 requires real c > 0, got {c}")
    z_in = np.asarray(z, dtype=float)
    scalar = z_in.ndim == 0
    zv = np.atleast_1d(z_in).reshape(-1)
    if zv.size and float(np.max(zv)) > 0.0:
        raise ParameterError("hyp2f1 is only defined here for z <= 0")

    d = a - b
    near_int = abs(d.imag) < 0.5 and abs(d - round(d.real)) < _DEGENERATE_TOL
    if near_int:
        # displace a -> a + i*eps/2, b -> b - i*eps/2 (a+b fixed) and combine
        # so the O(eps^2) error cancels, leaving O(eps^4)
        e = _DISPLACEMENT
        vals = [
            _hyp_dispatch(a + 0.5j * s, b - 0.5j * s, c, zv)
            for s in (e, -e, 2 * e, -2 * e)
        ]
        out = (2.0 / 3.0) * (vals[0] + vals[1]) - (1.0 / 6.0) * (vals[2] + vals[3])
    else:
        out = _hyp_dispatch(a, b, c, zv)
        m = abs(d.imag)
        if m > 0.0:
            w = zv / (zv - 1.0)
            loss = m * np.minimum(np.sqrt(w), (1.0 - w) / 4.0)
            rescue = loss > _RESCUE_NATS
            if rescue.any():
                out[rescue] = [_mp_hyp2f1(a, b, c, zz) for zz in zv[rescue]]
    if scalar:
        return complex(out[0])
    return out.reshape(z_in.shape)


def jacobi_phi(params: Parameters, lam: complex, x: ArrayLike) -> ArrayLike:
    """Jacobi function: 2F1((rho+i*lam)/2, (rho-i*lam)/2; alpha+1; -sinh^2 x)."""
    a = 0.5 * (params.rho + 1j * lam)
    b = 0.5 * (params.rho - 1j * lam)
    x = np.asarray(x, dtype=float)
    z = -np.square(np.sinh(x))
    return hyp2f1(a, b, params.alpha + 1.0, z)


def _opdam_parts(params: Parameters, lam: complex, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # even part phi and the odd correction; their sum is the eigenfunction
    phi = jacobi_phi(params, lam, x)
    phi_shift = jacobi_phi(params.shifted(), lam, x)
    # The lambda-dependent factor is forced by the eigenvalue equation
    # together with the contiguous identity
    #   d(phi)/dx = -((rho^2+lam^2)/(4(alpha+1))) sinh(2x) phi_shift:
    # a lambda-independent rho/(4(alpha+1)) cannot satisfy T G = i*lam*G.
    fac = (params.rho + 1j * lam) / (4.0 * (params.alpha + 1.0))
    return phi, fac * np.sinh(2.0 * x) * phi_shift


def opdam_g(params: Parameters, lam: complex, x: ArrayLike) -> ArrayLike:
    """Eigenfunction of the first-order difference-differential operator with
    eigenvalue i*lam, normalized to 1 at the origin."""
    x_in = np.asarray(x, dtype=float)
    phi, odd = _opdam_parts(params, lam, np.atleast_1d(x_in))
    out = phi + odd
    return complex(out[0]) if x_in.ndim == 0 else out


def opdam_rows(params: Parameters, lam: complex, x_sym: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(G_lam(x), G_lam(-x)) on a symmetric grid, sharing series work.

    The hypergeometric argument -sinh^2 x is even in x, so both rows follow
    from evaluations on the nonnegative half of the grid alone.
    """
    x_sym = np.asarray(x_sym, dtype=float)
    n = x_sym.size
    half = n // 2
    if n % 2 == 0 or not np.array_equal(x_sym[::-1], -x_sym):
        raise ParameterError("opdam_rows requires a symmetric grid with 0 as a node")
    xp = x_sym[half:]
    phi, odd = _opdam_parts(params, lam, xp)
    g_pos = phi + odd
    g_neg = phi - odd
    row = np.concatenate([g_neg[:0:-1], g_pos])
    row_reflected = np.concatenate([g_pos[:0:-1], g_neg])
    return row, row_reflected


@dataclass(frozen=True)
class CFunctionValue:
    value: complex
    abs_sq_inverse: float


def _log_c(params: Parameters, lam: complex) -> complex:
    il = 1j * lam
    return (
        _loggamma(complex(params.alpha + 1.0))
        + (params.rho - il) * math.log(2.0)
        + _loggamma(il)
        - _loggamma(0.5 * (params.rho + il))
        - _loggamma(0.5 * (params.alpha - params.beta + 1.0 + il))
    )


def c_function(params: Parameters, lam: complex) -> CFunctionValue:
    """Harish-Chandra c-function (Gamma-quotient form with the 2^(rho-i*lam)
    prefactor), plus |c|^(-2) computed in log space so large lam cannot
    overflow."""
    if lam == 0:
        raise PoleError("c_function has a pole at lam = 0")
    lc = _log_c(params, complex(lam))
    return CFunctionValue(complex(np.exp(lc)), float(np.exp(-2.0 * lc.real)))


def abs_c_inverse_sq(params: Parameters, lam: ArrayLike) -> ArrayLike:
    """|c(lam)|^(-2) for real lam, vectorized; continuous extension 0 at 0."""
    lam_in = np.asarray(lam, dtype=float)
    lv = np.atleast_1d(lam_in)
    out = np.zeros(lv.shape)
    nz = lv != 0.0
    if nz.any():
        il = 1j * lv[nz]
        re_lc = (
            _loggamma(complex(params.alpha + 1.0)).real
            + params.rho * math.log(2.0)
            + np.real(_loggamma(il))
            - np.real(_loggamma(0.5 * (params.rho + il)))
            - np.real(_loggamma(0.5 * (params.alpha - params.beta + 1.0 + il)))
        )
        out[nz] = np.exp(-2.0 * re_lc)
    return float(out[0]) if lam_in.ndim == 0 else out


def weight(params: Parameters, x: ArrayLike) -> ArrayLike:
    """Hyperbolic weight (sinh|x|)^(2*alpha+1) (cosh|x|)^(2*beta+1)."""
    ax = np.abs(np.asarray(x, dtype=float))
    out = np.power(np.sinh(ax), 2.0 * params.alpha + 1.0) * np.power(
        np.cosh(ax), 2.0 * params.beta + 1.0
    )
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PlancherelDensities:
    symmetric: float
    asymmetric: complex
    asymmetric_modulus: float


def density_tables(params: Parameters, lam: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(symmetric, asymmetric, modulus) Plancherel densities on a real grid.

    symmetric = 4^rho |c|^(-2) / (8 pi) on [0, inf);
    asymmetric = 4^rho (1 - rho/(i*lam)) |c|^(-2) / (8 pi) on the line.

    The 4^rho compensates the weight convention: the c-function quotient
    (the one with the 2^(rho - i*lam) factor) belongs to the doubled weight
    (2 sinh x)^(2a+1) (2 cosh x)^(2b+1), while the measure here carries plain
    sinh/cosh powers.  Without it the inversion and both energy identities
    fail by exactly 4^rho (and the half-line form by a further 2) -- checked
    against the Fourier limit a = b = -1/2 and numerically across rho.

    All densities vanish at lam = 0 by continuous extension (|c|^(-2) is
    O(lam^2) there), so no node needs special casing.
    """
    lam = np.asarray(lam, dtype=float)
    icsq = abs_c_inverse_sq(params, lam) * 4.0 ** params.rho
    sym = icsq / (8.0 * math.pi)
    factor = np.ones(lam.shape, dtype=complex)
    nz = lam != 0.0
    # 1 - rho/(i*lam) = 1 + i*rho/lam
    factor[nz] += 1j * params.rho / lam[nz]
    asym = factor * icsq / (8.0 * math.pi)
    asym[~nz] = 0.0
    return sym, asym, np.abs(asym)


def plancherel_densities(params: Parameters, lam: float) -> PlancherelDensities:
    sym, asym, mod = density_tables(params, np.atleast_1d(float(lam)))
    return PlancherelDensities(float(sym[0]), complex(asym[0]), float(mod[0]))
