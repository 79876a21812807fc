"""Support-radius estimators and exponential-type fitting.

The spectral route reads the support radius of g off the growth of its
4n-th moment roots against the modulus density; the operator route reads
the same number off Laplacian-power norms of the spatial function.  Both
report the whole sequence, so flattening (or its absence) can be audited
instead of trusted.  The exponential-type fit is the growth-rate shadow of
the same statement up the imaginary axis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .errors import EdgeDecayWarning, ParameterError, ToleranceError
from .grids import trapezoid_weights
from .model import GridFunction, SpectralFunction, SpectralGrid
from .operators import laplacian_operator
from .params import Parameters
from .special import density_tables
from .transform import (
    _mu_weights,
    default_spectral_grid,
    forward,
    forward_function,
    spatial_norm,
    spectral_moment,
)

__all__ = [
    "RadiusReport",
    "spectral_radius",
    "operator_radius",
    "exponential_type",
    "MembershipReport",
    "pw_membership",
]

# A normalized moment root that ends up this close to the grid edge while
# still climbing reads as unbounded support, not as a resolved radius.
_EDGE_FRACTION = 0.75
_CLIMB_REL = 0.02
# Last-cell share of the top moment above which the estimate is refused
# (unless the divergence flag already explains the edge concentration).
_TAIL_FRACTION = 0.25
# |Hf(i eta)| below this cannot carry a least-squares log fit.
_MAG_FLOOR = 1e-290
# Quadratic-over-linear log-variation above which no finite type is
# reported.  A pure quadratic log-growth over [a, b] lands at span/(a+b)
# (0.5 for the default window) independent of its coefficient, while
# compactly supported data stays under ~0.25 even with strong power-law
# drag from the density; 0.35 separates the two.
_CURVE_REL = 0.35
# Integrand share at the grid edge above which a weighted norm is reported
# as a truncation rather than a membership certificate.
_EDGE_SHARE = 1e-5
# Transform values below this relative size are quadrature floor, not data:
# forward transforms of functions without compact support converge only
# like 1/(grid extent) pointwise, which bottoms out near 5e-4 of the peak
# on the default grids.  Moment grids are clipped to the live support this
# defines.
_LIVE_REL = 2e-3
# A moment integrand still growing at the spectral edge with at least this
# share of its mass in the outer cells reads as a divergent integral.  The
# clipped grids keep amplified floor noise well under this; genuinely
# divergent tails (a power law times lam^{4n}) carry several times more.
_TAIL_MASS = 0.05


@dataclass(frozen=True)
class RadiusReport:
    """Moment sequence behind a support-radius estimate.

    moment_sequence holds (n, r_n) with r_n the 4n-th (spectral route) or
    2n-th (operator route) moment root as computed; normalized_sequence
    divides the total mass out first, turning each entry into a power mean
    of |lambda| -- bounded by the support radius and nondecreasing in n,
    which is the form the flatness and divergence checks read.
    """

    moment_sequence: Tuple[Tuple[int, float], ...]
    normalized_sequence: Tuple[Tuple[int, float], ...]
    estimate: float
    diverging: bool
    diagnostics: str


def _zero_report(n_max: int) -> RadiusReport:
    zeros = tuple((n, 0.0) for n in range(1, n_max + 1))
    return RadiusReport(zeros, zeros, 0.0, False, "input is identically zero")


def _laplacian_values(params: Parameters, f: GridFunction, n: int,
                      h: float) -> np.ndarray:
    """L^n f at the grid nodes, zeroed inside the stencil reach of the edge.

    The interpolant ends at the grid edge; differencing across its cutoff
    would manufacture a jump there, and the e^{2 rho x} growth of the
    measure would then hand that jump every norm downstream.
    """
    vals = laplacian_operator(f, params, h, n)(f.grid.nodes)
    reach = (4 * n + 2) * h + 2.0 * f.grid.spacing
    edge = np.abs(f.grid.nodes) > f.grid.half_width - reach
    return np.where(edge, 0.0, vals)


def _forward_quiet(params: Parameters, f: GridFunction,
                   sgrid: SpectralGrid) -> SpectralFunction:
    # the moment routes are edge-weighted by construction and clip to the
    # live support, so the critical-decay warning carries no news here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EdgeDecayWarning)
        return forward_function(params, f, sgrid)


def _matched_spectral_grid(params: Parameters,
                           f: GridFunction) -> SpectralGrid:
    """The default spectral grid clipped to where Hf lives above the
    quadrature floor.

    Moments carry a lam^{4n} factor, so grid cells beyond the data's live
    support contribute amplified floor noise and nothing else; clipping
    them is what keeps high-order moments meaningful.
    """
    sgrid = default_spectral_grid()
    hf = _forward_quiet(params, f, sgrid)
    hfr = _forward_quiet(params, f.reflected(), sgrid)
    mag = np.maximum(np.abs(hf.values), np.abs(hfr.values))
    peak = float(np.max(mag))
    if peak == 0.0:
        return sgrid
    lam = sgrid.real_nodes
    live = np.abs(lam[mag > _LIVE_REL * peak])
    if live.size == 0:
        return sgrid
    extent = float(live.max()) + 2.0 * sgrid.spacing
    if extent >= sgrid.lambda_max:
        return sgrid
    points = 2 * int(math.ceil(extent / 0.05)) + 1
    return SpectralGrid.symmetric(extent, points)


def _moment_table(params: Parameters, f: GridFunction,
                  n_top: int) -> list:
    """(n, 4n-th spectral moment) for n = 0..n_top off one transform pair.

    An entry is math.inf when its integrand is still growing at the grid
    edge while carrying non-negligible tail mass -- a moment integral that
    no grid extension would converge -- or when the last cell alone
    dominates it.
    """
    sgrid = _matched_spectral_grid(params, f)
    hf = _forward_quiet(params, f, sgrid)
    hfr = _forward_quiet(params, f.reflected(), sgrid)
    lam = sgrid.real_nodes
    sym, _, _ = density_tables(params, lam)
    half = int(np.searchsorted(lam, 0.0))
    lam_pos = lam[half:]
    base = ((np.abs(hf.values[half:]) ** 2 + np.abs(hfr.values[half:]) ** 2)
            * sym[half:] * trapezoid_weights(lam_pos))
    k = max(2, lam_pos.size // 20)
    out = []
    for n in range(0, n_top + 1):
        terms = lam_pos ** (4 * n) * base
        total = float(np.sum(terms))
        if total > 0.0 and n > 0:
            outer = float(np.sum(terms[-k:]))
            inner = float(np.sum(terms[-2 * k:-k]))
            growing = outer >= inner and outer > _TAIL_MASS * total
            if growing or float(terms[-1]) > _TAIL_FRACTION * total:
                out.append((n, math.inf))
                continue
        out.append((n, total))
    return out


def spectral_radius(params: Parameters, g: SpectralFunction,
                    n_max: int = 64) -> RadiusReport:
    """Support radius of g from the roots
    r_n = (integral |lam|^{4n} |g|^2 dnu~)^{1/(4n)}.

    For g supported in [-R, R] the normalized roots climb to R and flatten
    there; the truncation at n_max costs an undershoot of order
    R log(n_max)/n_max from the shape of |g| near its support edge.  The
    moments run in log space -- the raw integrand leaves float range long
    before n = 64.

    diverging is set when the top root sits against the grid edge while the
    sequence is still climbing: on a finite grid that is all "unbounded
    support" can look like, and in that case the edge concentration is
    expected rather than a quadrature failure.
    """
    n_max = int(n_max)
    if n_max < 1:
        raise ParameterError(f"n_max must be at least 1, got {n_max}")
    if g.grid.imag_offset != 0.0:
        raise ParameterError("support-radius moments need a real lambda grid")
    lam = g.grid.real_nodes
    _, _, mod = density_tables(params, lam)
    base = np.abs(g.values) ** 2 * mod * trapezoid_weights(lam)
    live = base > 0.0
    if not np.any(live):
        return _zero_report(n_max)
    # lam = 0 carries log_lam = -inf; its lam^{4n} factor is an exact zero
    # for every n >= 1, which is what -inf encodes under logsumexp
    log_base = np.where(live, np.log(np.where(live, base, 1.0)), -np.inf)
    nonzero = lam != 0.0
    log_lam = np.where(nonzero, np.log(np.abs(np.where(nonzero, lam, 1.0))),
                       -np.inf)
    ns = np.arange(1, n_max + 1)
    table = log_base[None, :] + 4.0 * ns[:, None] * log_lam[None, :]
    log_moments = logsumexp(table, axis=1)
    log_mass = float(logsumexp(log_base))
    roots = np.exp(log_moments / (4.0 * ns))
    means = np.exp((log_moments - log_mass) / (4.0 * ns))

    extent = float(max(abs(lam[0]), abs(lam[-1])))
    top = float(means[-1])
    half = float(means[max(0, n_max // 2 - 1)])
    climb = top - half
    diverging = (n_max >= 4 and top > _EDGE_FRACTION * extent
                 and climb > _CLIMB_REL * top)

    if math.isfinite(log_moments[-1]):
        edge = np.logaddexp(table[-1, 0], table[-1, -1])
        tail_share = float(np.exp(edge - log_moments[-1]))
    else:
        tail_share = 0.0
    if not diverging and tail_share > _TAIL_FRACTION:
        raise ToleranceError(
            f"moment of order {n_max} is dominated by the last grid cell; "
            "enlarge the lambda grid",
            residual=tail_share,
        )

    if diverging:
        verdict = "no flattening before the grid edge: support reads as unbounded"
    elif climb > _CLIMB_REL * top:
        verdict = ("still climbing at n_max short of the grid edge; raise "
                   "n_max to sharpen the estimate")
    else:
        verdict = "sequence flattens inside the grid: radius resolved"
    lines = [
        f"grid extent {extent:.6g}, n_max {n_max}",
        f"normalized root m_{n_max} = {top:.6g} "
        f"({top / extent:.3f} of the grid extent)",
        f"climb over the top half of the sequence: {climb:.3e}",
        f"last-cell share of the top moment: {tail_share:.3e}",
        verdict,
    ]
    return RadiusReport(
        moment_sequence=tuple((int(n), float(r)) for n, r in zip(ns, roots)),
        normalized_sequence=tuple(
            (int(n), float(m)) for n, m in zip(ns, means)),
        estimate=float(roots[-1]),
        diverging=diverging,
        diagnostics="\n".join(lines),
    )


def operator_radius(params: Parameters, f: GridFunction, n_max: int = 2,
                    h: Optional[float] = None) -> RadiusReport:
    """The same radius from the spatial side: ||L^n f||^{1/(2n)}_{2,mu}.

    The Laplacian powers are nested finite differences, so n is capped at
    2; higher orders belong to the spectral identity ||L^n f||^2 = 4n-th
    moment of Hf, which doubles here as a cross-check reported in the
    diagnostics.  The cross-check moments run on a spectral grid clipped
    to the live support of Hf -- beyond it, lam^{4n} amplifies quadrature
    floor into fake moment mass.

    h defaults to the grid spacing, which lands the nested stencils on the
    sample points themselves.  An h well below the spacing would instead
    differentiate the interpolant between samples, and a cubic interpolant
    carries no fourth-derivative content inside a cell.
    """
    n_max = int(n_max)
    if not 1 <= n_max <= 2:
        raise ParameterError(
            f"operator route caps at n_max = 2, got {n_max}; the spectral "
            "moments cover higher orders")
    if h is None:
        h = f.grid.spacing
    h = float(h)
    if h <= 0.0:
        raise ParameterError(f"step h must be positive, got {h}")
    base_norm = spatial_norm(params, f, 2.0)
    if base_norm == 0.0:
        return _zero_report(n_max)

    seq, norm_seq = [], []
    notes = [f"finite-difference step {h:.6g}"]
    sgrid_m = _matched_spectral_grid(params, f)
    for n in range(1, n_max + 1):
        vals = _laplacian_values(params, f, n, h)
        ln = spatial_norm(params, GridFunction(f.grid, vals), 2.0)
        # float eps through 2n nested first-derivative stencils
        noise = (2.0 / h) ** (2 * n) * np.finfo(float).eps * base_norm
        if ln <= 100.0 * noise:
            raise ToleranceError(
                f"Laplacian power {n} is finite-difference noise: norm "
                f"{ln:.3e} against noise scale {noise:.3e}; increase h or "
                "refine the grid",
                value=ln,
            )
        root = ln ** (1.0 / (2 * n))
        seq.append((n, float(root)))
        norm_seq.append((n, float((ln / base_norm) ** (1.0 / (2 * n)))))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EdgeDecayWarning)
            moment = spectral_moment(params, f, n, sgrid_m)
        cross = moment ** (1.0 / (4 * n))
        rel = abs(root - cross) / cross if cross > 0.0 else math.inf
        notes.append(f"n={n}: operator {root:.9g} vs spectral {cross:.9g} "
                     f"(rel {rel:.2e})")
    return RadiusReport(
        moment_sequence=tuple(seq),
        normalized_sequence=tuple(norm_seq),
        estimate=seq[-1][1],
        diverging=False,
        diagnostics="\n".join(notes),
    )


def exponential_type(params: Parameters, f: GridFunction,
                     eta_range: Tuple[float, float] = (5.0, 15.0),
                     samples: int = 21) -> float:
    """Least-squares slope of log|Hf(i eta)| over eta_range.

    For f supported in [-R, R] the transform grows like e^{R eta} up the
    imaginary axis, modulo power-law drag from the density, so the slope
    over a finite window sits a few percent below R and never above it.
    Pushing the window higher tightens the fit at the price of dynamic
    range.

    A markedly curved log-growth (Gaussian-type data: no finite
    exponential type) is reported as a warning rather than an error -- the
    fitted slope is still the honest window-local growth rate.
    """
    lo, hi = float(eta_range[0]), float(eta_range[1])
    samples = int(samples)
    if not 0.0 < lo < hi:
        raise ParameterError(
            f"eta_range must satisfy 0 < lo < hi, got ({lo}, {hi})")
    if samples < 3:
        raise ParameterError(f"need at least 3 samples, got {samples}")
    etas = np.linspace(lo, hi, samples)
    # out-of-range eta overflows the eigenfunctions; that shows up as
    # non-finite magnitudes and is reported below, not as warning spam
    with np.errstate(over="ignore", invalid="ignore"):
        mags = np.array([abs(forward(params, f, 1j * eta)) for eta in etas])
    if not np.all(np.isfinite(mags)) or np.any(mags < _MAG_FLOOR):
        worst = float(etas[int(np.argmin(mags))])
        raise ToleranceError(
            f"|Hf(i eta)| is below the floating-point floor near eta = "
            f"{worst:.3g}; shrink eta_range toward smaller eta",
            value=float(np.min(mags)),
        )
    logm = np.log(mags)
    slope = float(np.polyfit(etas, logm, 1)[0])
    curvature = float(np.polyfit(etas, logm, 2)[0])
    span = hi - lo
    if abs(curvature) * span ** 2 > _CURVE_REL * max(abs(slope) * span, 1e-30):
        warnings.warn(
            "log|Hf(i eta)| is markedly curved over eta_range; the data has "
            "no finite exponential type and the returned slope only "
            "describes this window",
            RuntimeWarning,
            stacklevel=2,
        )
    return slope


@dataclass(frozen=True)
class MembershipReport:
    """Finiteness table for the weighted-norm membership test.

    weighted_norms holds (m, n, ||(1+|x|)^m L^n f||_{2,mu}) from the direct
    route, n capped at 2 by the finite-difference fan-out; spectral_norms
    holds (n, ||L^n f||_{2,mu}) from the moments of Hf for every requested
    n, with math.inf where the moment integral is tail-dominated -- the
    numeric reading of "not in the space".  notes records edge-dominated
    rows: those norms are truncations, not membership certificates.
    """

    weighted_norms: Tuple[Tuple[int, int, float], ...]
    spectral_norms: Tuple[Tuple[int, float], ...]
    notes: str


def pw_membership(params: Parameters, f: GridFunction, m_max: int = 3,
                  n_max: int = 4,
                  h: Optional[float] = None) -> MembershipReport:
    """Weighted-norm table ||(1+|x|)^m L^n f||_{2,mu} next to the spectral
    moment route.

    The direct route stops at n = 2 (finite differences); the spectral
    route covers every n <= n_max and is the one that diverges visibly --
    as a tail-dominated moment, recorded as inf -- when f falls short of
    the smoothness the weights demand.
    """
    m_max, n_max = int(m_max), int(n_max)
    if m_max < 0 or n_max < 0:
        raise ParameterError("m_max and n_max must be nonnegative")
    if h is None:
        h = f.grid.spacing
    h = float(h)

    x = f.grid.nodes
    growth = 1.0 + np.abs(x)
    mu_w = _mu_weights(params, f.grid)
    rows, notes = [], []
    for n in range(0, min(n_max, 2) + 1):
        vals = f.values if n == 0 else _laplacian_values(params, f, n, h)
        flagged_m = None
        for m in range(0, m_max + 1):
            wf = growth ** m * vals
            terms = np.abs(wf) ** 2 * mu_w
            total = float(np.sum(terms))
            rows.append((m, n, float(math.sqrt(total))))
            edge = float(terms[0] + terms[-1])
            if total > 0.0 and edge > _EDGE_SHARE * total:
                flagged_m = m if flagged_m is None else flagged_m
        if flagged_m is not None:
            notes.append(
                f"n={n}: weighted integrand reaches the grid edge from "
                f"m={flagged_m} on; those norms are truncations, not "
                "membership certificates")

    spectral = []
    for n, moment in _moment_table(params, f, n_max):
        if math.isfinite(moment):
            spectral.append((n, math.sqrt(moment)))
        else:
            spectral.append((n, math.inf))
            notes.append(
                f"spectral moment of order {n} is still growing at the "
                "grid edge: L^n f reads as falling outside L^2(mu)")
    if n_max > 2:
        notes.append("orders n > 2 are covered by the spectral route only")

    top = [v for m, n, v in rows if n == min(n_max, 2)]
    if len(top) >= 2 and top[0] > 0.0:
        notes.append(
            f"weighted-norm growth at the top direct order: "
            f"x{top[-1] / top[0]:.3g} from m=0 to m={m_max}")
    return MembershipReport(tuple(rows), tuple(spectral), "\n".join(notes))
