"""Numerical library for a one-dimensional nonsymmetric hypergeometric
transform pair: eigenfunctions of a first-order difference-differential
operator, the associated integral transform and its inverse, a signed
product-formula convolution, and support-radius estimators.
"""

from ._kernels import BACKEND as _BACKEND
from .errors import (
    CherednikError,
    ConvergenceError,
    EdgeDecayWarning,
    GridError,
    ParameterError,
    ParityError,
    PoleError,
    ToleranceError,
)
from .model import (
    GridFunction,
    LebesgueExponent,
    SpatialGrid,
    SpectralFunction,
    SpectralGrid,
    strip_halfwidth,
)
from .params import Parameters
from .special import (
    CFunctionValue,
    PlancherelDensities,
    abs_c_inverse_sq,
    c_function,
    hyp2f1,
    jacobi_phi,
    log_gamma,
    opdam_g,
    opdam_rows,
    plancherel_densities,
    weight,
)

__version__ = "0.1.0"


def active_backend() -> str:
    """Which series backend is in use: 'compiled' or 'pure'."""
    return _BACKEND


def validate_parameters(alpha: float, beta: float) -> Parameters:
    """Validated parameter pair; raises ParameterError with the violated
    constraint named."""
    return Parameters(alpha, beta)
