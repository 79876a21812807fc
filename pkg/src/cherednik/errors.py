"""Exception types shared across the package."""


class CherednikError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(CherednikError, ValueError):
    """Invalid (alpha, beta) pair or exponent outside its admissible range."""


class GridError(CherednikError, ValueError):
    """Malformed spatial or spectral grid."""


class PoleError(CherednikError, ValueError):
    """Evaluation requested at a pole of a special function."""


class ParityError(CherednikError, ValueError):
    """Input failed a parity precondition (e.g. antiderivative of a non-odd part)."""


class ConvergenceError(CherednikError, RuntimeError):
    """A series or refinement loop hit its cap before reaching tolerance.

    Carries the best value obtained and the attained residual.
    """

    def __init__(self, message, value=None, residual=None):
        super().__init__(message)
        self.value = value
        self.residual = residual


class ToleranceError(ConvergenceError):
    """A quadrature or truncation check failed its tolerance."""


class EdgeDecayWarning(UserWarning):
    """Sampled data does not decay at the grid edge as a routine assumes."""
