"""Model parameters for the rank-one hyperbolic setting.

A parameter pair (alpha, beta) with alpha >= beta >= -1/2 and alpha > -1/2
fixes the weight function, the first-order operator and everything built on
top of them.  The derived quantities used throughout are

    rho = alpha + beta + 1        (half-sum of weighted roots)
    k1  = alpha - beta            (multiplicity of the short root)
    k2  = beta + 1/2              (multiplicity of the long root)

so rho = k1/2 + 2*(k2/2) * ... in the root-system normalisation; here we
only ever need rho itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError

__all__ = ["Parameters"]


@dataclass(frozen=True)
class Parameters:
    """Validated (alpha, beta) pair with derived constants."""

    alpha: float
    beta: float

    def __post_init__(self):
        a = float(self.alpha)
        b = float(self.beta)
        if not (a == a and b == b):  # NaN guard
            raise ParameterError("alpha and beta must be finite numbers")
        if a <= -0.5:
            raise ParameterError(f"alpha must exceed -1/2, got {a}")
        if b < -0.5:
            raise ParameterError(f"beta must be at least -1/2, got {b}")
        if a < b:
            raise ParameterError(f"alpha must be at least beta, got alpha={a} < beta={b}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    @property
    def k1(self) -> float:
        return self.alpha - self.beta

    @property
    def k2(self) -> float:
        return self.beta + 0.5

    def shifted(self) -> "Parameters":
        """The (alpha+1, beta+1) pair used by derivative identities."""
        return Parameters(self.alpha + 1.0, self.beta + 1.0)

    def __str__(self):
        return f"(alpha={self.alpha:g}, beta={self.beta:g})"
