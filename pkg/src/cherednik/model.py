"""Sampled-function containers, spectral grids, and Lebesgue exponent pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import grids
from .errors import GridError, ParameterError
from .params import Parameters

__all__ = [
    "SpatialGrid",
    "GridFunction",
    "SpectralGrid",
    "SpectralFunction",
    "LebesgueExponent",
    "strip_halfwidth",
]


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform symmetric grid on [-half_width, half_width] with 0 as a node."""

    half_width: float
    points: int

    def __post_init__(self):
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "points", int(self.points))
        # symmetric_nodes re-validates; run it once here so bad grids fail early
        grids.symmetric_nodes(self.half_width, self.points)

    @property
    def nodes(self) -> np.ndarray:
        return grids.symmetric_nodes(self.half_width, self.points)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    def reflection(self) -> np.ndarray:
        """Index array r with nodes[r] == -nodes."""
        return np.arange(self.points - 1, -1, -1)


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function on a SpatialGrid."""

    grid: SpatialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.points,):
            raise GridError(
                f"values shape {v.shape} does not match grid with {self.grid.points} points"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, grid: SpatialGrid, fn) -> "GridFunction":
        return cls(grid, np.asarray([fn(x) for x in grid.nodes], dtype=complex))

    def reflected(self) -> "GridFunction":
        """Samples of x -> f(-x) on the same grid."""
        return GridFunction(self.grid, self.values[self.grid.reflection()])

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction":
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "GridFunction"):
        if other.grid != self.grid:
            raise GridError("grid mismatch between operands")


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform grid of lambda values on a horizontal line Im(lambda) = imag_offset."""

    lambda_min: float
    lambda_max: float
    points: int
    imag_offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lambda_min", float(self.lambda_min))
        object.__setattr__(self, "lambda_max", float(self.lambda_max))
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "imag_offset", float(self.imag_offset))
        if not self.lambda_min < self.lambda_max:
            raise GridError("lambda_min must be below lambda_max")
        if self.points < 2:
            raise GridError("spectral grid needs at least 2 points")

    @classmethod
    def symmetric(cls, extent: float, points: int, imag_offset: float = 0.0) -> "SpectralGrid":
        if points % 2 == 0:
            raise GridError("symmetric spectral grid needs an odd point count")
        return cls(-float(extent), float(extent), points, imag_offset)

    @property
    def real_nodes(self) -> np.ndarray:
        """The xi abscissas, always real."""
        if self.lambda_min == -self.lambda_max and self.points % 2 == 1:
            # exact mirror symmetry, same construction as the spatial grids
            return grids.symmetric_nodes(self.lambda_max, self.points)
        return np.linspace(self.lambda_min, self.lambda_max, self.points)

    @property
    def nodes(self) -> np.ndarray:
        if self.imag_offset == 0.0:
            return self.real_nodes
        return self.real_nodes + 1j * self.imag_offset

    @property
    def spacing(self) -> float:
        return (self.lambda_max - self.lambda_min) / (self.points - 1)


@dataclass(frozen=True)
class SpectralFunction:
    """Complex samples of a function on a SpectralGrid."""

    grid: SpectralGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.points,):
            raise GridError(
                f"values shape {v.shape} does not match grid with {self.grid.points} points"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class LebesgueExponent:
    """An exponent p in [1,2] together with its conjugate q = p/(p-1)."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not 1.0 <= p <= 2.0:
            raise ParameterError(f"exponent p must lie in [1,2], got {p}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        if self.p == 1.0:
            return math.inf
        return self.p / (self.p - 1.0)


def strip_halfwidth(params: Parameters, p: Union[LebesgueExponent, float]) -> float:
    """Half-width (2/p - 1)*rho of the horizontal strip where the transform
    of an L^p function is holomorphic.  Degenerates to 0 at p = 2."""
    if not isinstance(p, LebesgueExponent):
        p = LebesgueExponent(p)
    return (2.0 / p.p - 1.0) * params.rho
