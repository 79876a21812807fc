"""Uniform symmetric grids for the space and frequency axes.

Every routine in the transform layer works on grids produced here: an odd
number of equally spaced nodes placed so that the origin is a node and the
array is its own mirror image under x -> -x (bit for bit, which lets parity
splits be exact).

Trapezoid sums on such grids converge spectrally for smooth integrands that
decay at the edges, so no fancier rule is needed on the transform path.
"""

from __future__ import annotations

import numpy as np

from .errors import GridError

__all__ = [
    "symmetric_nodes",
    "spacing",
    "trapezoid_weights",
    "reflection_index",
    "DEFAULT_X_EXTENT",
    "DEFAULT_X_COUNT",
    "DEFAULT_LAMBDA_EXTENT",
    "DEFAULT_LAMBDA_COUNT",
]

# Defaults sized so that exp(rho*x - x^2-ish) test profiles fit and the
# frequency step pi/extent stays well below the lambda grid's needs.
DEFAULT_X_EXTENT = 7.2
DEFAULT_X_COUNT = 577
DEFAULT_LAMBDA_EXTENT = 16.0
DEFAULT_LAMBDA_COUNT = 361


def symmetric_nodes(extent: float, count: int) -> np.ndarray:
    """Nodes -extent = x_0 < ... < x_{count-1} = extent with x reversed == -x.

    count must be odd so the origin is the middle node.  Nodes are built as
    integer multiples of the step, which keeps the reflection exact in
    floating point.
    """
    extent = float(extent)
    if not extent > 0.0:
        raise GridError(f"extent must be positive, got {extent}")
    count = int(count)
    if count < 3:
        raise GridError(f"need at least 3 nodes, got {count}")
    if count % 2 == 0:
        raise GridError(f"node count must be odd, got {count}")
    half = count // 2
    return (np.arange(count) - half) * (extent / half)


def spacing(nodes: np.ndarray) -> float:
    """Step of a uniform grid, validating uniformity to rounding error."""
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 2:
        raise GridError("grid must be a 1-d array with at least 2 nodes")
    steps = np.diff(nodes)
    h = float(steps[0])
    # each step carries the subtraction's rounding, which scales with the
    # node magnitude, not with the step
    atol = 8.0 * np.finfo(float).eps * float(np.max(np.abs(nodes)))
    if h <= 0.0 or not np.allclose(steps, h, rtol=1e-12, atol=atol):
        raise GridError("grid nodes must be strictly increasing and uniform")
    return h


def trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    """Trapezoid quadrature weights for a uniform grid."""
    h = spacing(nodes)
    w = np.full(len(nodes), h)
    w[0] = w[-1] = 0.5 * h
    return w


def reflection_index(nodes: np.ndarray) -> np.ndarray:
    """Index array r with nodes[r] == -nodes, for symmetric grids."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    idx = np.arange(n - 1, -1, -1)
    if not np.array_equal(nodes[idx], -nodes):
        raise GridError("grid is not reflection symmetric")
    return idx
