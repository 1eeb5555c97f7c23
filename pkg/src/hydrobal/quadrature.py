"""Gauss-Legendre quadrature rules on arbitrary intervals."""

from functools import lru_cache

import numpy as np

from .errors import ConfigurationError

MAX_ORDER = 5


@lru_cache(maxsize=None)
def _reference_rule(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(order, interval=(-1.0, 1.0)):
    """Return (nodes, weights) of the `order`-point Gauss-Legendre rule.

    The rule integrates polynomials up to degree 2*order - 1 exactly and its
    weights sum to the interval length.
    """
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_ORDER:
        raise ConfigurationError(
            f"unsupported Gauss-Legendre order {order!r}; expected 1..{MAX_ORDER}"
        )
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ConfigurationError(f"empty quadrature interval [{a}, {b}]")
    x, w = _reference_rule(int(order))
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def gauss_nodes_weights_centered(order, width):
    """Nodes (as offsets from the cell center) and weights for one cell."""
    return gauss_legendre(order, (-0.5 * width, 0.5 * width))
