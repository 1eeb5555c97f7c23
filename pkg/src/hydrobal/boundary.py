"""Boundary specifications and the simple ghost fills.

The hydrostatic-extrapolation fill (which needs the scheme's equilibrium
machinery) lives on the spatial operators; `fill_ghosts` dispatches there
when given a profile context.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

KINDS_1D = ("periodic", "dirichlet", "hydrostatic-extrapolation", "solid-wall")
KINDS_2D = KINDS_1D + ("background-deviation-extrapolation",)


@dataclass(frozen=True)
class BoundarySpec1D:
    left: str = "periodic"
    right: str = "periodic"

    def __post_init__(self):
        for side in (self.left, self.right):
            if side not in KINDS_1D:
                raise ConfigurationError(f"unknown boundary kind {side!r}")
        if (self.left == "periodic") != (self.right == "periodic"):
            raise ConfigurationError("periodic boundaries must be paired")

    @property
    def periodic(self):
        return self.left == "periodic"


@dataclass(frozen=True)
class BoundarySpec2D:
    x_lo: str = "periodic"
    x_hi: str = "periodic"
    y_lo: str = "periodic"
    y_hi: str = "periodic"

    def __post_init__(self):
        for side in (self.x_lo, self.x_hi, self.y_lo, self.y_hi):
            if side not in KINDS_2D:
                raise ConfigurationError(f"unknown boundary kind {side!r}")
        if (self.x_lo == "periodic") != (self.x_hi == "periodic") or \
           (self.y_lo == "periodic") != (self.y_hi == "periodic"):
            raise ConfigurationError("periodic boundaries must be paired per axis")


def fill_periodic_1d(data, n_ghost, n_cells):
    data[..., :n_ghost] = data[..., n_cells:n_cells + n_ghost]
    data[..., n_cells + n_ghost:] = data[..., n_ghost:2 * n_ghost]


def fill_periodic_axis(data, n_ghost, n_cells, axis):
    idx = [slice(None)] * data.ndim

    def at(sl):
        out = list(idx)
        out[axis] = sl
        return tuple(out)

    data[at(slice(0, n_ghost))] = data[at(slice(n_cells, n_cells + n_ghost))]
    data[at(slice(n_cells + n_ghost, None))] = data[at(slice(n_ghost, 2 * n_ghost))]


def fill_ghosts(field, spec, context=None):
    """Fill the ghost layer of a CellField according to `spec`.

    Dirichlet, hydrostatic-extrapolation, and solid-wall fills need the
    spatial operator as `context` (it stores the frozen Dirichlet ghosts and
    the equilibrium machinery).
    """
    from .grid import Grid1D

    if isinstance(field.grid, Grid1D):
        if spec.periodic:
            fill_periodic_1d(field.data, field.grid.n_ghost, field.grid.n_cells)
            return field
    if context is None:
        raise ConfigurationError(
            "non-periodic boundary fills need the spatial operator as context")
    context.fill_ghosts(field.data)
    return field
