"""Explicit Runge-Kutta time integration, CFL control, momentum damping."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, EosFailure, FluxEvaluationError, StepFailure


@dataclass(frozen=True)
class ButcherTableau:
    name: str
    a: tuple
    b: tuple
    c: tuple
    order: int

    @property
    def stages(self):
        return len(self.b)


FORWARD_EULER = ButcherTableau("euler", ((),), (1.0,), (0.0,), 1)

# four-stage third-order SSP scheme (effective CFL coefficient 2)
SSPRK43 = ButcherTableau(
    "ssprk43",
    ((), (0.5,), (0.5, 0.5), (1 / 6, 1 / 6, 1 / 6)),
    (1 / 6, 1 / 6, 1 / 6, 0.5),
    (0.0, 0.5, 1.0, 0.5),
    3,
)

# classic six-stage fifth-order explicit method
RK5 = ButcherTableau(
    "rk5",
    ((),
     (0.25,),
     (0.125, 0.125),
     (0.0, -0.5, 1.0),
     (3 / 16, 0.0, 0.0, 9 / 16),
     (-3 / 7, 2 / 7, 12 / 7, -12 / 7, 8 / 7)),
    (7 / 90, 0.0, 32 / 90, 12 / 90, 32 / 90, 7 / 90),
    (0.0, 0.25, 0.25, 0.5, 0.75, 1.0),
    5,
)

TABLEAUS = {t.name: t for t in (FORWARD_EULER, SSPRK43, RK5)}


def tableau_for_order(order):
    return {1: FORWARD_EULER, 3: SSPRK43, 5: RK5}[order]


def rk_step(state, dt, rhs, tableau):
    """One explicit RK step; `state` is any ndarray, `rhs` maps array->array."""
    ks = []
    for s in range(tableau.stages):
        stage = state
        row = tableau.a[s]
        for j, a in enumerate(row):
            if a != 0.0:
                stage = stage + (dt * a) * ks[j]
        ks.append(rhs(stage))
    out = state
    for b, k in zip(tableau.b, ks):
        if b != 0.0:
            out = out + (dt * b) * k
    return out


def damp_momentum(data, delta, dt, momentum_components=(1,)):
    """Exact integral of d(rho u)/dt = -delta * rho u over dt (in place)."""
    if delta < 0.0:
        raise ConfigurationError("damping rate must be non-negative")
    if delta > 0.0:
        factor = np.exp(-delta * dt)
        for comp in momentum_components:
            data[comp] *= factor


def cfl_dt(operator, data, cfl):
    """dx / max(|u| + c) in 1-D; the additive per-axis bound in 2-D."""
    speed = operator.max_signal_speed(data)
    if hasattr(operator.grid, "dy"):
        dt = cfl / speed  # operator returns sum of per-axis signal rates
    else:
        dt = cfl * operator.grid.dx / speed
    if not np.isfinite(dt) or dt <= 0.0:
        raise StepFailure("non-positive time step")
    return dt


@dataclass
class StepController:
    cfl: float = 0.5
    t_end: float = 1.0
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigurationError("cfl must be in (0, 1]")


@dataclass
class RunStats:
    steps: int = 0
    time: float = 0.0
    fallback_cells: int = 0
    max_velocity_history: list = field(default_factory=list)


def _check_state(data, interior, momentum_slice, time, step):
    q = data[(slice(None),) + interior]
    if not np.all(np.isfinite(q)):
        raise StepFailure("non-finite state", time=time, step=step)
    rho = q[0]
    if np.any(rho <= 0.0):
        raise StepFailure("non-positive density", time=time, step=step)
    kinetic = 0.5 * np.sum(q[momentum_slice] ** 2, axis=0) / rho
    if np.any(q[-1] - kinetic <= 0.0):
        raise StepFailure("non-positive internal energy", time=time, step=step)


def advance(operator, data, controller, damping=0.0, record_velocity=False,
            stop_condition=None, tableau=None):
    """March the semi-discrete system to controller.t_end.

    Returns (data, RunStats).  Momentum damping is applied as an exact
    exponential in a symmetric split around each RK step.  The state is
    checked for positivity after every accepted step.
    """
    grid = operator.grid
    if hasattr(grid, "dy"):
        interior = grid.interior
        momenta = (1, 2)
    else:
        interior = (grid.interior,)
        momenta = (1,)
    mom_slice = slice(1, 1 + len(momenta))
    tableau = tableau or tableau_for_order(operator.scheme.order)
    operator.fallback_cells = 0
    stats = RunStats()
    t = 0.0
    data = np.array(data, dtype=float)
    tiny = 1e-12 * max(controller.t_end, 1.0)
    while t < controller.t_end - tiny:
        if stats.steps >= controller.max_steps:
            raise StepFailure("max_steps exceeded", time=t, step=stats.steps)
        dt = min(cfl_dt(operator, data, controller.cfl), controller.t_end - t)
        if damping > 0.0:
            damp_momentum(data, damping, 0.5 * dt, momenta)
        try:
            data = rk_step(data, dt, operator.rhs, tableau)
        except (FluxEvaluationError, EosFailure) as exc:
            raise StepFailure(f"stage evaluation failed: {exc}",
                              time=t, step=stats.steps) from exc
        if damping > 0.0:
            damp_momentum(data, damping, 0.5 * dt, momenta)
        t += dt
        stats.steps += 1
        _check_state(data, interior, mom_slice, t, stats.steps)
        if record_velocity:
            q = data[(slice(None),) + interior]
            vmax = float(np.max(np.sqrt(
                np.sum(q[mom_slice] ** 2, axis=0)) / q[0]))
            stats.max_velocity_history.append((t, vmax))
        if stop_condition is not None and stop_condition(t, stats):
            break
    stats.time = t
    stats.fallback_cells = operator.fallback_cells
    return data, stats
