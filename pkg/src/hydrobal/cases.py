"""Scenario library: analytic backgrounds, gravity fields, initializers.

Every scenario with an analytic background satisfies the hydrostatic
equation exactly; `hydrostatic_residual` samples that as a self-consistency
gate before any solver test touches the scenario.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .boundary import BoundarySpec1D, BoundarySpec2D
from .eos import IdealGas, IdealGasRadiation
from .errors import InitializationError
from .grid import CellField, Grid1D, Grid2D
from .poly import poly_antiderivative, poly_eval, poly_mul
from .quadrature import gauss_nodes_weights_centered
from .reconstruct import Cweno1D, GravityInterp1D

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass
class Scenario:
    """A benchmark setup: domain, EoS, gravity, initial state, background."""

    name: str
    dimension: int
    domain: tuple
    eos: object
    boundary: object
    t_end: float
    gravity: object                    # g(x) or g(x, y) -> components
    potential: object                  # phi(x) or phi(x, y)
    initial: object                    # primitives (rho, u[, v], p)
    background: object = None          # (rho_tilde, p_tilde) or None
    params: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# smooth radial helpers (sin(kr)/(kr) profiles, regular at the origin)
# ---------------------------------------------------------------------------

def radial_sinc(r, k=SQRT_2PI):
    """sin(k r)/(k r), continuously extended to r = 0."""
    return np.sinc(k * np.asarray(r, dtype=float) / np.pi)


def _sinc_slope_over_z(z):
    """(d/dz sinc(z)) / z = (z cos z - sin z)/z^3, regular at 0 (-> -1/3)."""
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 0.05
    z_safe = np.where(small, 1.0, z)
    direct = (z_safe * np.cos(z_safe) - np.sin(z_safe)) / z_safe ** 3
    z2 = z * z
    series = -1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0 + z2 * z2 * z2 / 45360.0
    return np.where(small, series, direct)


def radial_sinc_gradient(x, y, k=SQRT_2PI):
    """Gradient of sin(k r)/(k r) as a smooth vector field."""
    r = np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2)
    factor = k * k * _sinc_slope_over_z(k * r)
    return factor * np.asarray(x), factor * np.asarray(y)


# ---------------------------------------------------------------------------
# 1-D scenarios
# ---------------------------------------------------------------------------

def isothermal_1d(potential="10x", gamma=1.4):
    """Isothermal hydrostatic state rho = p = exp(-phi), u = 0."""
    if potential == "10x":
        phi = lambda x: 10.0 * np.asarray(x, dtype=float)
        grav = lambda x: -10.0 * np.ones_like(np.asarray(x, dtype=float))
        bc = BoundarySpec1D("dirichlet", "dirichlet")
    elif potential == "sin":
        phi = lambda x: np.sin(2.0 * np.pi * np.asarray(x, dtype=float))
        grav = lambda x: -2.0 * np.pi * np.cos(2.0 * np.pi * np.asarray(x, dtype=float))
        bc = BoundarySpec1D("periodic", "periodic")
    else:
        raise ValueError(f"unknown potential choice {potential!r}")

    rho = lambda x: np.exp(-phi(x))

    def initial(x):
        r = rho(x)
        return r, np.zeros_like(r), r

    tau = np.sqrt(1.0 / gamma)  # sound crossing time: c = sqrt(gamma) here
    return Scenario(
        name=f"isothermal-{potential}",
        dimension=1,
        domain=(0.0, 1.0),
        eos=IdealGas(gamma),
        boundary=bc,
        t_end=2.0 * tau,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=(rho, rho),
        params={"tau": tau, "potential": potential},
    )


def isothermal_perturbed_1d(eta, gamma=1.4):
    """Gaussian pressure bump of amplitude eta on the periodic isothermal state."""
    base = isothermal_1d("sin", gamma)
    rho_bg, p_bg = base.background

    def initial(x):
        r = rho_bg(x)
        p = p_bg(x) + eta * np.exp(-100.0 * (np.asarray(x) - 0.5) ** 2)
        return r, np.zeros_like(r), p

    return Scenario(
        name=f"isothermal-perturbed-{eta:g}",
        dimension=1,
        domain=(0.0, 1.0),
        eos=base.eos,
        boundary=base.boundary,
        t_end=0.5,
        gravity=base.gravity,
        potential=base.potential,
        initial=initial,
        background=base.background,
        params={"eta": eta},
    )


def polytropic_radiation_1d(perturbation=None, gamma=1.4, nu=None):
    """Polytropic hydrostatic state closed by the radiation-pressure EoS.

    theta = 1 - (nu-1)/nu * phi with phi(x) = g*x, constant g = -1; the
    profile is hydrostatic for any nu, here nu = gamma.
    """
    nu = gamma if nu is None else nu
    phi = lambda x: -np.asarray(x, dtype=float)
    grav = lambda x: np.ones_like(np.asarray(x, dtype=float))
    theta = lambda x: 1.0 - (nu - 1.0) / nu * phi(x)
    rho = lambda x: theta(x) ** (1.0 / (nu - 1.0))
    pres = lambda x: theta(x) ** (nu / (nu - 1.0))

    def initial(x):
        r = rho(x)
        p = pres(x)
        if perturbation is not None:
            p = p + perturbation * np.exp(-100.0 * (np.asarray(x) - 0.3) ** 2)
        return r, np.zeros_like(r), p

    tag = "" if perturbation is None else f"-perturbed-{perturbation:g}"
    return Scenario(
        name=f"polytropic-radiation{tag}",
        dimension=1,
        domain=(0.0, 1.0),
        eos=IdealGasRadiation(gamma),
        boundary=BoundarySpec1D("dirichlet", "dirichlet"),
        t_end=10.0 if perturbation is None else 0.1,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=(rho, pres),
        params={"nu": nu, "eta": perturbation},
    )


def riemann_on_equilibrium_1d(gamma=1.4):
    """Piecewise isothermal hydrostatic state with a jump at x0 = 0.125.

    The jump launches all three waves; the linear potential phi(x) = x keeps
    each side hydrostatic.
    """
    x0, a, b, c = 0.125, 0.5, 1.0, 2.0
    phi = lambda x: np.asarray(x, dtype=float)
    grav = lambda x: -np.ones_like(np.asarray(x, dtype=float))

    def rho(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < x0, a * c * np.exp(-a * phi(x)),
                        b * np.exp(-b * phi(x)))

    def pres(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < x0, c * np.exp(-a * phi(x)), np.exp(-b * phi(x)))

    def initial(x):
        r = rho(x)
        return r, np.zeros_like(r), pres(x)

    return Scenario(
        name="riemann-on-equilibrium",
        dimension=1,
        domain=(0.0, 0.25),
        eos=IdealGas(gamma),
        boundary=BoundarySpec1D("dirichlet", "dirichlet"),
        t_end=0.02,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=(rho, pres),
        params={"x0": x0, "a": a, "b": b, "c": c},
    )


def relaxation_1d(gamma=1.4, delta=0.2, t_end=100.0):
    """Uniform state driven toward an unknown hydrostatic stratification by
    momentum damping under phi = 10 sin(2 pi x)."""
    phi = lambda x: 10.0 * np.sin(2.0 * np.pi * np.asarray(x, dtype=float))
    grav = lambda x: -20.0 * np.pi * np.cos(2.0 * np.pi * np.asarray(x, dtype=float))

    def initial(x):
        ones = np.ones_like(np.asarray(x, dtype=float))
        return ones, np.zeros_like(ones), ones

    return Scenario(
        name="relaxation",
        dimension=1,
        domain=(0.0, 1.0),
        eos=IdealGas(gamma),
        boundary=BoundarySpec1D("periodic", "periodic"),
        t_end=t_end,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=None,
        params={"damping": delta},
    )


# ---------------------------------------------------------------------------
# 2-D scenarios
# ---------------------------------------------------------------------------

def polytrope_2d(perturbation=None, gamma=2.0):
    """Self-gravitating adiabatic sphere: rho = sin(k r)/(k r), p = rho^gamma,
    phi = -2 rho; hydrostatic identically for gamma = 2."""
    rho = lambda x, y: radial_sinc(np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2))
    phi = lambda x, y: -2.0 * rho(x, y)

    def grav(x, y):
        gx, gy = radial_sinc_gradient(x, y)
        return 2.0 * gx, 2.0 * gy

    def pres(x, y):
        p = rho(x, y) ** gamma
        if perturbation is not None:
            r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
            p = p * (1.0 + perturbation * np.exp(-r2 / 0.05 ** 2))
        return p

    def initial(x, y):
        r = rho(x, y)
        zeros = np.zeros_like(r)
        return r, zeros, zeros, pres(x, y)

    bg_pres = lambda x, y: rho(x, y) ** gamma
    tag = "" if perturbation is None else f"-perturbed-{perturbation:g}"
    return Scenario(
        name=f"polytrope-2d{tag}",
        dimension=2,
        domain=(-0.5, 0.5, -0.5, 0.5),
        eos=IdealGas(gamma),
        boundary=BoundarySpec2D(*["dirichlet"] * 4),
        t_end=5.0 if perturbation is None else 0.2,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=(rho, bg_pres),
        params={"amplitude": perturbation},
    )


def radial_rayleigh_taylor_2d(gamma=1.4, r0=0.2, a=1.0, b=2.0):
    """Piecewise isothermal state in a deep radial potential; the density
    jump at r0 is Rayleigh-Taylor unstable for b > a.  Quadrant domain with
    reflecting walls on the axes and background-deviation extrapolation
    outside."""
    phi = lambda x, y: -20.0 * radial_sinc(
        np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2))

    def grav(x, y):
        gx, gy = radial_sinc_gradient(x, y)
        return 20.0 * gx, 20.0 * gy

    c = np.exp((a - b) * phi(r0, 0.0))
    rho_in = lambda x, y: a * c * np.exp(-a * phi(x, y))
    rho_out = lambda x, y: b * np.exp(-b * phi(x, y))
    p_in = lambda x, y: c * np.exp(-a * phi(x, y))
    p_out = lambda x, y: np.exp(-b * phi(x, y))

    def initial(x, y):
        r2 = np.asarray(x) ** 2 + np.asarray(y) ** 2
        inside = r2 < r0 ** 2
        rho = np.where(inside, rho_in(x, y), rho_out(x, y))
        p = np.where(inside, p_in(x, y), p_out(x, y))
        zeros = np.zeros_like(rho)
        return rho, zeros, zeros, p

    return Scenario(
        name="radial-rayleigh-taylor",
        dimension=2,
        domain=(0.0, 0.5, 0.0, 0.5),
        eos=IdealGas(gamma),
        boundary=BoundarySpec2D("solid-wall", "background-deviation-extrapolation",
                                "solid-wall", "background-deviation-extrapolation"),
        t_end=0.6,
        gravity=grav,
        potential=phi,
        initial=initial,
        background=(rho_out, p_out),
        params={"r0": r0, "a": a, "b": b, "c": float(c),
                "rho_out": rho_out, "p_out": p_out},
    )


SCENARIOS = {
    "isothermal-10x": lambda **kw: isothermal_1d("10x", **kw),
    "isothermal-sin": lambda **kw: isothermal_1d("sin", **kw),
    "isothermal-perturbed": isothermal_perturbed_1d,
    "polytropic-radiation": polytropic_radiation_1d,
    "riemann-on-equilibrium": riemann_on_equilibrium_1d,
    "relaxation": relaxation_1d,
    "polytrope-2d": polytrope_2d,
    "radial-rayleigh-taylor": radial_rayleigh_taylor_2d,
}


def make_scenario(name, **kwargs):
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}")
    return SCENARIOS[name](**kwargs)


# ---------------------------------------------------------------------------
# initialization
# ---------------------------------------------------------------------------

def grid_for(scenario, n, n_ghost):
    if scenario.dimension == 1:
        x0, x1 = scenario.domain
        return Grid1D(x0, x1, n, n_ghost)
    x0, x1, y0, y1 = scenario.domain
    return Grid2D(x0, x1, y0, y1, n, n, n_ghost)


def _conserved_1d(scenario, x):
    rho, u, p = scenario.initial(x)
    eps = scenario.eos.internal_energy(rho, p)
    return np.stack([rho, rho * u, eps + 0.5 * rho * u ** 2])


def _conserved_2d(scenario, x, y):
    rho, u, v, p = scenario.initial(x, y)
    eps = scenario.eos.internal_energy(rho, p)
    return np.stack([rho, rho * u, rho * v,
                     eps + 0.5 * rho * (u ** 2 + v ** 2)])


def init_cell_averages(scenario, grid, quad_order=5):
    """CellField of conserved averages via per-cell Gauss quadrature."""
    if scenario.dimension == 1:
        nodes, weights = gauss_nodes_weights_centered(quad_order, grid.dx)
        x = grid.centers()[:, None] + nodes[None, :]
        q = _conserved_1d(scenario, x)
        data = np.einsum("a,c...a->c...", weights, q) / grid.dx
        return CellField(grid, data)
    nx, wx = gauss_nodes_weights_centered(quad_order, grid.dx)
    ny, wy = gauss_nodes_weights_centered(quad_order, grid.dy)
    cx = grid.centers_x()[:, None, None, None] + nx[None, None, :, None]
    cy = grid.centers_y()[None, :, None, None] + ny[None, None, None, :]
    q = _conserved_2d(scenario, cx, cy)
    data = np.einsum("a,b,cxyab->cxy", wx, wy, q) / (grid.dx * grid.dy)
    return CellField(grid, data)


def discrete_equilibrium_init(scenario, grid, scheme, anchor_cell=None):
    """Discrete hydrostatic equilibrium consistent with the scheme's own
    equilibrium reconstruction.

    Density averages come from the scheme's quadrature of the background;
    the anchor pressure is the background point value at the anchor cell and
    is propagated to every cell by enforcing pressure continuity of the
    piecewise equilibrium source at interfaces; energies are then the
    quadrature averages of the profile's internal energy.  Ghost cells are
    included so Dirichlet boundaries are consistent; for the extrapolation
    and wall boundary kinds the ghost densities are generated by the same
    extrapolation the boundary fill applies, making the state an exact fixed
    point of the discretization.
    """
    if scenario.dimension != 1 or scenario.background is None:
        raise InitializationError(
            "discrete equilibria need a 1-D scenario with a background")
    rho_bg, p_bg = scenario.background
    eos = scenario.eos
    h = grid.dx
    ng, r = grid.n_ghost, scheme.radius
    n_tot = grid.n_tot
    centers = grid.centers()
    nodes, weights = gauss_nodes_weights_centered(scheme.n_quad, h)

    data = np.zeros((3, n_tot))
    data[0] = np.einsum("a,ca->c", weights,
                        rho_bg(centers[:, None] + nodes[None, :])) / h

    cweno = Cweno1D(scheme.order, h)
    bc = scenario.boundary
    if not bc.periodic and "dirichlet" not in (bc.left, bc.right):
        # regenerate ghost densities exactly as the boundary fill will
        for side in ("left", "right"):
            sel = slice(None, None, 1) if side == "left" else slice(None, None, -1)
            view = data[:, sel].copy()
            c = ng + r
            coeffs_c = cweno.reconstruct_stencils(view[:, c - r:c + r + 1])
            from .poly import poly_cell_average
            for j in range(ng):
                view[0, j] = poly_cell_average(coeffs_c[0], h, offset=(j - c) * h)
            data[0, sel] = view[0]

    rec_rho = cweno.coefficients(data[0])
    g_coeffs = GravityInterp1D(scheme.order, h).coefficients(
        np.asarray(scenario.gravity(centers), dtype=float) * np.ones(n_tot))
    anti = poly_antiderivative(poly_mul(rec_rho, g_coeffs))
    anti_l = poly_eval(anti, -0.5 * h)
    anti_r = poly_eval(anti, 0.5 * h)

    anchor = ng if anchor_cell is None else int(anchor_cell)
    p0 = np.zeros(n_tot)
    p0[anchor] = p_bg(centers[anchor])
    for j in range(anchor + 1, n_tot - r):
        p0[j] = p0[j - 1] + anti_r[j - 1] - anti_l[j]
    for j in range(anchor - 1, r - 1, -1):
        p0[j] = p0[j + 1] + anti_l[j + 1] - anti_r[j]
    if np.any(p0[r:n_tot - r] <= 0.0):
        raise InitializationError("negative propagated equilibrium pressure")

    def cell_energy(k, offsets, const):
        rho_n = poly_eval(rec_rho[k][None, :], offsets)
        p_n = const + poly_eval(anti[k][None, :], offsets)
        if np.any(p_n <= 0.0) or np.any(rho_n <= 0.0):
            raise InitializationError(
                f"negative equilibrium state while initializing cell {k}")
        return np.sum(weights * eos.internal_energy(rho_n, p_n)) / h

    for k in range(r, n_tot - r):
        data[2, k] = cell_energy(k, nodes, p0[k])
    for k in range(r):  # outermost ghosts: continue the innermost valid piece
        data[2, k] = cell_energy(r, (k - r) * h + nodes, p0[r])
        kk = n_tot - 1 - k
        data[2, kk] = cell_energy(n_tot - 1 - r,
                                  (kk - (n_tot - 1 - r)) * h + nodes,
                                  p0[n_tot - 1 - r])
    return CellField(grid, data)


def hydrostatic_residual(scenario, n_samples=64, seed=0, h=5e-5):
    """Max |dp/dx - rho g| / max(1, |rho g|) at random sample points.

    The pressure derivative comes from fourth-order central differences; the
    normalization keeps the gate meaningful for backgrounds spanning many
    orders of magnitude without changing it for order-one profiles.
    """
    rng = np.random.default_rng(seed)
    rho_bg, p_bg = scenario.background
    if scenario.dimension == 1:
        x0, x1 = scenario.domain
        x = rng.uniform(x0 + 2 * h, x1 - 2 * h, n_samples)
        dp = (-p_bg(x + 2 * h) + 8 * p_bg(x + h)
              - 8 * p_bg(x - h) + p_bg(x - 2 * h)) / (12 * h)
        force = rho_bg(x) * scenario.gravity(x)
        return float(np.max(np.abs(dp - force) / np.maximum(1.0, np.abs(force))))
    x0, x1, y0, y1 = scenario.domain
    x = rng.uniform(x0 + 2 * h, x1 - 2 * h, n_samples)
    y = rng.uniform(y0 + 2 * h, y1 - 2 * h, n_samples)

    def deriv(f, axis):
        def shift(s):
            return (x + s, y) if axis == 0 else (x, y + s)
        return (-f(*shift(2 * h)) + 8 * f(*shift(h))
                - 8 * f(*shift(-h)) + f(*shift(-2 * h))) / (12 * h)

    gx, gy = scenario.gravity(x, y)
    rho = rho_bg(x, y)
    res = np.hypot(deriv(p_bg, 0) - rho * gx, deriv(p_bg, 1) - rho * gy)
    return float(np.max(res / np.maximum(1.0, np.hypot(rho * gx, rho * gy))))


def potential_gradient_residual(scenario, n_samples=64, seed=1, h=2e-4):
    """Check g = -grad(phi) by fourth-order finite differences."""
    rng = np.random.default_rng(seed)
    if scenario.dimension == 1:
        x0, x1 = scenario.domain
        x = rng.uniform(x0 + 2 * h, x1 - 2 * h, n_samples)
        phi = scenario.potential
        dphi = (-phi(x + 2 * h) + 8 * phi(x + h)
                - 8 * phi(x - h) + phi(x - 2 * h)) / (12 * h)
        return float(np.max(np.abs(scenario.gravity(x) + dphi)))
    x0, x1, y0, y1 = scenario.domain
    x = rng.uniform(x0 + 2 * h, x1 - 2 * h, n_samples)
    y = rng.uniform(y0 + 2 * h, y1 - 2 * h, n_samples)
    phi = scenario.potential
    dpx = (-phi(x + 2 * h, y) + 8 * phi(x + h, y)
           - 8 * phi(x - h, y) + phi(x - 2 * h, y)) / (12 * h)
    dpy = (-phi(x, y + 2 * h) + 8 * phi(x, y + h)
           - 8 * phi(x, y - h) + phi(x, y - 2 * h)) / (12 * h)
    gx, gy = scenario.gravity(x, y)
    return float(np.max(np.hypot(gx + dpx, gy + dpy)))
