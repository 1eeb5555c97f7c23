"""Fast property suite behind the `check` CLI subcommand.

Each check prints one pass/fail line; the suite returns the number of
failures.  These mirror the library's core guarantees: contact property,
EoS round trips, quadrature exactness, reconstruction conservation,
anchor-solver agreement, and measured ODE orders.
"""

import numpy as np

from .eos import IdealGas, IdealGasRadiation
from .grid import Grid1D
from .integrate import RK5, SSPRK43, rk_step
from .physics import contact_property_check, hllc_flux, roe_flux, rusanov_flux
from .poly import poly_cell_average, poly_integrate
from .quadrature import gauss_legendre
from .reconstruct import Cweno1D
from .wellbalance import (
    anchor_pressure_ideal,
    anchor_pressure_newton,
    build_source_coeffs,
    EquilibriumProfile1D,
    monotonicity_probe,
)


def _measured_ode_order(tableau):
    errs = []
    for n in (40, 80):
        y = np.array([1.0])
        dt = 1.0 / n
        for _ in range(n):
            y = rk_step(y, dt, lambda v: -v, tableau)
        errs.append(abs(float(y[0]) - np.exp(-1.0)))
    return float(np.log2(errs[0] / errs[1]))


def run_checks(seed=0, trials=1000):
    eos = IdealGas(1.4)
    rad = IdealGasRadiation(1.4)
    rng = np.random.default_rng(seed)
    results = []

    def record(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    for name, flux in (("roe", roe_flux), ("hllc", hllc_flux)):
        for label, model in (("ideal", eos), ("radiation", rad)):
            rep = contact_property_check(flux, model, trials=trials, seed=seed)
            record(f"contact property {name}/{label}", rep["ok"],
                   f"max deviation {rep['max_deviation']:.2e}")
    rep = contact_property_check(rusanov_flux, eos, trials=trials, seed=seed)
    record("rusanov lacks contact property (control)", not rep["ok"],
           f"max deviation {rep['max_deviation']:.2e}")

    # quadrature exactness through degree 2n-1
    ok = True
    worst = 0.0
    for order in range(1, 6):
        nodes, weights = gauss_legendre(order, (-0.3, 1.1))
        for _ in range(10):
            coeffs = rng.standard_normal(2 * order)
            quad = float(np.sum(weights * np.polynomial.polynomial.polyval(nodes, coeffs)))
            exact = float(poly_integrate(coeffs, -0.3, 1.1))
            dev = abs(quad - exact) / max(abs(exact), 1.0)
            worst = max(worst, dev)
            ok &= dev < 1e-13
    record("gauss-legendre exactness (deg <= 2n-1)", ok, f"max rel dev {worst:.2e}")

    # CWENO mean conservation and linear reproduction
    ok = True
    for order in (3, 5):
        scheme = Cweno1D(order, 0.02)
        data = rng.standard_normal((40,))
        coeffs = scheme.coefficients(data)
        r = scheme.radius
        means = poly_cell_average(coeffs[r:-r], 0.02)
        ok &= np.allclose(means, data[r:-r], rtol=1e-13, atol=1e-13)
        lin = scheme.reconstruct_stencils((np.arange(order) - r) * 0.02)
        ok &= abs(lin[1] - 1.0) < 1e-12
    record("cweno mean conservation + linear reproduction", ok)

    # EoS round trips and derivative consistency
    rho = 10.0 ** rng.uniform(-6, 6, 100)
    t = 10.0 ** rng.uniform(-3, 3, 100)
    p = rho * t + t ** 4
    ok = np.allclose(rad.pressure(rho, rad.internal_energy(rho, p)), p, rtol=1e-12)
    record("radiation EoS round trip <= 1e-12", ok)
    p_s = 10.0 ** rng.uniform(-2, 2, 20)
    rho_s = 10.0 ** rng.uniform(-2, 2, 20)
    delta = 1e-6 * p_s
    fd = (rad.internal_energy(rho_s, p_s + delta)
          - rad.internal_energy(rho_s, p_s - delta)) / (2 * delta)
    ok = np.allclose(rad.deps_dp(rho_s, p_s), fd, rtol=1e-6)
    record("deps_dp matches finite differences <= 1e-6", ok)

    # Newton anchor equals the ideal-gas closed form
    grid = Grid1D(0.0, 1.0, 32, 2)
    h = grid.dx
    centers = grid.centers()
    cweno = Cweno1D(3, h)
    rho_coeffs = cweno.coefficients(np.exp(-2.0 * centers))
    g_coeffs = np.zeros((grid.n_tot, 3))
    g_coeffs[:, 0] = -2.0
    source = build_source_coeffs(rho_coeffs, g_coeffs)
    profile = EquilibriumProfile1D(grid, eos, rho_coeffs, source, piecewise=False)
    from .quadrature import gauss_nodes_weights_centered
    nodes, weights = gauss_nodes_weights_centered(2, h)
    eps_hat = np.exp(-2.0 * centers) / (eos.gamma - 1.0)
    p_ideal = anchor_pressure_ideal(profile.anti, h, eps_hat, eos.gamma,
                                    nodes, weights)
    p_newton, conv = anchor_pressure_newton(
        profile.anti, profile.rho_coeffs, h, eps_hat, eos, nodes, weights,
        rho_hat=np.exp(-2.0 * centers))
    inner = slice(1, -1)
    ok = np.all(conv[inner]) and np.allclose(p_newton[inner], p_ideal[inner],
                                             rtol=1e-12, atol=1e-12)
    record("newton anchor == ideal closed form <= 1e-12", ok)

    # monotonicity probe: positive Grueneisen for both EoS models
    profile.p0 = np.abs(p_ideal) + 0.5
    ok = monotonicity_probe(profile, 10, eos) and monotonicity_probe(profile, 10, rad)
    record("anchor-residual monotonicity (ideal + radiation)", ok)

    order3 = _measured_ode_order(SSPRK43)
    order5 = _measured_ode_order(RK5)
    record("rk3 measured ODE order", abs(order3 - 3.0) < 0.15, f"{order3:.3f}")
    record("rk5 measured ODE order", abs(order5 - 5.0) < 0.15, f"{order5:.3f}")

    return results


def main(seed=0, trials=1000, stream=None):
    import sys

    stream = stream or sys.stdout
    failures = 0
    for name, ok, detail in run_checks(seed=seed, trials=trials):
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        suffix = f"  ({detail})" if detail else ""
        print(f"[{status}] {name}{suffix}", file=stream)
    return failures
