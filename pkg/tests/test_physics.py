import numpy as np
import pytest

from hydrobal.eos import IdealGas, IdealGasRadiation
from hydrobal.errors import FluxEvaluationError
from hydrobal.physics import (
    contact_property_check,
    hllc_flux,
    physical_flux,
    roe_flux,
    rusanov_flux,
    source_average_1d,
    source_average_2d,
    split_conserved,
    wall_boundary_flux,
)
from hydrobal.poly import monomials_total_degree


def conserved(rho, u, p, eos):
    return np.stack(np.broadcast_arrays(
        rho, np.asarray(rho) * u, eos.internal_energy(rho, p) + 0.5 * np.asarray(rho) * u ** 2))


def random_states(rng, n, eos):
    rho = 10.0 ** rng.uniform(-1, 1, n)
    u = rng.uniform(-2, 2, n)
    p = 10.0 ** rng.uniform(-1, 1, n)
    return conserved(rho, u, p, eos)


@pytest.mark.parametrize("flux_fn", [roe_flux, hllc_flux, rusanov_flux])
@pytest.mark.parametrize("eos", [IdealGas(1.4), IdealGasRadiation(1.4)])
def test_consistency(flux_fn, eos):
    rng = np.random.default_rng(1)
    q = random_states(rng, 50, eos)
    rho, vel, p = split_conserved(q, eos)
    np.testing.assert_allclose(flux_fn(q, q, eos), physical_flux(q, p),
                               rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("flux_fn", [roe_flux, hllc_flux])
def test_contact_example(flux_fn):
    eos = IdealGas(1.4)
    q_l = conserved(1.0, 0.0, 1.0, eos)
    q_r = conserved(2.0, 0.0, 1.0, eos)
    np.testing.assert_allclose(flux_fn(q_l, q_r, eos), [0.0, 1.0, 0.0], atol=1e-15)


@pytest.mark.parametrize("flux_name,flux_fn", [("roe", roe_flux), ("hllc", hllc_flux)])
@pytest.mark.parametrize("eos", [IdealGas(1.4), IdealGasRadiation(1.4)])
def test_contact_property_randomized(flux_name, flux_fn, eos):
    report = contact_property_check(flux_fn, eos, trials=1000, seed=7)
    assert report["ok"], report


def test_rusanov_fails_contact():
    report = contact_property_check(rusanov_flux, IdealGas(1.4), trials=200, seed=3)
    assert not report["ok"]
    # dissipation acts on the density jump -> nonzero mass flux
    eos = IdealGas(1.4)
    f = rusanov_flux(conserved(1.0, 0.0, 1.0, eos), conserved(2.0, 0.0, 1.0, eos), eos)
    assert abs(f[0]) > 1e-3


@pytest.mark.parametrize("flux_fn", [roe_flux, hllc_flux, rusanov_flux])
def test_reflection_symmetry(flux_fn):
    # F(L, R) equals the mirrored flux of the reflected pair with negated momentum
    eos = IdealGas(1.4)
    rng = np.random.default_rng(5)
    q_l = random_states(rng, 40, eos)
    q_r = random_states(rng, 40, eos)
    forward = flux_fn(q_l, q_r, eos)
    mirror = lambda q: np.stack([q[0], -q[1], q[2]])
    backward = flux_fn(mirror(q_r), mirror(q_l), eos)
    np.testing.assert_allclose(forward[0], -backward[0], rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(forward[1], backward[1], rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(forward[2], -backward[2], rtol=1e-12, atol=1e-13)


def test_nonphysical_input_raises():
    eos = IdealGas(1.4)
    good = conserved(1.0, 0.0, 1.0, eos)
    bad = np.array([-1.0, 0.0, 1.0])
    with pytest.raises(FluxEvaluationError):
        roe_flux(bad, good, eos)


def test_wall_flux_at_rest_is_pure_pressure():
    eos = IdealGas(1.4)
    q = conserved(1.3, 0.0, 0.7, eos)
    for side in ("left", "right"):
        f = wall_boundary_flux(q, eos, roe_flux, side)
        np.testing.assert_allclose(f, [0.0, 0.7, 0.0], atol=1e-15)


def test_wall_flux_zero_mass_flux_random_states():
    eos = IdealGas(1.4)
    rng = np.random.default_rng(11)
    q = random_states(rng, 60, eos)
    for side in ("left", "right"):
        f = wall_boundary_flux(q, eos, roe_flux, side)
        np.testing.assert_allclose(f[0], 0.0, atol=1e-14)
        np.testing.assert_allclose(f[2], 0.0, atol=1e-14)


def test_roe_2d_contact_and_consistency():
    eos = IdealGas(1.4)
    rho_l, rho_r, p = 1.0, 3.0, 0.8
    make = lambda rho: np.array([rho, 0.0, 0.0, eos.internal_energy(rho, p)])
    f = roe_flux(make(rho_l), make(rho_r), eos)
    np.testing.assert_allclose(f, [0.0, p, 0.0, 0.0], atol=1e-15)
    q = np.array([1.2, 0.3, -0.4, 3.0])
    rho, vel, pr = split_conserved(q, eos)
    np.testing.assert_allclose(roe_flux(q, q, eos), physical_flux(q, pr), atol=1e-14)


class TestSourceAverages:
    def test_uniform_state(self):
        # rho=1, u=0, g=-1 over any cell
        s = source_average_1d(np.array([1.0]), np.array([0.0]), np.array([-1.0]), 0.1)
        np.testing.assert_allclose(np.ravel(s), [0.0, -1.0, 0.0])

    def test_constant_velocity(self):
        s = source_average_1d(np.array([1.0]), np.array([0.7]), np.array([-1.0]), 0.1)
        assert s[2] == pytest.approx(-0.7)

    def test_isothermal_profile_order(self):
        # rho = exp(-sin(2 pi x)), g = -2 pi cos(2 pi x): then rho*g is the
        # derivative of exp(-sin(2 pi x)), so the exact cell-averaged source
        # is a difference of that antiderivative at the cell edges
        from hydrobal.reconstruct import Cweno1D, GravityInterp1D

        errors = []
        for n in (32, 64, 128):
            h = 1.0 / n
            edges = np.linspace(0, 1, n + 1)
            nodes, weights = np.polynomial.legendre.leggauss(10)
            xq = edges[:-1, None] + 0.5 * h * (nodes[None, :] + 1.0)
            avgs = 0.5 * np.sum(weights * np.exp(-np.sin(2 * np.pi * xq)), axis=1)
            coeffs = Cweno1D(3, h).coefficients(avgs)
            centers = (np.arange(n) + 0.5) * h
            g = GravityInterp1D(3, h).coefficients(
                -2 * np.pi * np.cos(2 * np.pi * centers))
            s = source_average_1d(coeffs, np.zeros_like(coeffs), g, h)
            exact = np.diff(np.exp(-np.sin(2 * np.pi * edges))) / h
            errors.append(np.max(np.abs(s[1][1:-1] - exact[1:-1])))
        rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert rates[-1] > 2.5

    def test_2d_uniform(self):
        exps = monomials_total_degree(2)
        c0 = np.zeros(len(exps))
        rho = c0.copy()
        rho[0] = 2.0
        rhov = c0.copy()
        rhov[0] = 0.6
        gy = c0.copy()
        gy[0] = -1.0
        s = source_average_2d(rho, c0, rhov, c0, gy, exps, 0.1, 0.1)
        np.testing.assert_allclose(np.ravel(s), [0.0, 0.0, -2.0, -0.6])

    def test_2d_zero_gravity(self):
        exps = monomials_total_degree(2)
        rng = np.random.default_rng(2)
        c = rng.standard_normal((5, len(exps)))
        zero = np.zeros(len(exps))
        s = source_average_2d(c[0], c[1], c[2], zero, zero, exps, 0.1, 0.2)
        np.testing.assert_allclose(s, 0.0, atol=1e-15)
