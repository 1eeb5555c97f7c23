"""Numerical fluxes, wall fluxes, and gravitational source averages.

Flux functions act on conserved states stacked on the leading axis with the
NORMAL momentum as component 1; 2-D callers permute components for
y-direction faces.  All fluxes are consistent, Lipschitz, and - except for
the Rusanov control - satisfy the contact property: a stationary contact
(u = 0, equal pressure) returns exactly (0, p, 0[, 0]).
"""

import numpy as np

from .errors import FluxEvaluationError
from .poly import poly_cell_average, poly_mul


def _momentum_order(n_comp, normal):
    """Momentum component indices, normal first."""
    momenta = list(range(1, n_comp - 1))
    if normal != 1:
        momenta.remove(normal)
        momenta.insert(0, normal)
    return momenta


def split_conserved(q, eos, normal=1):
    """Conserved -> (rho, velocities, pressure). Raises on non-physical input.

    `normal` selects which momentum component faces the interface; the
    returned velocity list starts with it.
    """
    q = np.asarray(q, dtype=float)
    rho = q[0]
    if np.any(~np.isfinite(rho)) or np.any(rho <= 0.0):
        raise FluxEvaluationError("non-positive or non-finite density in flux input")
    vel = [q[m] / rho for m in _momentum_order(q.shape[0], normal)]
    eps = q[-1] - 0.5 * rho * sum(v * v for v in vel)
    if np.any(eps <= 0.0):
        raise FluxEvaluationError("non-positive internal energy in flux input")
    return rho, vel, eos.pressure(rho, eps)


def physical_flux(q, p, normal=1):
    """Euler flux along the chosen normal momentum component."""
    q = np.asarray(q, dtype=float)
    rho = q[0]
    u = q[normal] / rho
    out = np.empty_like(q)
    out[0] = q[normal]
    for k in range(1, q.shape[0] - 1):
        out[k] = q[k] * u
    out[normal] += p
    out[-1] = (q[-1] + p) * u
    return out


def _roe_averages(q_l, q_r, p_l, p_r, eos, normal=1):
    rho_l, rho_r = q_l[0], q_r[0]
    sq_l, sq_r = np.sqrt(rho_l), np.sqrt(rho_r)
    norm = sq_l + sq_r
    vel_hat = [(sq_l * q_l[k] / rho_l + sq_r * q_r[k] / rho_r) / norm
               for k in _momentum_order(q_l.shape[0], normal)]
    h_l = (q_l[-1] + p_l) / rho_l
    h_r = (q_r[-1] + p_r) / rho_r
    h_hat = (sq_l * h_l + sq_r * h_r) / norm
    return np.sqrt(rho_l * rho_r), vel_hat, h_hat


def roe_flux(q_l, q_r, eos, entropy_fix=0.0, normal=1):
    """Roe-type flux; the classic linearization for ideal gas, and a
    general-EoS variant with the effective sound speed evaluated at the
    arithmetic-average state otherwise."""
    q_l = np.asarray(q_l, dtype=float)
    q_r = np.asarray(q_r, dtype=float)
    rho_l, vel_l, p_l = split_conserved(q_l, eos, normal)
    rho_r, vel_r, p_r = split_conserved(q_r, eos, normal)
    rho_hat, vel_hat, h_hat = _roe_averages(q_l, q_r, p_l, p_r, eos, normal)
    u_hat = vel_hat[0]
    ke_hat = 0.5 * sum(v * v for v in vel_hat)

    if eos.name == "ideal":
        c2 = (eos.gamma - 1.0) * (h_hat - ke_hat)
        eps_rho = 0.0
    else:
        rho_bar = 0.5 * (rho_l + rho_r)
        p_bar = 0.5 * (p_l + p_r)
        c2 = eos.sound_speed(rho_bar, p_bar) ** 2
        eps_rho = eos.deps_drho(rho_bar, p_bar)
    c = np.sqrt(c2)

    dp = p_r - p_l
    du = vel_r[0] - vel_l[0]
    drho = rho_r - rho_l
    alpha_minus = (dp - rho_hat * c * du) / (2.0 * c2)
    alpha_contact = drho - dp / c2
    alpha_plus = (dp + rho_hat * c * du) / (2.0 * c2)

    lam_minus = np.abs(u_hat - c)
    lam_contact = np.abs(u_hat)
    lam_plus = np.abs(u_hat + c)
    if entropy_fix > 0.0:
        delta = entropy_fix * c
        fix = lambda lam: np.where(lam < delta, (lam * lam + delta * delta) / (2 * delta), lam)
        lam_minus, lam_contact, lam_plus = fix(lam_minus), fix(lam_contact), fix(lam_plus)

    ncomp = q_l.shape[0]
    order = _momentum_order(ncomp, normal)
    diss = np.zeros_like(q_l)

    def add_wave(lam, alpha, r_vec):
        # r_vec lists (mass, normal momentum, transverse..., energy)
        contrib = lam * alpha
        diss[0] += contrib * r_vec[0]
        for k, comp in enumerate(order):
            diss[comp] += contrib * r_vec[1 + k]
        diss[-1] += contrib * r_vec[-1]

    add_wave(lam_minus, alpha_minus,
             [1.0, u_hat - c] + vel_hat[1:] + [h_hat - u_hat * c])
    add_wave(lam_contact, alpha_contact,
             [1.0, u_hat] + vel_hat[1:] + [ke_hat + eps_rho])
    for k in range(1, ncomp - 2):  # shear waves carry transverse momentum jumps
        dw = vel_r[k] - vel_l[k]
        r_vec = [0.0] * ncomp
        r_vec[1 + k] = 1.0
        r_vec[-1] = vel_hat[k]
        add_wave(lam_contact, rho_hat * dw, r_vec)
    add_wave(lam_plus, alpha_plus,
             [1.0, u_hat + c] + vel_hat[1:] + [h_hat + u_hat * c])

    return 0.5 * (physical_flux(q_l, p_l, normal)
                  + physical_flux(q_r, p_r, normal)) - 0.5 * diss


def hllc_flux(q_l, q_r, eos, normal=1):
    """HLLC flux with Einfeldt-type wave-speed bounds from Roe averages."""
    q_l = np.asarray(q_l, dtype=float)
    q_r = np.asarray(q_r, dtype=float)
    rho_l, vel_l, p_l = split_conserved(q_l, eos, normal)
    rho_r, vel_r, p_r = split_conserved(q_r, eos, normal)
    u_l, u_r = vel_l[0], vel_r[0]
    c_l = eos.sound_speed(rho_l, p_l)
    c_r = eos.sound_speed(rho_r, p_r)
    rho_hat, vel_hat, h_hat = _roe_averages(q_l, q_r, p_l, p_r, eos, normal)
    if eos.name == "ideal":
        c_hat = np.sqrt((eos.gamma - 1.0) *
                        (h_hat - 0.5 * sum(v * v for v in vel_hat)))
    else:
        c_hat = eos.sound_speed(0.5 * (rho_l + rho_r), 0.5 * (p_l + p_r))
    s_l = np.minimum(u_l - c_l, vel_hat[0] - c_hat)
    s_r = np.maximum(u_r + c_r, vel_hat[0] + c_hat)

    denom = rho_l * (s_l - u_l) - rho_r * (s_r - u_r)
    s_star = (p_r - p_l + rho_l * u_l * (s_l - u_l)
              - rho_r * u_r * (s_r - u_r)) / denom

    def star_state(q, rho, u, p, s):
        factor = rho * (s - u) / (s - s_star)
        out = np.empty_like(q)
        out[0] = factor
        for k in range(1, q.shape[0] - 1):
            out[k] = factor * q[k] / rho
        out[normal] = factor * s_star
        out[-1] = factor * (q[-1] / rho
                            + (s_star - u) * (s_star + p / (rho * (s - u))))
        return out

    f_l = physical_flux(q_l, p_l, normal)
    f_r = physical_flux(q_r, p_r, normal)
    f_star_l = f_l + s_l * (star_state(q_l, rho_l, u_l, p_l, s_l) - q_l)
    f_star_r = f_r + s_r * (star_state(q_r, rho_r, u_r, p_r, s_r) - q_r)

    out = np.where(s_l >= 0.0, f_l,
                   np.where(s_star >= 0.0, f_star_l,
                            np.where(s_r >= 0.0, f_star_r, f_r)))
    return out


def rusanov_flux(q_l, q_r, eos, normal=1):
    """Local Lax-Friedrichs flux; no contact property (negative control)."""
    q_l = np.asarray(q_l, dtype=float)
    q_r = np.asarray(q_r, dtype=float)
    rho_l, vel_l, p_l = split_conserved(q_l, eos, normal)
    rho_r, vel_r, p_r = split_conserved(q_r, eos, normal)
    s = np.maximum(np.abs(vel_l[0]) + eos.sound_speed(rho_l, p_l),
                   np.abs(vel_r[0]) + eos.sound_speed(rho_r, p_r))
    return 0.5 * (physical_flux(q_l, p_l, normal) + physical_flux(q_r, p_r, normal)) \
        - 0.5 * s * (q_r - q_l)


FLUXES = {"roe": roe_flux, "hllc": hllc_flux, "rusanov": rusanov_flux}


def get_flux(name):
    if name not in FLUXES:
        raise ValueError(f"unknown flux {name!r}; expected one of {sorted(FLUXES)}")
    return FLUXES[name]


def wall_boundary_flux(q_state, eos, flux_fn, side, normal=1):
    """Solid-wall flux from the wall-side reconstructed state.

    Mirrors the normal momentum; mass and energy components vanish by the
    symmetry of the flux, the momentum component is the wall pressure.
    """
    q_state = np.asarray(q_state, dtype=float)
    mirrored = q_state.copy()
    mirrored[normal] = -mirrored[normal]
    if side == "left":  # wall on the left: ghost state first
        return flux_fn(mirrored, q_state, eos, normal=normal)
    return flux_fn(q_state, mirrored, eos, normal=normal)


def contact_property_check(flux_fn, eos, trials=1000, seed=0, tol=1e-13):
    """Randomized stationary-contact trials; returns a small report dict."""
    rng = np.random.default_rng(seed)
    rho_l = 10.0 ** rng.uniform(-2, 2, trials)
    rho_r = 10.0 ** rng.uniform(-2, 2, trials)
    p = 10.0 ** rng.uniform(-2, 2, trials)
    zeros = np.zeros(trials)
    q_l = np.stack([rho_l, zeros, eos.internal_energy(rho_l, p)])
    q_r = np.stack([rho_r, zeros, eos.internal_energy(rho_r, p)])
    flux = flux_fn(q_l, q_r, eos)
    dev = np.max(np.abs(flux - np.stack([zeros, p, zeros])) / np.maximum(p, 1.0),
                 axis=0)
    return {
        "trials": trials,
        "max_deviation": float(np.max(dev)),
        "passed": int(np.sum(dev <= tol)),
        "ok": bool(np.all(dev <= tol)),
    }


# ---------------------------------------------------------------------------
# Gravitational source-term cell averages (exact polynomial integration)
# ---------------------------------------------------------------------------

def source_average_1d(rho_coeffs, rhou_coeffs, g_coeffs, dx):
    """Cell-averaged (mass, momentum, energy) source.

    Momentum: mean of rho_rec * g_int over the cell.  Energy: the density in
    (rho*u)/rho * rho*g cancels, leaving the exact polynomial integral of
    (rho*u)_rec * g_int.  Mass source is zero.
    """
    rho_coeffs = np.asarray(rho_coeffs)
    mom = poly_cell_average(poly_mul(rho_coeffs, g_coeffs), dx)
    energy = poly_cell_average(poly_mul(rhou_coeffs, g_coeffs), dx)
    out = np.zeros((3,) + mom.shape)
    out[1] = mom
    out[2] = energy
    return out


def source_average_2d(rho_c, rhou_c, rhov_c, gx_c, gy_c, exps, hx, hy,
                      exps_g=None):
    """Cell-averaged (mass, x-mom, y-mom, energy) source in 2-D.

    All integrands are polynomial products, integrated exactly by monomial
    moments.  `exps` indexes the reconstruction coefficients, `exps_g` the
    gravity interpolants (defaults to `exps`).
    """
    from .poly import poly2_cell_average, poly2_mul

    exps_g = exps if exps_g is None else exps_g
    sx, e_sx = poly2_mul(rho_c, exps, gx_c, exps_g)
    sy, e_sy = poly2_mul(rho_c, exps, gy_c, exps_g)
    ex_e, e_ex = poly2_mul(rhou_c, exps, gx_c, exps_g)
    ey_e, e_ey = poly2_mul(rhov_c, exps, gy_c, exps_g)
    mom_x = poly2_cell_average(sx, e_sx, hx, hy)
    mom_y = poly2_cell_average(sy, e_sy, hx, hy)
    energy = poly2_cell_average(ex_e, e_ex, hx, hy) \
        + poly2_cell_average(ey_e, e_ey, hx, hy)
    out = np.zeros((4,) + mom_x.shape)
    out[1] = mom_x
    out[2] = mom_y
    out[3] = energy
    return out
