import numpy as np
import pytest

from hydrobal.poly import (
    LocalPolynomial,
    LocalPolynomial2D,
    monomials_total_degree,
    poly2_cell_average,
    poly2_mul,
    poly_cell_average,
    poly_eval,
    poly_integrate,
    poly_line_integral_2d,
    poly_mul,
)


def test_constant_integral():
    p = LocalPolynomial(0.0, [1.0])
    assert p.integrate(0.0, 0.1) == pytest.approx(0.1)


def test_odd_symmetry():
    # p(x) = (x - x_i) integrated symmetrically around the anchor
    p = LocalPolynomial(0.7, [0.0, 1.0])
    h = 0.31
    assert p.integrate(0.7 - h, 0.7 + h) == pytest.approx(0.0, abs=1e-16)


def test_monomial_antiderivative():
    p = LocalPolynomial(2.0, [0.0, 0.0, 1.0])  # (x - 2)^2
    h = 0.25
    assert p.integrate(2.0, 2.0 + h) == pytest.approx(h ** 3 / 3.0)


def test_extrapolated_integration_is_legal():
    coeffs = np.array([1.0, -2.0, 0.5])
    far = poly_integrate(coeffs, 3.0, 5.0)
    brute = np.trapezoid(poly_eval(coeffs, np.linspace(3, 5, 20001)),
                         np.linspace(3, 5, 20001))
    assert far == pytest.approx(brute, rel=1e-8)


def test_poly_mul_matches_numpy():
    rng = np.random.default_rng(7)
    c1 = rng.standard_normal((4, 3))
    c2 = rng.standard_normal((4, 5))
    prod = poly_mul(c1, c2)
    for i in range(4):
        np.testing.assert_allclose(prod[i], np.polynomial.polynomial.polymul(c1[i], c2[i]))


def test_cell_average_examples():
    assert poly_cell_average(np.array([3.0]), 0.2) == pytest.approx(3.0)
    assert poly_cell_average(np.array([0.0, 1.0]), 0.2) == pytest.approx(0.0, abs=1e-16)


def test_cell_average_2d_square():
    # mean of (x - x_i)^2 over an h-square: tensor antiderivative gives h^2/12
    h = 0.37
    exps = monomials_total_degree(2)
    coeffs = np.zeros(len(exps))
    coeffs[exps.index((2, 0))] = 1.0
    assert poly2_cell_average(coeffs, exps, h, h) == pytest.approx(h ** 2 / 12.0)


def test_cell_average_2d_neighbor_offset():
    # brute-force tensor quadrature oracle on a shifted cell
    rng = np.random.default_rng(11)
    exps = monomials_total_degree(3)
    coeffs = rng.standard_normal(len(exps))
    hx, hy = 0.1, 0.2
    off = (0.3, -0.15)
    xs = np.linspace(off[0] - hx / 2, off[0] + hx / 2, 801)
    ys = np.linspace(off[1] - hy / 2, off[1] + hy / 2, 801)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    vals = np.zeros_like(xx)
    for m, (a, b) in enumerate(exps):
        vals += coeffs[m] * xx ** a * yy ** b
    brute = np.trapezoid(np.trapezoid(vals, ys, axis=1), xs) / (hx * hy)
    assert poly2_cell_average(coeffs, exps, hx, hy, off) == pytest.approx(brute, rel=1e-6)


def test_poly2_mul_pointwise():
    rng = np.random.default_rng(3)
    e1 = monomials_total_degree(2)
    e2 = monomials_total_degree(2)
    c1 = rng.standard_normal(len(e1))
    c2 = rng.standard_normal(len(e2))
    prod, exps = poly2_mul(c1, e1, c2, e2)
    pts = rng.standard_normal((20, 2))
    p1 = LocalPolynomial2D((0, 0), c1, e1)
    p2 = LocalPolynomial2D((0, 0), c2, e2)
    pp = LocalPolynomial2D((0, 0), prod, exps)
    np.testing.assert_allclose(pp(pts[:, 0], pts[:, 1]),
                               p1(pts[:, 0], pts[:, 1]) * p2(pts[:, 0], pts[:, 1]),
                               rtol=1e-12, atol=1e-12)


class TestLineIntegral2D:
    def _poly(self, coeffs, exps):
        return LocalPolynomial2D((0.0, 0.0), coeffs, exps)

    def test_constant_along_path(self):
        exps = [(0, 0)]
        sx = self._poly([-1.0], exps)
        sy = self._poly([0.0], exps)
        h = 0.42
        assert poly_line_integral_2d(sx, sy, (0, 0), (h, 0)) == pytest.approx(-h)

    def test_orthogonal_path(self):
        exps = [(0, 0)]
        sx = self._poly([0.0], exps)
        sy = self._poly([-1.0], exps)
        assert poly_line_integral_2d(sx, sy, (0, 0), (0.3, 0)) == pytest.approx(0.0)

    def test_linear_field_hand_oracle(self):
        # s = (-x, -y) from (0,0) to (1,1): integral of (-t - t) dt = -1
        exps = [(0, 0), (1, 0), (0, 1)]
        sx = self._poly([0.0, -1.0, 0.0], exps)
        sy = self._poly([0.0, 0.0, -1.0], exps)
        assert poly_line_integral_2d(sx, sy, (0, 0), (1, 1)) == pytest.approx(-1.0)

    def test_path_split_exactness(self):
        rng = np.random.default_rng(5)
        exps = monomials_total_degree(3)
        sx = self._poly(rng.standard_normal(len(exps)), exps)
        sy = self._poly(rng.standard_normal(len(exps)), exps)
        end = np.array([0.8, -0.6])
        whole = poly_line_integral_2d(sx, sy, (0, 0), end)
        for t in (0.25, 0.5, 0.9):
            mid = t * end
            # second leg must be re-anchored at `mid` for the same field
            shifted_sx = LocalPolynomial2D(mid, _shift2(sx, mid), exps)
            shifted_sy = LocalPolynomial2D(mid, _shift2(sy, mid), exps)
            split = poly_line_integral_2d(sx, sy, (0, 0), mid) \
                + poly_line_integral_2d(shifted_sx, shifted_sy, mid, end)
            assert split == pytest.approx(whole, abs=1e-14)


def _shift2(p, new_anchor):
    """Re-expand a 2-D polynomial about a new anchor (binomial expansion)."""
    from math import comb

    dx, dy = np.asarray(new_anchor, dtype=float) - p.anchor
    out = np.zeros_like(p.coeffs)
    index = {ab: m for m, ab in enumerate(p.exps)}
    for m, (a, b) in enumerate(p.exps):
        for i in range(a + 1):
            for j in range(b + 1):
                out[index[(i, j)]] += (p.coeffs[m] * comb(a, i) * comb(b, j)
                                       * dx ** (a - i) * dy ** (b - j))
    return out
