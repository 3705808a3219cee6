"""Quadrature, Nystrom, determinant and Cauchy-transform oracles."""

import numpy as np
import pytest

from bosegas.numerics import (Contour, NumericsError, SampledFunction,
                              cauchy_transform, cauchy_transform_line,
                              cauchy_transform_line_deriv, composite_grid,
                              fredholm_det, fredholm_logdet,
                              gauss_legendre_grid, graded_breakpoints,
                              nystrom_solve)


class TestGrids:
    def test_polynomial_exactness(self):
        grid = gauss_legendre_grid(8, -1.0, 2.0)
        # 8-point rule integrates degree 15 exactly
        vals = grid.nodes ** 15
        exact = (2.0 ** 16 - 1.0) / 16.0
        assert abs(np.sum(grid.weights * vals) - exact) < 1e-12 * abs(exact)

    def test_composite_integral(self):
        grid = composite_grid([0.0, 0.3, 1.0], 16)
        val = np.sum(grid.weights * np.exp(grid.nodes))
        assert abs(val - (np.e - 1.0)) < 1e-14

    def test_interpolation_off_grid(self):
        grid = composite_grid([-1.0, 0.0, 1.0], 20)
        f = grid.sample(np.sin)
        x = np.array([-0.7, -0.1, 0.45, 0.99])
        assert np.max(np.abs(f(x) - np.sin(x))) < 1e-13

    def test_spectral_derivative(self):
        grid = composite_grid([-1.0, 0.0, 1.0], 20)
        der = grid.derivative(np.sin(grid.nodes))
        assert np.max(np.abs(der - np.cos(grid.nodes))) < 1e-11

    def test_sampled_function_integral(self):
        grid = composite_grid([0.0, 2.0], 24)
        f = SampledFunction(grid, grid.nodes ** 2)
        assert abs(f.integral() - 8.0 / 3.0) < 1e-13

    def test_invalid_breakpoints(self):
        with pytest.raises(ValueError):
            composite_grid([0.0, 0.0, 1.0])
        with pytest.raises(ValueError):
            gauss_legendre_grid(4, 1.0, 0.0)

    def test_graded_breakpoints(self):
        bp = graded_breakpoints(-2.0, 2.0, [1.0], 0.01, factor=2.0)
        assert bp[0] == -2.0 and bp[-1] == 2.0
        assert np.any(np.isclose(bp, 1.0))
        assert np.all(np.diff(bp) > 0)
        # finest panels sit next to the center
        widths = np.diff(bp)
        at_center = np.argmin(np.abs(bp[:-1] - 1.0))
        assert widths[at_center] <= 2.0 * 0.01


class TestContour:
    def test_cauchy_integral_inside(self):
        cont = Contour.ellipse(0.0, 2.0, 1.0, 128)
        val = np.sum(cont.weights / (cont.nodes - 0.3 - 0.2j))
        assert abs(val - 2.0j * np.pi) < 1e-12

    def test_analytic_integrates_to_zero(self):
        cont = Contour.ellipse(0.0, 2.0, 1.0, 128)
        val = np.sum(cont.weights * np.exp(cont.nodes))
        assert abs(val) < 1e-12

    def test_pole_outside_gives_zero(self):
        cont = Contour.ellipse(0.0, 1.0, 0.5, 128)
        val = np.sum(cont.weights / (cont.nodes - 3.0))
        assert abs(val) < 1e-12


class TestNystrom:
    def test_constant_kernel_closed_form(self):
        # f - (1/2pi) int_a^b f dy = 1 has the constant solution
        a, b = -1.0, 1.0
        grid = composite_grid([a, b], 24)
        one = lambda x: np.ones_like(np.asarray(x, dtype=float))
        kern = lambda x, y: np.ones_like(x * y)
        sol = nystrom_solve(kern, grid.sample(one), sign=1, rhs_fn=one)
        expected = 1.0 / (1.0 - (b - a) / (2.0 * np.pi))
        assert np.max(np.abs(sol.values - expected)) < 1e-12
        # off-grid evaluation via the natural Nystrom formula
        assert abs(sol(0.123) - expected) < 1e-12

    def test_sign_flip(self):
        a, b = 0.0, 1.0
        grid = composite_grid([a, b], 16)
        one = lambda x: np.ones_like(np.asarray(x, dtype=float))
        kern = lambda x, y: np.ones_like(x * y)
        sol = nystrom_solve(kern, grid.sample(one), sign=-1, rhs_fn=one)
        expected = 1.0 / (1.0 + (b - a) / (2.0 * np.pi))
        assert np.max(np.abs(sol.values - expected)) < 1e-12

    def test_separable_kernel(self):
        # K(x,y) = cos x cos y: solution f = 1 + c cos x with c from the
        # projected scalar equation
        grid = composite_grid([-1.0, 1.0], 32)
        one = lambda x: np.ones_like(np.asarray(x, dtype=float))
        kern = lambda x, y: np.cos(x) * np.cos(y)
        sol = nystrom_solve(kern, grid.sample(one), sign=1, rhs_fn=one)
        i_c = 2.0 * np.sin(1.0)                       # int cos
        i_cc = 1.0 + 0.5 * np.sin(2.0)                # int cos^2
        c = (i_c / (2.0 * np.pi)) / (1.0 - i_cc / (2.0 * np.pi))
        assert np.max(np.abs(sol.values - (1.0 + c * np.cos(grid.nodes)))) \
            < 1e-12


class TestFredholm:
    def test_separable_determinant(self):
        # det(I + p uv^T) = 1 + p int u v
        grid = composite_grid([0.0, 1.0], 24)
        kern = lambda x, y: np.exp(x) * np.sin(np.pi * y)
        p = 0.37
        det = fredholm_det(kern, grid, prefactor=p)
        exact = 1.0 + p * np.sum(grid.weights * np.exp(grid.nodes)
                                 * np.sin(np.pi * grid.nodes))
        assert abs(det - exact) < 1e-12

    def test_logdet_consistency(self):
        grid = composite_grid([-1.0, 1.0], 20)
        kern = lambda x, y: 1.0 / ((x - y) ** 2 + 4.0)
        det = fredholm_det(kern, grid, prefactor=0.5)
        logdet = fredholm_logdet(kern, grid, prefactor=0.5)
        assert abs(np.exp(logdet) - det) < 1e-12 * abs(det)

    def test_contour_determinant_of_analytic_kernel(self):
        # analytic kernel integrates to zero around a closed contour, so
        # every trace power vanishes and the determinant is 1
        cont = Contour.ellipse(0.0, 1.5, 0.7, 96)
        kern = lambda x, y: np.exp(-y) + 0.0 * x
        assert abs(fredholm_det(kern, cont, prefactor=0.8) - 1.0) < 1e-12

    def test_nonfinite_kernel_raises(self):
        grid = composite_grid([0.0, 1.0], 8)
        with np.errstate(divide="ignore"):
            kern = lambda x, y: np.where(x == y, np.inf, 1.0)
            with pytest.raises(NumericsError):
                fredholm_det(kern, grid)


class TestCauchyTransforms:
    def _unit(self, n=24):
        grid = composite_grid([-1.0, 1.0], n)
        return SampledFunction(grid, np.ones(grid.size))

    def test_constant_closed_form_far(self):
        f = self._unit()
        om = 2.0 + 1.5j
        exact = np.log(1.0 - om) - np.log(-1.0 - om)
        assert abs(cauchy_transform(f, om) - exact) < 1e-13

    def test_constant_closed_form_near_edge(self):
        f = self._unit(32)
        om = 1.0 + 1e-3j                      # hugs the right endpoint
        exact = np.log(1.0 - om) - np.log(-1.0 - om)
        assert abs(cauchy_transform(f, om) - exact) < 1e-10

    def test_on_interval_raises(self):
        with pytest.raises(NumericsError):
            cauchy_transform(self._unit(), 0.5)

    def test_line_transform_near_interior(self):
        f = self._unit(32)
        om = 0.2 + 1e-4j                      # just above the interior
        exact = np.log(1.0 - om) - np.log(-1.0 - om)
        assert abs(cauchy_transform_line(f, om) - exact) < 1e-10

    def test_line_deriv_constant(self):
        grid = composite_grid([-1.0, 1.0], 32)
        f = SampledFunction(grid, np.ones(grid.size))
        f1 = SampledFunction(grid, np.zeros(grid.size))
        om = 0.1 + 1e-4j
        exact = 1.0 / (-1.0 - om) - 1.0 / (1.0 - om)
        assert abs(cauchy_transform_line_deriv(f, f1, om) - exact) < 1e-9

    def test_line_deriv_linear(self):
        grid = composite_grid([-1.0, 1.0], 32)
        f = SampledFunction(grid, grid.nodes.astype(float))
        f1 = SampledFunction(grid, np.ones(grid.size))
        om = -0.3 + 1e-4j
        exact = (np.log(1.0 - om) - np.log(-1.0 - om)
                 + om * (1.0 / (-1.0 - om) - 1.0 / (1.0 - om)))
        assert abs(cauchy_transform_line_deriv(f, f1, om) - exact) < 1e-9
