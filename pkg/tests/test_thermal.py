"""Finite-temperature solve: stable logarithms, fixed-point convergence,
low-temperature laws, Fermi-weight poles and the expansion checker."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bosegas.groundstate import ModelParams
from bosegas.thermal import (FermiPoles, eps2_at, eps2_predicted,
                             solve_yang_yang, stable_log1pexp,
                             verify_sommerfeld)


class TestStableLog1pExp:
    @given(st.floats(min_value=-30.0, max_value=30.0))
    @settings(max_examples=200, deadline=None)
    def test_matches_naive(self, x):
        naive = np.log1p(np.exp(-x))
        assert abs(stable_log1pexp(np.array(x)) - naive) \
            <= 1e-14 * (1.0 + abs(naive))

    def test_deep_tails(self):
        assert stable_log1pexp(np.array(700.0)) < 1e-300 * 1e10
        assert abs(stable_log1pexp(np.array(-700.0)) - 700.0) < 1e-12

    def test_complex_branch(self):
        z = np.array(2.0 + 0.3j)
        assert abs(stable_log1pexp(z) - np.log(1.0 + np.exp(-z))) < 1e-15
        z = np.array(-2.0 + 0.3j)
        assert abs(stable_log1pexp(z) - np.log(1.0 + np.exp(-z))) < 1e-14

    def test_monotone_decreasing(self):
        x = np.linspace(-5.0, 5.0, 101)
        assert np.all(np.diff(stable_log1pexp(x)) < 0)


@pytest.fixture(scope="module")
def thermal(gs):
    return solve_yang_yang(ModelParams(c=1.0, h=1.0, T=0.02), gs)


class TestYangYangSolve:
    def test_requires_positive_temperature(self, gs):
        with pytest.raises(ValueError):
            solve_yang_yang(ModelParams(c=1.0, h=1.0, T=0.0), gs)

    def test_converged(self, thermal):
        assert thermal.residual <= 1e-12
        assert thermal.iterations < 500

    def test_even(self, thermal):
        lam = np.array([0.25, 0.8, 1.5])
        assert np.max(np.abs(thermal.eps_at(lam)
                             - thermal.eps_at(-lam))) < 1e-11

    def test_tail_below_bare(self, thermal):
        # the tail integral is positive, so eps sits below the bare
        # dispersion, by an amount bounded by the slow kernel tail
        lam = 0.95 * thermal.cutoff
        gap = (lam ** 2 - 1.0) - np.real(thermal.eps_at(lam))
        assert 0.0 < gap < 0.2

    def test_fermi_weight_range(self, thermal):
        lam = np.linspace(-2.0, 2.0, 41)
        w = np.real(thermal.fermi_weight(lam))
        assert np.all((w >= 0.0) & (w <= 1.0))
        assert np.real(thermal.fermi_weight(0.0)) > 0.999
        assert np.real(thermal.fermi_weight(2.0)) < 1e-6

    def test_eps_prime_consistent(self, thermal):
        # analytic derivative against a central difference of eps_at
        lam, d = 0.6, 1e-5
        fd = (thermal.eps_at(lam + d) - thermal.eps_at(lam - d)) / (2.0 * d)
        assert abs(thermal.eps_prime_at(lam) - fd) < 1e-8


class TestLowTemperatureLaw:
    def test_quadratic_correction(self, gs, thermal):
        T = thermal.params.T
        lam = np.linspace(-0.9 * gs.q, 0.9 * gs.q, 21)
        pred = gs.eps0(lam) + T * T * eps2_at(gs, lam)
        assert np.max(np.abs(thermal.eps_at(lam) - pred)) < 30.0 * T ** 4

    def test_correction_negative_at_origin(self, gs):
        # the resolvent columns are positive, so the quadratic shift is down
        assert np.real(eps2_at(gs, 0.0)) < 0

    def test_sampled_matches_pointwise(self, gs):
        f = eps2_predicted(gs)
        assert np.max(np.abs(f.values - eps2_at(gs, gs.grid.nodes))) < 1e-13


class TestFermiPoles:
    def test_leading_order_positions(self, gs):
        T = 0.01
        poles = FermiPoles.leading_order(gs, T, "right", [0, 1, -1])
        step = 2.0 * np.pi * T / gs.eps0_prime_q
        assert abs(poles.roots[0] - (gs.q + 0.5j * step)) < 1e-14
        assert abs(poles.roots[1] - (gs.q + 1.5j * step)) < 1e-14
        assert abs(poles.roots[2] - (gs.q - 0.5j * step)) < 1e-14

    def test_left_branch_center(self, gs):
        poles = FermiPoles.leading_order(gs, 0.01, "left", [0])
        assert abs(poles.roots[0].real + gs.q) < 1e-12

    def test_half_planes(self, gs):
        poles = FermiPoles.leading_order(gs, 0.01, "right", range(-3, 3))
        for k, r in zip(poles.ks, poles.roots):
            assert (k >= 0) == (r.imag > 0)


class TestSommerfeldChecker:
    def test_remainder_decays_fast(self, gs):
        report = verify_sommerfeld(np.cos, gs, 0.3, (0.04, 0.02, 0.01))
        assert report["exponent"] >= 2.7
        assert report["remainder"][0] > report["remainder"][-1]

    def test_expansion_accuracy(self, gs):
        # at T = 0.01 the direct integral sits within ~T^3 of the expansion
        report = verify_sommerfeld(np.cos, gs, 0.3, (0.02, 0.01))
        assert report["remainder"][-1] < 1e-4
