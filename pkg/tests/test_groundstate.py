"""Zero-temperature solves: parameter validation, strong-coupling anchors,
pinned benchmark scalars and structural symmetries."""

import numpy as np
import pytest

from bosegas.groundstate import (ModelParams, build_ground_state,
                                 kernel, solve_fermi_boundary)


class TestModelParams:
    def test_bad_coupling(self):
        with pytest.raises(ValueError):
            ModelParams(c=0.0, h=1.0)
        with pytest.raises(ValueError):
            ModelParams(c=-1.0, h=1.0)

    def test_bad_chemical_potential(self):
        with pytest.raises(ValueError):
            ModelParams(c=1.0, h=0.0)

    def test_negative_temperature(self):
        with pytest.raises(ValueError):
            ModelParams(c=1.0, h=1.0, T=-0.1)


class TestKernel:
    def test_lorentzian(self):
        assert kernel(0.0, 2.0) == 1.0
        assert abs(kernel(1.0, 1.0) - 1.0) < 1e-15
        # even and integrable to 2 pi over the whole line
        assert kernel(0.7, 1.3) == kernel(-0.7, 1.3)


class TestFreeFermionLimit:
    """At c = 1e6 the kernel decouples: eps0 -> lambda^2 - h, Z -> 1."""

    def test_boundary(self, gs_free):
        assert abs(gs_free.q - 1.0) < 1e-3

    def test_dressed_charge(self, gs_free):
        assert abs(gs_free.Zq - 1.0) < 1e-3

    def test_velocity(self, gs_free):
        assert abs(gs_free.v0 - 2.0) < 2e-3

    def test_density(self, gs_free):
        assert abs(gs_free.D - 1.0 / np.pi) < 1e-3

    def test_bare_dispersion(self, gs_free):
        lam = np.linspace(-0.9, 0.9, 7)
        assert np.max(np.abs(gs_free.eps0(lam) - (lam ** 2 - 1.0))) < 1e-3


class TestBenchmarkScalars:
    """Pinned values at c = 1, h = 1, stable under grid doubling."""

    def test_boundary(self, gs):
        assert abs(gs.q - 1.1794505693979693) < 1e-10

    def test_dressed_charge(self, gs):
        assert abs(gs.Zq - 1.7310611572837569) < 1e-10

    def test_velocity(self, gs):
        assert abs(gs.v0 - 1.5557302624186644) < 1e-10

    def test_density(self, gs):
        assert abs(gs.D - 0.741957884748637) < 1e-10

    def test_edge_slope(self, gs):
        assert abs(gs.eps0_prime_q - 2.693064228483816) < 1e-9

    def test_fermi_momentum(self, gs):
        assert abs(gs.kF - np.pi * gs.D) < 1e-14


class TestStructure:
    def test_energy_vanishes_at_edges(self, gs):
        assert abs(gs.eps0(gs.q)) < 1e-10
        assert abs(gs.eps0(-gs.q)) < 1e-10

    def test_energy_negative_inside(self, gs):
        lam = np.linspace(-0.95 * gs.q, 0.95 * gs.q, 21)
        assert np.all(np.real(gs.eps0(lam)) < 0)

    def test_charge_bounds(self, gs):
        # dressed charge exceeds 1 everywhere on the Fermi interval
        assert np.min(np.real(gs.Z.values)) >= 1.0

    def test_even_symmetry(self, gs):
        lam = np.array([0.3, 0.7, 1.1])
        assert np.max(np.abs(gs.eps0(lam) - gs.eps0(-lam))) < 1e-11
        assert np.max(np.abs(gs.Z(lam) - gs.Z(-lam))) < 1e-11

    def test_resolvent_mirror(self, gs):
        # R(-lambda, +q) = R(lambda, -q) by the evenness of the kernel
        lam = np.array([0.2, 0.8, 1.0])
        assert np.max(np.abs(gs.R_plus(-lam) - gs.R_minus(lam))) < 1e-11

    def test_density_function(self, gs):
        assert np.allclose(gs.rho_t.values,
                           gs.Z.values / (2.0 * np.pi), rtol=0, atol=1e-15)
        assert abs(np.real(gs.rho_t.integral()) - gs.D) < 1e-13

    def test_boundary_grows_with_h(self):
        q2 = solve_fermi_boundary(ModelParams(c=1.0, h=2.0))
        q1 = solve_fermi_boundary(ModelParams(c=1.0, h=1.0))
        assert q2 > q1

    def test_fixed_boundary_shortcut(self, gs):
        again = build_ground_state(gs.params, q=gs.q)
        assert abs(again.Zq - gs.Zq) < 1e-12
