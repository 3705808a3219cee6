"""Zero-temperature state of the delta-interacting Bose gas.

Solves the linear integral equations on the Fermi interval [-q, q] for the
dressed energy, the density / dressed charge and the resolvent, locates the
Fermi boundary q(h), and collects the derived scalars (dressed charge at the
boundary, average density, Fermi momentum, sound velocity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .numerics import (Grid, SampledFunction, NystromSolution, composite_grid,
                       nystrom_factorize, nystrom_solve)


def kernel(lam, c: float):
    """Interaction kernel K(lambda) = 2c / (lambda^2 + c^2)."""
    return 2.0 * c / (lam * lam + c * c)


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs: coupling c, chemical potential h, temperature T,
    and the twist parameter alpha of the generating function."""

    c: float
    h: float
    T: float = 0.0
    alpha: complex = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("coupling c must be positive")
        if not self.h > 0:
            raise ValueError("chemical potential must be positive")
        if self.T < 0:
            raise ValueError("temperature must be non-negative")


def fermi_grid(q: float, n_nodes: int = 96) -> Grid:
    """Symmetric composite Gauss-Legendre grid on [-q, q]."""
    return composite_grid([-q, 0.0, q], n_nodes // 2)


def _eps0_solution(params: ModelParams, q: float, grid: Grid, lu=None):
    kern = lambda x, y: kernel(x - y, params.c)
    rhs_fn = lambda lam: lam ** 2 - params.h
    rhs = grid.sample(rhs_fn)
    return nystrom_solve(kern, rhs, sign=1, rhs_fn=rhs_fn, lu=lu)


def solve_fermi_boundary(params: ModelParams, tol: float = 1e-12,
                         n_nodes: int = 96) -> float:
    """Fermi boundary q such that the dressed energy vanishes at the edge.

    The scalar map q -> eps0(q; q) is monotone through the root; each
    evaluation is one dense solve of the dressed-energy equation on [-q, q].
    """
    sq = np.sqrt(params.h)

    def edge_energy(q):
        grid = fermi_grid(q, n_nodes)
        eps0 = _eps0_solution(params, q, grid)
        return float(np.real(eps0(q)))

    lo, hi = 0.1 * sq, 10.0 * sq
    if edge_energy(lo) * edge_energy(hi) > 0:
        raise ValueError(
            f"no sign change of eps0(q;q) in the bracket [{lo:.3g}, {hi:.3g}]")
    return float(brentq(edge_energy, lo, hi, rtol=tol))


@dataclass(frozen=True)
class GroundState:
    """T=0 data: Fermi boundary, sampled functions and derived scalars."""

    params: ModelParams
    q: float
    grid: Grid = field(repr=False)
    eps0: NystromSolution = field(repr=False)        # dressed energy
    eps0_prime: NystromSolution = field(repr=False)  # its dressed derivative
    Z: NystromSolution = field(repr=False)           # dressed charge
    R_plus: NystromSolution = field(repr=False)      # resolvent R(., +q)
    R_minus: NystromSolution = field(repr=False)     # resolvent R(., -q)
    Zq: float
    eps0_prime_q: float
    D: float
    kF: float
    v0: float

    @property
    def rho_t(self) -> SampledFunction:
        """Total density rho_t = Z / 2 pi."""
        return SampledFunction(self.grid, self.Z.values / (2.0 * np.pi))

    def _check(self):
        h, q = self.params.h, self.q
        edge = max(abs(self.eps0(q)), abs(self.eps0(-q)))
        if edge > 1e-10 * h:
            raise ArithmeticError(f"dressed energy at the edge: {edge:.2e}")
        asym = max(np.max(np.abs(self.eps0.values - self.eps0.values[::-1])),
                   np.max(np.abs(self.Z.values - self.Z.values[::-1])))
        if asym > 1e-10 * max(h, 1.0):
            raise ArithmeticError(f"even-symmetry violation: {asym:.2e}")
        if self.Zq < 1.0 - 1e-10:
            raise ArithmeticError(f"dressed charge at the edge {self.Zq} < 1")
        if not (self.eps0_prime_q > 0 and self.v0 > 0):
            raise ArithmeticError("edge slope / sound velocity not positive")


def resolvent(params: ModelParams, q: float, xi: float,
              grid: Grid = None, lu=None) -> NystromSolution:
    """Resolvent column R(., xi) of the kernel operator on [-q, q]."""
    if grid is None:
        grid = fermi_grid(q)
    kern = lambda x, y: kernel(x - y, params.c)
    rhs_fn = lambda lam: kernel(lam - xi, params.c) / (2.0 * np.pi)
    return nystrom_solve(kern, grid.sample(rhs_fn), sign=1,
                         rhs_fn=rhs_fn, lu=lu)


def build_ground_state(params: ModelParams, n_nodes: int = 96,
                       q: float = None) -> GroundState:
    """Solve all T=0 equations on a shared grid and factorization."""
    if q is None:
        q = solve_fermi_boundary(params, n_nodes=n_nodes)
    grid = fermi_grid(q, n_nodes)
    kern = lambda x, y: kernel(x - y, params.c)
    lu = nystrom_factorize(kern, grid, sign=1)

    eps0 = _eps0_solution(params, q, grid, lu=lu)
    dr_fn = lambda lam: 2.0 * lam
    eps0_prime = nystrom_solve(kern, grid.sample(dr_fn), sign=1,
                               rhs_fn=dr_fn, lu=lu)
    one = lambda lam: np.ones_like(np.asarray(lam, dtype=float))
    Z = nystrom_solve(kern, grid.sample(one), sign=1, rhs_fn=one, lu=lu)
    R_plus = resolvent(params, q, q, grid=grid, lu=lu)
    R_minus = resolvent(params, q, -q, grid=grid, lu=lu)

    Zq = float(np.real(Z(q)))
    epsp = float(np.real(eps0_prime(q)))
    D = float(np.real(Z.integral())) / (2.0 * np.pi)
    gs = GroundState(params=params, q=q, grid=grid, eps0=eps0,
                     eps0_prime=eps0_prime, Z=Z, R_plus=R_plus,
                     R_minus=R_minus, Zq=Zq, eps0_prime_q=epsp,
                     D=D, kF=np.pi * D, v0=epsp / Zq)
    gs._check()
    return gs
