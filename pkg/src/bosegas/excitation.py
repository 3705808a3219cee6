"""Excited-sector data and solvers.

Bookkeeping of umklapp/particle-hole classes, closed low-temperature forms
for the linear and quadratic corrections of the excited-state energy u, the
leading-order placement of its complex roots, the full nonlinear solve for
u on the real line, the auxiliary phase function z, and the correlation
decay rates by the direct-integral and closed routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groundstate import GroundState, ModelParams, build_ground_state, kernel
from .numerics import NumericsError, SampledFunction
from .thermal import (ThermalSolution, kernel_prime, solve_yang_yang,
                      stable_log1pexp)


class ConstraintError(ValueError):
    """The branch-selection constraint on u1 is violated."""


def _validate_qn(seq, name):
    seq = tuple(int(v) for v in seq)
    if any(v < 1 for v in seq):
        raise ValueError(f"{name} quantum numbers must be >= 1")
    if any(b <= a for a, b in zip(seq, seq[1:])):
        raise ValueError(f"{name} quantum numbers must be strictly increasing")
    return seq


@dataclass(frozen=True)
class ExcitationClass:
    """Integer data of one excited sector: umklapp number ell and the
    particle/hole quantum numbers attached to the right (+q) and left (-q)
    Fermi points."""

    ell: int
    p_plus: tuple = ()
    h_plus: tuple = ()
    p_minus: tuple = ()
    h_minus: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "p_plus", _validate_qn(self.p_plus, "p+"))
        object.__setattr__(self, "h_plus", _validate_qn(self.h_plus, "h+"))
        object.__setattr__(self, "p_minus", _validate_qn(self.p_minus, "p-"))
        object.__setattr__(self, "h_minus", _validate_qn(self.h_minus, "h-"))
        if len(self.p_plus) + len(self.p_minus) != \
                len(self.h_plus) + len(self.h_minus):
            raise ValueError("particle and hole counts must agree")
        if len(self.p_plus) - len(self.h_plus) != self.ell or \
                len(self.h_minus) - len(self.p_minus) != self.ell:
            raise ValueError("quantum-number counts incompatible with ell")

    @property
    def n(self) -> int:
        return len(self.p_plus) + len(self.p_minus)

    @property
    def qn_sum(self) -> int:
        return (sum(self.p_plus) + sum(self.p_minus)
                + sum(self.h_plus) + sum(self.h_minus))


def u1_value(gs: GroundState, alpha: complex, ell: int) -> complex:
    """u1 at the Fermi boundary: 2 pi i (ell - alpha_ell * Zq)."""
    return 2.0j * np.pi * (ell - (alpha + ell) * gs.Zq)


def u1_function(gs: GroundState, alpha: complex, ell: int) -> SampledFunction:
    """Linear thermal correction of the excited-state energy, even in
    lambda: -2 pi i alpha_ell Z(lambda) + 2 pi i ell."""
    al = alpha + ell
    vals = -2.0j * np.pi * al * gs.Z.values + 2.0j * np.pi * ell
    return SampledFunction(gs.grid, vals)


@dataclass(frozen=True)
class RootOffsets:
    """Leading Taylor coefficients of the complex roots attached to +-q."""

    eta_plus: tuple
    xi_plus: tuple
    eta_minus: tuple
    xi_minus: tuple
    u1_at_q: complex

    @property
    def sum_plus(self) -> complex:
        return sum(self.eta_plus) + sum(self.xi_plus)

    @property
    def sum_minus(self) -> complex:
        return sum(self.eta_minus) + sum(self.xi_minus)


def root_offsets(gs: GroundState, cls: ExcitationClass, alpha: complex,
                 enforce_constraint: bool = True) -> RootOffsets:
    """Leading-order root offsets from the quantum numbers.

    The branch constraint -pi < Im u1 < pi guarantees positive quantum
    numbers and validates the edge estimates downstream; it can always be
    restored by an integer shift of alpha, which the raised error names.
    With ``enforce_constraint=False`` only the half-plane conditions
    Re(eta) > 0, Re(xi) > 0 are enforced.
    """
    u1 = u1_value(gs, alpha, cls.ell)
    if enforce_constraint and not -np.pi < u1.imag < np.pi:
        shift = round(u1.imag / (2.0 * np.pi * gs.Zq))
        raise ConstraintError(
            f"Im u1 = {u1.imag:.4f} outside (-pi, pi); "
            f"shift alpha -> alpha + {shift} to restore the constraint")
    epsp = gs.eps0_prime_q
    eta_p = tuple((2.0 * np.pi * (p - 0.5) + 1j * u1) / epsp
                  for p in cls.p_plus)
    xi_p = tuple((2.0 * np.pi * (h - 0.5) - 1j * u1) / epsp
                 for h in cls.h_plus)
    eta_m = tuple((2.0 * np.pi * (p - 0.5) - 1j * u1) / epsp
                  for p in cls.p_minus)
    xi_m = tuple((2.0 * np.pi * (h - 0.5) + 1j * u1) / epsp
                 for h in cls.h_minus)
    for v in eta_p + xi_p + eta_m + xi_m:
        if not v.real > 0:
            raise ConstraintError(
                f"root offset {v} not in the required half-plane")
    return RootOffsets(eta_plus=eta_p, xi_plus=xi_p, eta_minus=eta_m,
                       xi_minus=xi_m, u1_at_q=u1)


def u2_function(gs: GroundState, cls: ExcitationClass,
                offsets: RootOffsets) -> SampledFunction:
    """Quadratic thermal correction of the excited-state energy, in terms of
    the resolvent columns and the root-offset sums."""
    u1 = offsets.u1_at_q
    common = (np.pi ** 2 / 3.0 + u1 ** 2) / (2.0 * gs.eps0_prime_q)
    coef_p = 2.0 * np.pi * offsets.sum_plus - common
    coef_m = 2.0 * np.pi * offsets.sum_minus - common
    vals = coef_p * gs.R_plus.values + coef_m * gs.R_minus.values
    return SampledFunction(gs.grid, vals)


def branch_log_weight(u, T):
    """log(1 + e^{-u/T}) by the two-sided stable evaluation.

    Away from the Fermi crossover windows both stable pieces are exact
    analytic continuations of each other (the switch error is below double
    precision), so the only genuine branch freedom lives in windows of
    width ~T around +-q.  The solver keeps those windows on a contour where
    the local phase |Im u/T| stays inside (-pi, pi), which makes this
    evaluation the branch fixed by continuity and by decay at both tails.
    """
    return stable_log1pexp(np.asarray(u, dtype=complex) / T)


@dataclass(frozen=True)
class DeformedContour:
    """Integration contour for the excited sector: the real thermal grid
    lifted by an odd pair of smooth bumps at +-q.

    The bump height is chosen halfway through the channel between the
    nearest migrated root of 1+e^{-u/T} (at height (|Im u1|-pi)T/eps0')
    and the first pole of the Fermi weight (at height pi*T/eps0'), so that
    on the contour the phases of both logs entering z stay within
    (-pi, pi) across the crossover windows.  For -pi < Im u1 < pi the
    deformation is harmless (and vanishes with u1); it exists as long as
    |Im u1| < 2 pi, which the constructor enforces.
    """

    nodes: np.ndarray = field(repr=False)    # complex contour points
    weights: np.ndarray = field(repr=False)  # quadrature weights * dgamma/dx
    base: object = field(repr=False)         # underlying real Grid
    height: float                            # bump height at +q (signed)
    width: float

    def integral(self, values):
        return complex(np.sum(self.weights * values))


def excitation_contour(thermal: ThermalSolution, gs: GroundState,
                       u1_at_q: complex) -> DeformedContour:
    """Contour through the branch channel for a given edge value u1."""
    T = thermal.params.T
    epsp = gs.eps0_prime_q
    if not abs(u1_at_q.imag) < 2.0 * np.pi * (1.0 - 1e-9):
        raise ConstraintError(
            f"|Im u1| = {abs(u1_at_q.imag):.4f} >= 2 pi: no contour channel "
            f"separates the migrated roots from the Fermi-weight poles")
    height = -u1_at_q.imag * T / (2.0 * epsp)
    # the plateau must cover the crossover window |Re u| <~ 40 T
    width = min(80.0 * T / epsp, 0.5 * min(gs.q, thermal.params.c))
    x = thermal.grid.nodes
    sp, sm = (x - gs.q) / width, (x + gs.q) / width
    bump = np.exp(-sp * sp) - np.exp(-sm * sm)
    dbump = (-2.0 * sp * np.exp(-sp * sp) + 2.0 * sm * np.exp(-sm * sm)) / width
    return DeformedContour(nodes=x + 1j * height * bump,
                           weights=thermal.grid.weights * (1.0 + 1j * height * dbump),
                           base=thermal.grid, height=height, width=width)


def place_roots(gs: GroundState, offsets: RootOffsets, T: float):
    """Roots at leading order: +-q shifted by +-iT eta / -+iT xi."""
    s_plus = tuple(gs.q + 1j * T * e for e in offsets.eta_plus) + \
        tuple(-gs.q + 1j * T * e for e in offsets.eta_minus)
    s_minus = tuple(gs.q - 1j * T * x for x in offsets.xi_plus) + \
        tuple(-gs.q - 1j * T * x for x in offsets.xi_minus)
    return s_plus, s_minus


def theta_odd(lam, c: float):
    """Scattering phase i log((ic+lambda)/(ic-lambda)), continuous and odd on
    the real axis, tending to +-pi at +-infinity."""
    lam = np.asarray(lam, dtype=complex)
    return 1j * (np.log(1j * c + lam) - np.log(1j * c - lam))


@dataclass(frozen=True)
class USolution:
    """Excited-state energy u on the deformed contour, with its roots."""

    params: ModelParams
    cls: ExcitationClass = field(repr=False)
    thermal: ThermalSolution = field(repr=False)
    contour: DeformedContour = field(repr=False)
    u_values: np.ndarray = field(repr=False)
    log_weight: np.ndarray = field(repr=False)      # branch_log_weight(u, T)
    log_weight_eps: np.ndarray = field(repr=False)  # same for eps on contour
    s_plus: tuple
    s_minus: tuple
    offsets: RootOffsets = field(repr=False)
    iterations: int
    residual: float

    def _source(self, lam):
        c = self.params.c
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros_like(lam)
        for sp, sm in zip(self.s_plus, self.s_minus):
            out += theta_odd(lam - sp, c) - theta_odd(lam - sm, c)
        return 1j * self.params.T * out

    def u_at(self, lam):
        """Continuation of u off the contour via its own integral equation;
        valid within a strip of half-width c around the contour."""
        T, c = self.params.T, self.params.c
        h_alpha = self.params.h + 2.0j * np.pi * self.params.alpha * T
        lam = np.asarray(lam, dtype=complex)
        flat = np.atleast_1d(lam)
        kx = kernel(flat[:, None] - self.contour.nodes[None, :], c)
        tail = (T / (2.0 * np.pi)) * (kx @ (self.contour.weights * self.log_weight))
        out = flat ** 2 - h_alpha - tail + self._source(flat)
        return out[0] if lam.ndim == 0 else out

    def u_prime_at(self, lam):
        T, c = self.params.T, self.params.c
        lam = np.asarray(lam, dtype=complex)
        flat = np.atleast_1d(lam)
        kx = kernel_prime(flat[:, None] - self.contour.nodes[None, :], c)
        tail = (T / (2.0 * np.pi)) * (kx @ (self.contour.weights * self.log_weight))
        src = np.zeros_like(flat)
        for sp, sm in zip(self.s_plus, self.s_minus):
            src += kernel(flat - sp, c) - kernel(flat - sm, c)
        out = 2.0 * flat - tail + 1j * T * src
        return out[0] if lam.ndim == 0 else out


def solve_u(params: ModelParams, cls: ExcitationClass,
            thermal: ThermalSolution = None, gs: GroundState = None,
            max_iter: int = 50, tol_factor: float = 1e-12,
            enforce_constraint: bool = False) -> USolution:
    """Newton solve of the excited-state integral equation with the roots
    fixed at their leading-order positions.

    The equation is solved on the deformed contour of excitation_contour,
    which realizes the analytic continuation in alpha of the
    constraint-satisfying regime; all closed low-temperature forms refer
    to that continuation.
    """
    if params.T > 0.05 * params.h:
        raise ValueError("excited-state solve gated to T <= 0.05 h")
    if gs is None:
        gs = build_ground_state(params)
    if thermal is None:
        thermal = solve_yang_yang(params, gs)
    offsets = root_offsets(gs, cls, params.alpha,
                           enforce_constraint=enforce_constraint)
    T = params.T
    scale = max(abs(v) for v in
                (offsets.eta_plus + offsets.xi_plus + offsets.eta_minus
                 + offsets.xi_minus)) if cls.n else 0.0
    if T * scale > 0.25 * min(gs.q, params.c):
        raise ValueError("roots drift too far from the Fermi points; lower T")
    s_plus, s_minus = place_roots(gs, offsets, T)

    contour = excitation_contour(thermal, gs, offsets.u1_at_q)
    lam = contour.nodes
    kmat = kernel(lam[:, None] - lam[None, :], params.c) * contour.weights[None, :]
    h_alpha = params.h + 2.0j * np.pi * params.alpha * T
    src = np.zeros(lam.size, dtype=complex)
    for sp, sm in zip(s_plus, s_minus):
        src += theta_odd(lam - sp, params.c) - theta_odd(lam - sm, params.c)
    bare = lam ** 2 - h_alpha + 1j * T * src
    tol = tol_factor * max(params.h, T)

    def defect(u):
        lw = branch_log_weight(u, T)
        return bare - (T / (2.0 * np.pi)) * (kmat @ lw) - u, lw

    # Newton iteration: the Jacobian of the defect is -(I - K theta / 2 pi)
    # with theta the occupation factor of the current iterate.
    u = bare.copy()
    res_vec, lw = defect(u)
    residual = float(np.max(np.abs(res_vec)))
    for it in range(1, max_iter + 1):
        if residual <= tol:
            break
        theta = np.exp(-stable_log1pexp(-u / T))  # 1/(1+e^{u/T})
        jac = np.eye(lam.size) - kmat * theta[None, :] / (2.0 * np.pi)
        step = np.linalg.solve(jac, res_vec)
        # backtracking line search on the sup-norm of the defect
        factor = 1.0
        for _ in range(8):
            trial = u + factor * step
            trial_res, trial_lw = defect(trial)
            if np.max(np.abs(trial_res)) < residual or factor < 0.1:
                break
            factor *= 0.5
        u, res_vec, lw = trial, trial_res, trial_lw
        residual = float(np.max(np.abs(res_vec)))
    else:
        raise NumericsError(
            f"excited-state Newton iteration not converged in {max_iter} "
            f"iterations (residual {residual:.2e})")
    tail_decay = max(abs(lw[0]), abs(lw[-1]))
    if tail_decay > 1e-8:
        raise NumericsError(
            f"log weight does not decay at the grid ends ({tail_decay:.2e}); "
            f"enlarge the cutoff")
    lw_eps = branch_log_weight(thermal.eps_at(lam), T)
    return USolution(params=params, cls=cls, thermal=thermal,
                     contour=contour, u_values=u, log_weight=lw,
                     log_weight_eps=lw_eps,
                     s_plus=s_plus, s_minus=s_minus, offsets=offsets,
                     iterations=it, residual=residual)


def polish_roots(sol: USolution, n_steps: int = 1) -> tuple:
    """Optional Newton refinement of the root conditions
    1 + exp(-u(s)/T) = 0, using the continued u and its derivative.

    The leading-order placement is kept in the solver by default; this
    helper reports where the roots would move.  Each root s satisfies
    u(s) = u(s0) + (s - s0) u'(s0) + ..., and the target values of u are the
    odd multiples of i pi T nearest to the current u(s)/T.
    """
    T = sol.params.T

    def refine(s):
        for _ in range(n_steps):
            val = sol.u_at(s)
            target = 1j * np.pi * T * (2.0 * np.round(
                (val / (1j * np.pi * T) - 1.0) / 2.0) + 1.0)
            s = s - (val - target) / sol.u_prime_at(s)
        return s

    return (tuple(refine(s) for s in sol.s_plus),
            tuple(refine(s) for s in sol.s_minus))


def z_function(sol: USolution) -> np.ndarray:
    """Auxiliary phase z = -(1/2 pi i) log[(1+e^{-u/T})/(1+e^{-eps/T})] on
    the contour nodes; vanishes at both contour ends."""
    return -(sol.log_weight - sol.log_weight_eps) / (2.0j * np.pi)


def decay_rate_numeric(sol: USolution) -> complex:
    """Decay rate from the phase integral minus the root sum."""
    z = z_function(sol)
    return complex(1j * sol.contour.integral(z)
                   - 1j * (sum(sol.s_plus) - sum(sol.s_minus)))


def decay_rate_closed(gs: GroundState, cls: ExcitationClass, alpha: complex,
                      T: float) -> complex:
    """Closed decay rate, linear in T."""
    al = alpha + cls.ell
    bracket = ((al * gs.Zq) ** 2 - cls.ell ** 2 - cls.n + cls.qn_sum)
    return complex(-2.0j * al * gs.kF + (2.0 * np.pi * T / gs.v0) * bracket)
