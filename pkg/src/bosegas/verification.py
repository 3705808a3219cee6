"""Built-in verification suite.

Each check re-derives one family of analytic results numerically and
compares against an independent route (closed form, brute-force sum, limit
anchor, or grid refinement).  Checks return structured results so that both
the command-line ``verify`` subcommand and the test suite can assert on
them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .amplitude import (amplitude_tilde, bd_finite_T, discrete_amplitude,
                        smooth_amplitude, verify_cauchy_edge,
                        verify_double_integral, w_closed, w_series)
from .correlator import (density_correlator, ell0_closed, ell0_term_fd,
                         generating_asymptotics)
from .excitation import (ExcitationClass, decay_rate_closed,
                         decay_rate_numeric, root_offsets, solve_u,
                         u1_function, u2_function)
from .groundstate import ModelParams, build_ground_state
from .specfun import verify_gamma_integral_identity
from .thermal import eps2_at, solve_yang_yang


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named verification check."""

    name: str
    passed: bool
    details: dict = field(repr=False)
    seconds: float = 0.0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.seconds:.1f}s)"


# the benchmark excited sector used throughout the finite-T checks
BENCHMARK_CLASS = ExcitationClass(ell=1, p_plus=(1,), h_minus=(1,))
T_SEQUENCE = (0.02, 0.01, 0.005)


class Workspace:
    """Caches the expensive solves shared between checks."""

    def __init__(self, grid_n: int = 96, contour_n: int = 256):
        self.grid_n = grid_n
        self.contour_n = contour_n
        self._gs = {}
        self._usol = {}

    def ground_state(self, c: float = 1.0, h: float = 1.0, n_nodes=None):
        n = self.grid_n if n_nodes is None else n_nodes
        key = (c, h, n)
        if key not in self._gs:
            self._gs[key] = build_ground_state(ModelParams(c=c, h=h),
                                               n_nodes=n)
        return self._gs[key]

    def benchmark_solution(self, T: float):
        if T not in self._usol:
            gs = self.ground_state()
            params = ModelParams(c=1.0, h=1.0, T=T, alpha=0.0)
            thermal = solve_yang_yang(params, gs)
            self._usol[T] = solve_u(params, BENCHMARK_CLASS,
                                    thermal=thermal, gs=gs)
        return self._usol[T]


def _fit_exponent(ts, values):
    return float(np.polyfit(np.log(ts), np.log(np.maximum(values, 1e-300)),
                            1)[0])


def check_free_fermion(ws: Workspace):
    """Strong-coupling anchor: all scalars reach their free-fermion values."""
    gs = ws.ground_state(c=1e6, h=1.0)
    details = {
        "q": gs.q, "Zq": gs.Zq, "v0": gs.v0, "D": gs.D,
        "q_err": abs(gs.q - 1.0), "Zq_err": abs(gs.Zq - 1.0),
        "v0_err": abs(gs.v0 - 2.0), "D_err": abs(gs.D - 1.0 / np.pi),
        "tolerances": {"q": 1e-3, "Zq": 1e-3, "v0": 2e-3, "D": 1e-3},
    }
    passed = (details["q_err"] <= 1e-3 and details["Zq_err"] <= 1e-3
              and details["v0_err"] <= 2e-3 and details["D_err"] <= 1e-3)
    return passed, details


def check_thermal_low_t(ws: Workspace):
    """Low-temperature law of the thermal energy: the remainder beyond the
    quadratic correction scales faster than T^2.7, and the quadratic
    coefficient at the origin matches its closed form within 2%."""
    gs = ws.ground_state()
    lam = np.linspace(-0.9 * gs.q, 0.9 * gs.q, 41)
    ts = (0.04, 0.02, 0.01)
    remainders, coef_errs = [], []
    for T in ts:
        th = solve_yang_yang(ModelParams(c=1.0, h=1.0, T=T), gs)
        pred = gs.eps0(lam) + T * T * eps2_at(gs, lam)
        remainders.append(float(np.max(np.abs(th.eps_at(lam) - pred))))
        coef = (th.eps_at(0.0) - gs.eps0(0.0)) / T ** 2
        coef_errs.append(float(abs(coef / eps2_at(gs, 0.0) - 1.0)))
    exponent = _fit_exponent(ts, remainders)
    details = {"T": list(ts), "remainder": remainders, "exponent": exponent,
               "coef_rel_err": coef_errs,
               "tolerances": {"exponent": 2.7, "coef": 0.02}}
    return exponent >= 2.7 and coef_errs[-1] <= 0.02, details


def check_excited_expansion(ws: Workspace):
    """The solved excited-state energy matches its closed expansion through
    the quadratic thermal correction, with remainder ~ T^3."""
    gs = ws.ground_state()
    cls = BENCHMARK_CLASS
    u1f = u1_function(gs, 0.0, cls.ell)
    offs = root_offsets(gs, cls, 0.0, enforce_constraint=False)
    u2f = u2_function(gs, cls, offs)
    lam = np.linspace(-0.9 * gs.q, 0.9 * gs.q, 41)
    remainders = []
    for T in T_SEQUENCE:
        sol = ws.benchmark_solution(T)
        pred = gs.eps0(lam) + T * u1f(lam) + T * T * u2f(lam)
        remainders.append(float(np.max(np.abs(sol.u_at(lam) - pred))))
    exponent = _fit_exponent(T_SEQUENCE, remainders)
    details = {"T": list(T_SEQUENCE), "remainder": remainders,
               "exponent": exponent, "tolerances": {"exponent": 2.7}}
    return exponent >= 2.7, details


def check_decay_rate(ws: Workspace):
    """Decay rate by phase integral vs its closed linear-in-T form; the
    closed rate's oscillation frequency is exactly twice the Fermi momentum
    per unit twist."""
    gs = ws.ground_state()
    cls = BENCHMARK_CLASS
    al = 0.0 + cls.ell
    diffs, im_closed_errs, im_numeric_errs = [], [], []
    for T in T_SEQUENCE:
        sol = ws.benchmark_solution(T)
        pn = decay_rate_numeric(sol)
        pc = decay_rate_closed(gs, cls, 0.0, T)
        diffs.append(abs(pn - pc))
        im_closed_errs.append(abs(pc.imag + 2.0 * al * gs.kF))
        im_numeric_errs.append(abs(pn.imag + 2.0 * al * gs.kF))
    exponent = _fit_exponent(T_SEQUENCE, diffs)
    details = {"T": list(T_SEQUENCE), "diff": diffs, "exponent": exponent,
               "im_closed_err": im_closed_errs,
               "im_numeric_err": im_numeric_errs,
               "tolerances": {"exponent": 1.7, "im": 1e-6}}
    passed = exponent >= 1.7 and max(im_closed_errs) <= 1e-6
    return passed, details


def check_w_identity(ws: Workspace):
    """Brute-force configuration sum vs its Barnes-function closed form."""
    worst = 0.0
    table = []
    for nu in (0.3, -0.25 + 0.1j):
        for r in (-1, 0, 1, 2):
            for tau in (1.0, 2.0):
                cutoff = int(np.ceil(41.0 / tau))
                series = w_series(nu, r, tau, cutoff)
                closed = w_closed(nu, r, tau)
                rel = abs(series - closed) / abs(closed)
                worst = max(worst, rel)
                table.append({"nu": nu, "r": r, "tau": tau, "rel_err": rel})
    details = {"worst": worst, "table": table, "tolerances": {"rel": 1e-8}}
    return worst <= 1e-8, details


def check_gamma_integral(ws: Workspace):
    """Quadrature vs Gamma-function closed form of the exponential-kernel
    integral identity."""
    triples = [(0.5, 0.5, 1.0), (0.3, 0.7, 1.0), (-0.4, 0.4, 2.0)]
    residuals = [verify_gamma_integral_identity(a, b, p)
                 for a, b, p in triples]
    details = {"triples": triples, "residuals": residuals,
               "tolerances": {"residual": 1e-8}}
    return max(residuals) <= 1e-8, details


def check_smooth_amplitude(ws: Workspace):
    """Contour-determinant amplitude invariances: independence of the
    auxiliary reference points, the identity limit at zero twist, and the
    quadratic vanishing at integer twist for a nonzero umklapp number."""
    gs = ws.ground_state()
    q = gs.q
    b_ref = smooth_amplitude(gs, 0.2, 1, contour_n=ws.contour_n)
    b_alt = smooth_amplitude(gs, 0.2, 1,
                             theta_pair=(-q + 0.1j * q, q - 0.1j * q),
                             contour_n=ws.contour_n)
    theta_dev = abs(b_alt / b_ref - 1.0)
    near_one = abs(smooth_amplitude(gs, 1e-4, 0, contour_n=ws.contour_n)
                   - 1.0)
    at_integer = abs(smooth_amplitude(gs, 0.0, 1, contour_n=ws.contour_n))
    step = 1e-6
    fd = abs(smooth_amplitude(gs, step, 1, contour_n=ws.contour_n)
             - smooth_amplitude(gs, -step, 1, contour_n=ws.contour_n)
             ) / (2.0 * step)
    details = {"theta_dev": theta_dev, "near_one_err": near_one,
               "at_integer": at_integer, "fd_slope": fd,
               "tolerances": {"theta": 1e-6, "near_one": 1e-3,
                              "fd_slope": 1e-6}}
    passed = (theta_dev <= 1e-6 and near_one <= 1e-3
              and at_integer == 0.0 and fd <= 1e-6)
    return passed, details


def check_discrete_limit(ws: Workspace):
    """The weighted finite-temperature discrete factor converges to its
    closed zero-temperature limit."""
    gs = ws.ground_state()
    cls = BENCHMARK_CLASS
    al = 0.0 + cls.ell
    target = discrete_amplitude(gs, cls, 0.0)
    errs = []
    for T in T_SEQUENCE:
        sol = ws.benchmark_solution(T)
        weight = (gs.q * gs.eps0_prime_q / (np.pi * T)) ** (
            2.0 * al ** 2 * gs.Zq ** 2)
        scaled = bd_finite_T(sol) * weight
        errs.append(abs(scaled - target) / abs(target))
    exponent = _fit_exponent(T_SEQUENCE, errs)
    details = {"T": list(T_SEQUENCE), "target": complex(target),
               "rel_err": errs, "exponent": exponent,
               "tolerances": {"exponent": 0.7}}
    return exponent >= 0.7, details


def check_edge_asymptotics(ws: Workspace):
    """Edge estimates of the per-root Cauchy transforms and of the double
    integral: deviations small at T=0.01 and decreasing with T."""
    edge_devs, di_devs = [], []
    for T in T_SEQUENCE:
        sol = ws.benchmark_solution(T)
        edge_devs.append(verify_cauchy_edge(sol)["max_deviation"])
        di_devs.append(verify_double_integral(sol)["deviation"])
    details = {"T": list(T_SEQUENCE), "edge_dev": edge_devs,
               "double_integral_dev": di_devs,
               "tolerances": {"at_T=0.01": 0.15}}
    decreasing = (all(a > b for a, b in zip(edge_devs, edge_devs[1:]))
                  and all(a > b for a, b in zip(di_devs, di_devs[1:])))
    passed = edge_devs[1] <= 0.15 and di_devs[1] <= 0.15 and decreasing
    return passed, details


def check_assembly(ws: Workspace):
    """Assembled series sanity: unit-twist periodicity of the harmonic
    terms, reality of the correlator, and agreement of the closed
    non-oscillating term with the full finite-difference route."""
    gs = ws.ground_state()
    T = 0.01
    x = 2.0 * gs.v0 / (np.pi * T)
    _, terms_a = generating_asymptotics(gs, 0.2, x, T, 2,
                                        contour_n=ws.contour_n)
    _, terms_b = generating_asymptotics(gs, 1.2, x, T, 2,
                                        contour_n=ws.contour_n)
    va = {t.ell: t.value for t in terms_a}
    vb = {t.ell: t.value for t in terms_b}
    period_dev = max(abs(va[l] - vb[l - 1]) for l in va if l - 1 in vb)

    series = density_correlator(gs, x, T, ell_max=2, contour_n=ws.contour_n)
    reality = abs(series.total.imag) / abs(series.total.real)
    colsum = (series.constant + series.ell0_term
              + sum(t.value for t in series.harmonics))
    colsum_dev = abs(colsum - series.total)

    T_fd = 0.05
    x_fd = 1.5 * gs.v0 / (np.pi * T_fd)
    fd = ell0_term_fd(gs, x_fd, T_fd, contour_n=ws.contour_n)
    closed = gs.D ** 2 + ell0_closed(gs, x_fd, T_fd)
    fd_rel = abs(fd - closed) / abs(closed)

    details = {"period_dev": period_dev, "reality": reality,
               "colsum_dev": colsum_dev, "ell0_fd_rel": fd_rel,
               "tolerances": {"period": 1e-10, "reality": 1e-9,
                              "ell0_fd": 1e-6}}
    passed = (period_dev <= 1e-10 and reality <= 1e-9
              and colsum_dev <= 1e-12 and fd_rel <= 1e-6)
    return passed, details


def check_grid_hygiene(ws: Workspace):
    """Doubling the interval grid and the determinant contour moves every
    golden scalar by at most 1e-8 relative."""
    gs = ws.ground_state()
    gs2 = ws.ground_state(n_nodes=2 * ws.grid_n)
    alpha = 0.2

    def scalars(g, contour_n):
        return {
            "q": g.q, "Zq": g.Zq, "v0": g.v0,
            "A0": amplitude_tilde(g, alpha, 0, contour_n=contour_n).A_tilde,
            "A1": amplitude_tilde(g, alpha, 1, contour_n=contour_n).A_tilde,
        }

    base = scalars(gs, ws.contour_n)
    fine = scalars(gs2, 2 * ws.contour_n)
    rel = {k: abs(fine[k] - base[k]) / abs(fine[k]) for k in base}
    details = {"base": {k: complex(v) for k, v in base.items()},
               "doubled": {k: complex(v) for k, v in fine.items()},
               "rel_change": rel, "tolerances": {"rel": 1e-8}}
    return max(rel.values()) <= 1e-8, details


CHECKS = {
    "free-fermion": check_free_fermion,
    "thermal-low-t": check_thermal_low_t,
    "excited-expansion": check_excited_expansion,
    "decay-rate": check_decay_rate,
    "w-identity": check_w_identity,
    "gamma-integral": check_gamma_integral,
    "smooth-amplitude": check_smooth_amplitude,
    "discrete-limit": check_discrete_limit,
    "edge-asymptotics": check_edge_asymptotics,
    "assembly": check_assembly,
    "grid-hygiene": check_grid_hygiene,
}


def run_checks(names=None, grid_n: int = 96, contour_n: int = 256):
    """Run the named checks (all by default) sharing one workspace."""
    if names is None:
        names = list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}; "
                         f"available: {', '.join(CHECKS)}")
    ws = Workspace(grid_n=grid_n, contour_n=contour_n)
    results = []
    for name in names:
        t0 = time.time()
        passed, details = CHECKS[name](ws)
        results.append(CheckResult(name=name, passed=bool(passed),
                                   details=details,
                                   seconds=time.time() - t0))
    return results
