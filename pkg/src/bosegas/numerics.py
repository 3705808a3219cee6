"""Quadrature and linear-algebra substrate.

Gauss-Legendre grids (single interval or graded composite panels), Nystrom
solution of second-kind linear integral equations, Fredholm determinants on
intervals and closed contours, and Cauchy transforms with singularity
subtraction near the integration domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import lu_factor, lu_solve


class NumericsError(Exception):
    """Generic numerical failure (singular operator, bad geometry, ...)."""


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Composite Gauss-Legendre quadrature grid on [a, b].

    ``panels`` holds the breakpoints; nodes/weights are the concatenation of
    the per-panel Gauss-Legendre rules.  All kernels in this package are
    analytic on their panels, so convergence is spectral panel by panel.
    """

    a: float
    b: float
    breakpoints: np.ndarray        # shape (npanels+1,), increasing
    nodes: np.ndarray              # shape (N,), increasing
    weights: np.ndarray            # shape (N,), positive
    panel_slices: tuple = field(repr=False, default=())

    @property
    def size(self) -> int:
        return self.nodes.size

    def sample(self, f) -> "SampledFunction":
        return SampledFunction(self, np.asarray(f(self.nodes)))

    def _panel_interpolators(self, values):
        fits = []
        for (lo, hi), sl in zip(zip(self.breakpoints[:-1], self.breakpoints[1:]),
                                self.panel_slices):
            x = self.nodes[sl]
            y = values[sl]
            deg = x.size - 1
            fits.append(((lo, hi), _legfit(x, y, deg, lo, hi)))
        return fits

    def interpolate(self, values, x):
        """Evaluate the panel-wise polynomial interpolant of ``values`` at x."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        out = np.empty(xf.shape, dtype=np.result_type(values, float))
        edges = self.breakpoints
        idx = np.clip(np.searchsorted(edges, xf, side="right") - 1,
                      0, len(self.panel_slices) - 1)
        fits = self._panel_interpolators(np.asarray(values))
        for k, (_, fit) in enumerate(fits):
            sel = idx == k
            if np.any(sel):
                out[sel] = fit(xf[sel])
        return out[0] if scalar else out

    def derivative(self, values, order: int = 1):
        """Panel-wise spectral derivative of sampled values, on the nodes."""
        values = np.asarray(values)
        out = np.empty_like(values, dtype=np.result_type(values, float))
        for (lo, hi), sl in zip(zip(self.breakpoints[:-1], self.breakpoints[1:]),
                                self.panel_slices):
            x = self.nodes[sl]
            fit = _legfit(x, values[sl], x.size - 1, lo, hi)
            out[sl] = fit.deriv(order)(x)
        return out


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function on a quadrature grid; the universal carrier."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.nodes.shape:
            raise ValueError("values do not match the grid")

    @property
    def nodes(self):
        return self.grid.nodes

    @property
    def weights(self):
        return self.grid.weights

    def __call__(self, x):
        fits = getattr(self, "_fits", None)
        if fits is None:
            fits = self.grid._panel_interpolators(self.values)
            object.__setattr__(self, "_fits", fits)
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        out = np.empty(xf.shape, dtype=np.result_type(self.values, float))
        edges = self.grid.breakpoints
        idx = np.clip(np.searchsorted(edges, xf, side="right") - 1,
                      0, len(fits) - 1)
        for k, (_, fit) in enumerate(fits):
            sel = idx == k
            if np.any(sel):
                out[sel] = fit(xf[sel])
        return out[0] if scalar else out

    def derivative(self, order: int = 1) -> "SampledFunction":
        return SampledFunction(self.grid, self.grid.derivative(self.values, order))

    def integral(self):
        return np.sum(self.weights * self.values)


def _legfit(x, y, deg, lo, hi):
    # Least-squares Legendre fit through the panel nodes (exact interpolation
    # since deg = npts-1); well conditioned in the mapped [-1, 1] basis.
    return np.polynomial.legendre.Legendre.fit(x, y, deg, domain=[lo, hi])


def gauss_legendre_grid(n: int, a: float, b: float) -> Grid:
    """Standard n-point Gauss-Legendre rule on [a, b] as a one-panel grid."""
    if n < 2:
        raise ValueError("need at least 2 nodes")
    if not a < b:
        raise ValueError("need a < b")
    x, w = leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return Grid(a, b, np.array([a, b]), mid + half * x, half * w,
                panel_slices=(slice(0, n),))


def composite_grid(breakpoints, n_per_panel: int = 32) -> Grid:
    """Gauss-Legendre rule on each sub-interval of ``breakpoints``."""
    bp = np.asarray(breakpoints, dtype=float)
    if bp.size < 2 or np.any(np.diff(bp) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    x0, w0 = leggauss(n_per_panel)
    nodes, weights, slices = [], [], []
    pos = 0
    for lo, hi in zip(bp[:-1], bp[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes.append(mid + half * x0)
        weights.append(half * w0)
        slices.append(slice(pos, pos + n_per_panel))
        pos += n_per_panel
    return Grid(bp[0], bp[-1], bp, np.concatenate(nodes),
                np.concatenate(weights), panel_slices=tuple(slices))


def graded_breakpoints(a: float, b: float, centers, w0: float,
                       factor: float = 3.0, wmax: float | None = None):
    """Breakpoints refined geometrically towards each point in ``centers``.

    Panel widths start at w0 next to a center and grow by ``factor`` away
    from it; long panels are capped at ``wmax``.
    """
    span = b - a
    pts = {a, b}
    for s in centers:
        if not a < s < b:
            continue
        pts.add(s)
        off = w0
        while off < span:
            for x in (s - off, s + off):
                if a < x < b:
                    pts.add(x)
            off *= factor
    bp = np.array(sorted(pts))
    # drop breakpoints closer than w0/2 to their neighbour (keep ends/centers)
    keep = [bp[0]]
    protected = set(centers) | {a, b}
    for x in bp[1:]:
        if x - keep[-1] >= 0.49 * w0 or x in protected:
            if x in protected and x - keep[-1] < 0.49 * w0 and keep[-1] not in protected:
                keep.pop()
            keep.append(x)
    bp = np.array(keep)
    if wmax is not None:
        out = [bp[0]]
        for hi in bp[1:]:
            lo = out[-1]
            nsplit = int(np.ceil((hi - lo) / wmax))
            for j in range(1, nsplit):
                out.append(lo + (hi - lo) * j / nsplit)
            out.append(hi)
        bp = np.array(out)
    return bp


# ---------------------------------------------------------------------------
# contours
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Contour:
    """Closed anticlockwise contour discretized by the trapezoid rule.

    ``weights`` are the complex measures dz at each node, so that
    sum(weights * f(nodes)) approximates the contour integral of f.  The
    uniform-parameter trapezoid rule is spectrally accurate for periodic
    analytic integrands.
    """

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return self.nodes.size

    @classmethod
    def ellipse(cls, center: complex, semi_real: float, semi_imag: float,
                n: int = 256) -> "Contour":
        t = 2.0 * np.pi * np.arange(n) / n
        z = center + semi_real * np.cos(t) + 1j * semi_imag * np.sin(t)
        dz = (-semi_real * np.sin(t) + 1j * semi_imag * np.cos(t)) * (2.0 * np.pi / n)
        return cls(z, dz)


# ---------------------------------------------------------------------------
# Nystrom solver
# ---------------------------------------------------------------------------

class NystromSolution(SampledFunction):
    """Solution of f - (sign/2pi) K f = rhs with off-grid interpolation.

    Off-grid values use the natural Nystrom formula
    f(x) = rhs(x) + (sign/2pi) sum_j w_j K(x, x_j) f_j,
    which keeps the full quadrature accuracy away from the grid.
    """

    def __init__(self, grid, values, kernel, rhs_fn, sign):
        super().__init__(grid, values)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "rhs_fn", rhs_fn)
        object.__setattr__(self, "sign", sign)

    def __call__(self, x):
        if self.rhs_fn is None:
            return super().__call__(x)
        x = np.asarray(x)
        kx = self.kernel(np.atleast_1d(x)[:, None], self.nodes[None, :])
        out = self.rhs_fn(np.atleast_1d(x)) + (self.sign / (2.0 * np.pi)) * (
            kx @ (self.weights * self.values))
        return out[0] if x.ndim == 0 else out


def nystrom_factorize(kernel, grid: Grid, sign: int = 1):
    """LU-factor the discretized operator I - (sign/2pi) K W."""
    lam = grid.nodes
    mat = np.eye(grid.size) - (sign / (2.0 * np.pi)) * (
        kernel(lam[:, None], lam[None, :]) * grid.weights[None, :])
    try:
        lu = lu_factor(mat)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericsError(f"singular discretized operator: {exc}") from exc
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > 1e13:
        raise NumericsError(f"discretized operator ill-conditioned (cond={cond:.2e})")
    return lu


def nystrom_solve(kernel, rhs: SampledFunction, sign: int = 1,
                  rhs_fn=None, lu=None) -> NystromSolution:
    """Solve f(x) - (sign/2pi) int K(x, y) f(y) dy = rhs(x) on rhs's grid."""
    grid = rhs.grid
    if lu is None:
        lu = nystrom_factorize(kernel, grid, sign)
    values = lu_solve(lu, rhs.values)
    return NystromSolution(grid, values, kernel, rhs_fn, sign)


# ---------------------------------------------------------------------------
# Fredholm determinants
# ---------------------------------------------------------------------------

def fredholm_det(kernel, domain, prefactor: complex = 1.0) -> complex:
    """det(I + prefactor * K) discretized on a Grid or a Contour."""
    x = domain.nodes
    w = domain.weights
    k = np.asarray(kernel(x[:, None], x[None, :]))
    if not np.all(np.isfinite(k)):
        raise NumericsError("non-finite kernel sample in Fredholm determinant")
    mat = np.eye(x.size, dtype=complex) + prefactor * k * w[None, :]
    return complex(np.linalg.det(mat))


def fredholm_logdet(kernel, domain, prefactor: complex = 1.0) -> complex:
    """log det(I + prefactor * K); avoids overflow when factors are combined."""
    x = domain.nodes
    w = domain.weights
    k = np.asarray(kernel(x[:, None], x[None, :]))
    if not np.all(np.isfinite(k)):
        raise NumericsError("non-finite kernel sample in Fredholm determinant")
    mat = np.eye(x.size, dtype=complex) + prefactor * k * w[None, :]
    sign, logabs = np.linalg.slogdet(mat)
    if sign == 0:
        raise NumericsError("vanishing Fredholm determinant")
    return complex(np.log(sign) + logabs)


# ---------------------------------------------------------------------------
# Cauchy transforms
# ---------------------------------------------------------------------------

def _log_ratio(a_shift, b_shift):
    # log(b_shift) - log(a_shift) for endpoints shifted by the same omega;
    # principal logs are safe because Im(lambda - omega) has a fixed sign.
    return np.log(b_shift) - np.log(a_shift)


def cauchy_transform(f: SampledFunction, omega: complex) -> complex:
    """L[f](omega) = int_a^b f(x) / (x - omega) dx for omega off [a, b].

    Direct quadrature far from the interval; close to it, the singular part
    is subtracted at the nearest endpoint and integrated in closed form.
    """
    grid = f.grid
    a, b = grid.a, grid.b
    om = complex(omega)
    if om.imag == 0.0 and a <= om.real <= b:
        raise NumericsError("Cauchy transform evaluated on the integration interval")
    spacing = (b - a) / grid.size
    dist = abs(om.imag) if a <= om.real <= b else min(abs(om - a), abs(om - b))
    log_term = _log_ratio(a - om, b - om)
    if dist > 4.0 * spacing:
        return complex(np.sum(f.weights * f.values / (f.nodes - om)))
    edge = a if abs(om - a) < abs(om - b) else b
    f_edge = f(edge)
    reg = np.sum(f.weights * (f.values - f_edge) / (f.nodes - om))
    return complex(reg + f_edge * log_term)


def cauchy_transform_line(f: SampledFunction, omega: complex) -> complex:
    """Cauchy transform for a function sampled on a wide real interval when
    omega sits close to the *interior* of the grid (subtraction at Re omega)."""
    grid = f.grid
    a, b = grid.a, grid.b
    om = complex(omega)
    x0 = float(np.clip(om.real, a, b))
    if om.imag == 0.0 and a <= om.real <= b:
        raise NumericsError("Cauchy transform evaluated on the integration interval")
    f0 = f(x0)
    reg = np.sum(f.weights * (f.values - f0) / (f.nodes - om))
    return complex(reg + f0 * _log_ratio(a - om, b - om))


def cauchy_transform_line_deriv(f: SampledFunction, f1: SampledFunction,
                                omega: complex) -> complex:
    """d/d omega of the line Cauchy transform, i.e. int f(x)/(x-omega)^2 dx.

    Two-term Taylor subtraction at Re omega keeps the quadrature regular for
    omega close to (but off) the real axis.  ``f1`` must hold the derivative
    samples of f.
    """
    grid = f.grid
    a, b = grid.a, grid.b
    om = complex(omega)
    if om.imag == 0.0:
        raise NumericsError("need omega off the real axis")
    x0 = float(np.clip(om.real, a, b))
    f0 = f(x0)
    d0 = f1(x0)
    dx = f.nodes - om
    reg = np.sum(f.weights * (f.values - f0 - d0 * (f.nodes - x0)) / dx**2)
    # int dx/(x-om)^2 and int (x-x0)/(x-om)^2 over [a, b], exact
    i_alpha = -1.0 / (b - om) + 1.0 / (a - om)
    i_beta = _log_ratio(a - om, b - om) + (om - x0) * i_alpha
    return complex(reg + f0 * i_alpha + d0 * i_beta)
