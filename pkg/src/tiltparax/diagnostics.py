"""Numerical certificates for the half-space and quadrant solutions.

y integrals are plain sums on the periodic grid (spectrally accurate).  The
absorbed energy is integrated in x by Simpson's rule, other x integrals by the
trapezoid rule.  Suprema over x are maxima over x slices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .core import BoundaryData, Grid1D, PhysicalParams
from .errors import GridMismatch, TruncationTooShort, WrongSignKy
from .solvers import HalfSpaceSolution, QuadrantSolution, solve_halfspace, solve_quadrant
from .spectral import Spectrum, forward_dft, inverse_dft, sobolev_norm_sq, spectral_derivative
from .symbols import SymbolTable, k_hat, r_pm, stability_constant

TAIL_LIMIT = 1e-4


def choose_xmax(p: PhysicalParams, ygrid: Grid1D, spectrum=None, level=1e-4, rel=1e-10):
    """Smallest x at which every relevant bin has decayed to ``level``.

    Bins carrying less than ``rel`` of the peak spectral amplitude are ignored
    (when ``spectrum`` is given); otherwise all grid bins count.
    """
    rm = r_pm(ygrid.spectral().eta, "-", p).real
    if spectrum is not None:
        a = np.abs(spectrum)
        rm = rm[a > rel * a.max()] if a.max() > 0 else rm
    return math.log(level) / rm.max()


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float

    @property
    def relative_residual(self):
        scale = max(abs(self.lhs), abs(self.rhs))
        return abs(self.lhs - self.rhs) / scale if scale > 0 else 0.0


@dataclass(frozen=True)
class EnergyReport:
    """Terms of the two equivalent energy balances on the entrance boundary x = 0.

    ``absorbed`` is the double integral of 2 nu |u|^2, ``trace_mass`` is
    kx times the L2 norm squared of the trace, ``outgoing``/``incoming`` the
    boundary fluxes of the first identity (``incoming`` excludes
    ``trace_mass``), and ``cross`` the right-hand side of the second one.
    """

    absorbed: float
    outgoing: float
    incoming: float
    trace_mass: float
    cross: float
    xmax: float
    tail_fraction: float

    @property
    def identity1(self) -> IdentityCheck:
        return IdentityCheck(self.absorbed + self.outgoing, self.trace_mass + self.incoming)

    @property
    def identity2(self) -> IdentityCheck:
        return IdentityCheck(self.absorbed + self.trace_mass, self.cross)


def _trace_derivative_d(sol: HalfSpaceSolution, p: PhysicalParams):
    """``D u = ky (kx d_y - ky d_x) u`` at x = 0, with d_x acting as R_-."""
    tab = sol.symbols
    c = sol.trace_spectrum.coeffs * p.ky * (p.kx * 1j * tab.eta - p.ky * tab.r_minus)
    return inverse_dft(Spectrum(c, sol.trace_spectrum.grid))


def energy_balance(sol: HalfSpaceSolution, uin: BoundaryData, p: PhysicalParams,
                   xmax=None) -> EnergyReport:
    xs = sol.field.xgrid.points
    if xmax is None:
        xmax = xs[-1]
    keep = xs <= xmax * (1 + 1e-12)
    xs = xs[keep]
    u = sol.field.values[keep]
    dy = sol.field.ygrid.dx

    rm = sol.symbols.r_minus.real
    w = np.abs(sol.trace_spectrum.coeffs) ** 2 / (-2 * rm)
    total = w.sum()
    tail = float((w * np.exp(2 * rm * xs[-1])).sum() / total) if total > 0 else 0.0
    if tail > TAIL_LIMIT:
        raise TruncationTooShort(
            f"{tail:.2e} of the absorbed energy lies beyond x = {xs[-1]:g}; extend the x grid"
        )

    absorbed = 2 * p.nu * float(integrate.simpson(np.sum(np.abs(u) ** 2, axis=1) * dy, x=xs))
    kx, e = p.kx, p.epsilon
    u0 = sol.trace0.samples
    du0 = _trace_derivative_d(sol, p)
    duin = p.ky * p.kx * spectral_derivative(uin.samples, uin.grid)
    ui = uin.samples
    outgoing = float(np.sum(kx / 2 * np.abs((1j * e * du0 - 2 * kx * u0) / (2 * kx)) ** 2) * dy)
    incoming = float(np.sum(kx / 2 * np.abs((1j * e * duin + 2 * kx * ui) / (2 * kx)) ** 2) * dy)
    trace_mass = float(kx * np.sum(np.abs(u0) ** 2) * dy)
    cross = float(-np.imag(np.sum(np.conj(u0) * (e * duin - 2j * kx * ui)) * dy))
    return EnergyReport(absorbed, outgoing, incoming, trace_mass, cross, float(xs[-1]), tail)


def stability_ratio(sol: HalfSpaceSolution, g: BoundaryData, p: PhysicalParams):
    """``(sup_x ||u(x)||_L2 / ||g||_{H^-1/2}, bound)``; raises if the bound is exceeded."""
    bound = stability_constant(p)
    gn = sobolev_norm_sq(forward_dft(g.samples, g.grid), -0.5)
    if gn == 0:
        return 0.0, bound
    deta = sol.trace_spectrum.grid.deta
    slices = sol.slice_spectra()
    top = np.max(np.sum(np.abs(slices) ** 2, axis=1)) * deta / (2 * math.pi)
    ratio = math.sqrt(top / gn)
    if not ratio <= bound:
        raise AssertionError(f"stability ratio {ratio} exceeds bound {bound}")
    return ratio, bound


def _same_grids(a, b):
    if a.xgrid != b.xgrid or a.ygrid != b.ygrid:
        raise GridMismatch("solutions are sampled on different grids")


def transparency_error(U: QuadrantSolution, u: HalfSpaceSolution) -> float:
    """``max_x ||(U - u)(x, .)||_{L2(y>=0)} / max_x ||u(x, .)||_{L2(y>=0)}``."""
    _same_grids(U.field, u.field)
    up = U.ymask
    diff = np.sqrt(np.sum(np.abs(U.field.values[:, up] - u.field.values[:, up]) ** 2, axis=1))
    ref = np.sqrt(np.sum(np.abs(u.field.values[:, up]) ** 2, axis=1)).max()
    return float(diff.max() / ref) if ref > 0 else 0.0


@dataclass
class DecayTable:
    rows: list = field(default_factory=list)

    def add(self, shift, err, bound):
        self.rows.append((float(shift), float(err), float(bound)))

    @property
    def shifts(self):
        return [r[0] for r in self.rows]

    @property
    def errors(self):
        return [r[1] for r in self.rows]

    @property
    def bounds(self):
        return [r[2] for r in self.rows]

    def dominated(self, tol=0.0):
        return all(err <= bound * (1 + tol) for _, err, bound in self.rows)

    def nonincreasing(self, tol=1e-6):
        e = self.errors
        return all(b <= a * (1 + tol) for a, b in zip(e, e[1:]))


def absorbing_decay(h: BoundaryData, shifts, p: PhysicalParams, xgrid: Grid1D,
                    workers=None) -> DecayTable:
    """Half-space vs quadrant discrepancy for the shifted data ``g_A(y) = h(y - A)``.

    ``h`` is given by samples; shifts must be multiples of the grid spacing so
    the shift is an exact index roll on the periodic grid.
    """
    if not p.ky < 0:
        raise WrongSignKy("the absorbing regime needs ky < 0")
    grid = h.grid
    y = grid.points
    tab = SymbolTable.build(p, grid.spectral())
    hhat = forward_dft(h.samples, grid, workers)
    H = inverse_dft(Spectrum(hhat.coeffs * tab.m_entrance, hhat.grid), workers)
    c_k = float(np.abs(tab.k_hat).max())
    table = DecayTable()
    if not np.any(h.samples):
        for a in shifts:
            table.add(a, 0.0, 0.0)
        return table
    up = y >= 0
    for a in shifts:
        k = a / grid.dx
        if abs(k - round(k)) > 1e-9:
            raise ValueError(f"shift {a} is not a multiple of dy = {grid.dx}")
        ga = np.roll(h.samples, int(round(k)))
        ga = np.where(y > 0, ga, 0)
        gp = BoundaryData(ga, grid, "g_plus")
        u = solve_halfspace(gp.with_kind("g"), xgrid, p, workers, tab)
        U = solve_quadrant(gp, xgrid, p, workers, tab)
        diff = U.field.values[:, up] - u.field.values[:, up]
        err = math.sqrt(np.max(np.sum(np.abs(diff) ** 2, axis=1)) * grid.dx)
        tail = H[y <= -a + 1e-9 * grid.dx]
        bound = c_k * math.sqrt(float(np.sum(np.abs(tail) ** 2)) * grid.dx)
        table.add(a, err, bound)
    return table


def paraxiality_measure(sol: HalfSpaceSolution, p: PhysicalParams) -> float:
    """``||k . grad u|| / ||u||`` over the sampled domain."""
    tab = sol.symbols
    slices = sol.slice_spectra()
    kgrad = slices * (p.kx * tab.r_minus + 1j * p.ky * tab.eta)
    xs = sol.field.xgrid.points
    deta = tab.grid.deta
    num = integrate.trapezoid(np.sum(np.abs(kgrad) ** 2, axis=1), xs) * deta
    den = integrate.trapezoid(np.sum(np.abs(slices) ** 2, axis=1), xs) * deta
    return math.sqrt(num / den) if den > 0 else 0.0


def hardy_support_check(trace: BoundaryData, p: PhysicalParams, any_sign=False) -> float:
    """Fraction of the trace's L2 norm lying in y < 0.

    Only meaningful as a certificate for ky > 0; pass ``any_sign=True`` to
    measure the contrast case.
    """
    if not any_sign and not p.ky > 0:
        raise WrongSignKy("support of the trace is only guaranteed for ky > 0")
    s = trace.samples
    total = np.linalg.norm(s)
    if total == 0:
        return 0.0
    return float(np.linalg.norm(s[trace.grid.points < 0]) / total)


def weighted_spectrum_norms(g: BoundaryData, p: PhysicalParams, s: float, m: int) -> float:
    """``(1/2pi) int |ghat|^2 (1+eta^2)^s |R_-|^(2m) / |Re R_-| d eta`` on the grid."""
    ghat = forward_dft(g.samples, g.grid)
    rm = r_pm(ghat.eta, "-", p)
    w = (1 + ghat.eta**2) ** s * np.abs(rm) ** (2 * m) / np.abs(rm.real)
    return float(np.sum(np.abs(ghat.coeffs) ** 2 * w) * ghat.grid.deta / (2 * math.pi))


def spectral_ode_residual(sol: HalfSpaceSolution) -> float:
    """Max relative gap between centered x differences of the slice spectra and R_- times them."""
    spec = forward_dft(sol.field.values, sol.field.ygrid).coeffs
    dx = sol.field.xgrid.dx
    dfd = (spec[2:] - spec[:-2]) / (2 * dx)
    ref = sol.symbols.r_minus * spec[1:-1]
    return float(np.abs(dfd - ref).max() / np.abs(ref).max())


def pde_residual(sol: HalfSpaceSolution, p: PhysicalParams) -> float:
    """Relative max residual of the interior equation; x by centered differences, y spectral."""
    u = sol.field.values
    grid = sol.field.ygrid
    dx = sol.field.xgrid.dx
    uy = spectral_derivative(u, grid)
    uyy = spectral_derivative(u, grid, order=2)
    ux = (u[2:] - u[:-2]) / (2 * dx)
    uxx = (u[2:] - 2 * u[1:-1] + u[:-2]) / dx**2
    uxy = (uy[2:] - uy[:-2]) / (2 * dx)
    c = slice(1, -1)
    res = (
        1j * (p.kx * ux + p.ky * uy[c])
        + 0.5 * p.epsilon * (p.kx**2 * uyy[c] - 2 * p.kx * p.ky * uxy + p.ky**2 * uxx)
        + 1j * p.nu * u[c]
    )
    scale = np.abs(1j * p.nu * u[c]).max()
    return float(np.abs(res).max() / scale) if scale > 0 else 0.0


def kernel_bound(p: PhysicalParams, ygrid: Grid1D) -> float:
    """``sup |K_hat|`` over the grid frequencies."""
    return float(np.abs(k_hat(ygrid.spectral().eta, p)).max())
