"""Half-space and quadrant solutions of the oblique paraxial equation.

The half-space solution is explicit in the transverse Fourier variable:

    F_y(u)(x, eta) = M(eta) F_y(g)(eta) exp(R_-(i eta) x),

and the quadrant solution is built from the half-space trace ``u0`` by

    F_y(U)(x, .) = (K_hat F_y(u0 1_{y>=0}) + G_hat) exp(R_- x),  restricted to y >= 0.

Every x slice is independent, so a whole field is one batched inverse FFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BoundaryData, ComplexField2D, Grid1D, PhysicalParams
from .errors import InvalidGrid, SupportViolation
from .spectral import (
    Spectrum,
    apply_multiplier,
    check_edges,
    forward_dft,
    inverse_dft,
    spectral_derivative,
)
from .symbols import SymbolTable


@dataclass(frozen=True, eq=False)
class HalfSpaceSolution:
    field: ComplexField2D
    trace0: BoundaryData
    symbols: SymbolTable
    trace_spectrum: Spectrum

    @property
    def params(self):
        return self.symbols.params

    def slice_spectra(self):
        """``F_y(u)(x_i, eta_j)`` evaluated from the closed form."""
        return self.trace_spectrum.coeffs * self.symbols.propagator(self.field.xgrid.points)


@dataclass(frozen=True, eq=False)
class QuadrantSolution:
    """Solution on x >= 0, y >= 0.

    ``field`` and ``trace0`` live on the full y grid with zeros at y < 0 so
    they share grids with the half-space solution; ``ymask`` marks y >= 0.
    """

    field: ComplexField2D
    trace0: np.ndarray
    symbols: SymbolTable
    boundary: BoundaryData

    @property
    def ymask(self):
        return self.field.ygrid.points >= 0


def g_from_uin(uin: BoundaryData, p: PhysicalParams, workers=None) -> BoundaryData:
    """Entrance datum ``g = u_in + (i eps ky / 2) d_y u_in`` for a y-only incoming envelope."""
    dy_uin = spectral_derivative(uin.samples, uin.grid, workers=workers)
    g = uin.samples + 0.5j * p.epsilon * p.ky * dy_uin
    return BoundaryData(g, uin.grid, "g", uin.support_lo)


def _check_xgrid(xgrid: Grid1D):
    if xgrid.x0 != 0.0:
        raise InvalidGrid(f"x grid must start at x = 0, got x0 = {xgrid.x0}")


def solve_halfspace(g: BoundaryData, xgrid: Grid1D, p: PhysicalParams, workers=None,
                    symbols: SymbolTable | None = None) -> HalfSpaceSolution:
    """Exact half-space solution sampled on ``xgrid`` x ``g.grid``.

    ``workers`` is forwarded to the FFT; results do not depend on it.
    """
    p.require_ky()
    _check_xgrid(xgrid)
    check_edges(g.samples, "entrance datum g")
    if symbols is None:
        symbols = SymbolTable.build(p, g.grid.spectral())
    ghat = forward_dft(g.samples, g.grid, workers)
    u0hat = apply_multiplier(ghat, symbols.m_entrance)
    slices = u0hat.coeffs * symbols.propagator(xgrid.points)
    values = inverse_dft(Spectrum(slices, u0hat.grid), workers)
    field = ComplexField2D(values, xgrid, g.grid)
    trace = BoundaryData(values[0], g.grid, "trace")
    return HalfSpaceSolution(field, trace, symbols, u0hat)


def solve_quadrant(gp: BoundaryData, xgrid: Grid1D, p: PhysicalParams, workers=None,
                   symbols: SymbolTable | None = None) -> QuadrantSolution:
    """Quadrant solution under the transparent/absorbing condition on y = 0."""
    p.require_ky()
    _check_xgrid(xgrid)
    y = gp.grid.points
    if np.any((y <= 0) & (gp.samples != 0)):
        raise SupportViolation("quadrant datum must vanish for y <= 0")
    check_edges(gp.samples, "quadrant datum g_plus")
    if symbols is None:
        symbols = SymbolTable.build(p, gp.grid.spectral())
    ghat = forward_dft(gp.samples, gp.grid, workers)
    u0 = inverse_dft(apply_multiplier(ghat, symbols.m_entrance), workers)
    upper = y >= 0
    w = np.where(upper, u0, 0)
    what = forward_dft(w, gp.grid, workers)
    start = what.coeffs * symbols.k_hat + symbols.g_hat(ghat.coeffs)
    slices = start * symbols.propagator(xgrid.points)
    values = inverse_dft(Spectrum(slices, what.grid), workers) * upper
    field = ComplexField2D(values, xgrid, gp.grid)
    return QuadrantSolution(field, values[0].copy(), symbols, gp)


def trace_equation_residual(sol: QuadrantSolution, gp: BoundaryData, p: PhysicalParams,
                            workers=None) -> float:
    """L2(y >= 0) norm of ``U0 - F^-1(K_hat F(U0 1_{y>=0}) + G_hat)``."""
    grid = sol.field.ygrid
    if grid != gp.grid:
        raise InvalidGrid("quadrant solution and datum live on different y grids")
    symbols = sol.symbols if sol.symbols.params == p else SymbolTable.build(p, grid.spectral())
    upper = sol.ymask
    u0 = np.where(upper, sol.trace0, 0)
    ghat = forward_dft(gp.samples, grid, workers)
    rhs = inverse_dft(
        Spectrum(forward_dft(u0, grid, workers).coeffs * symbols.k_hat
                 + symbols.g_hat(ghat.coeffs), ghat.grid),
        workers,
    )
    return math.sqrt(float(np.sum(np.abs((u0 - rhs)[upper]) ** 2)) * grid.dx)
