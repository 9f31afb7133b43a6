"""Continuous-convention DFT, Fourier multipliers and discrete Sobolev norms.

The transform convention throughout is

    F(f)(eta) = integral f(y) exp(-i eta y) dy,
    f(y)      = (1 / 2 pi) integral F(f)(eta) exp(i eta y) d eta,

realised on a uniform grid by a phase-shifted, ``dy``-scaled FFT.  Spectra
are stored in ascending frequency order (see :class:`SpectralGrid`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .core import Grid1D, SpectralGrid
from .errors import EdgeLeakWarning, NonFiniteMultiplier

EDGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Spectrum:
    coeffs: np.ndarray
    grid: SpectralGrid

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape[-1] != self.grid.n:
            raise ValueError(f"{c.shape[-1]} coefficients for a grid of {self.grid.n}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def eta(self):
        return self.grid.eta

    def __add__(self, other):
        return Spectrum(self.coeffs + other.coeffs, self.grid)

    def __rmul__(self, a):
        return Spectrum(a * self.coeffs, self.grid)


def edge_ratio(data):
    """Largest edge magnitude over the largest magnitude (0 for zero data)."""
    data = np.asarray(data)
    peak = np.max(np.abs(data), axis=-1)
    edge = np.maximum(np.abs(data[..., 0]), np.abs(data[..., -1]))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(peak > 0, edge / np.where(peak > 0, peak, 1), 0.0)
    return float(np.max(r))


def check_edges(data, what="data", tol=EDGE_TOL, stacklevel=3):
    r = edge_ratio(data)
    if r > tol:
        warnings.warn(
            f"{what} does not decay at the grid edges (edge/max = {r:.3e} > {tol:g}); "
            "periodic wrap-around may pollute the result",
            EdgeLeakWarning,
            stacklevel=stacklevel,
        )
    return r


def _phase(grid: Grid1D):
    return np.exp(-1j * grid.spectral().eta * grid.x0)


def forward_dft(data, grid: Grid1D, workers=None) -> Spectrum:
    """Approximate ``F(f)(eta_j)`` from samples of ``f`` on ``grid``.

    Works along the last axis, so a stack of lines (e.g. all x slices of a
    field) is transformed in one call.
    """
    data = np.asarray(data, dtype=complex)
    if not np.all(np.isfinite(data)):
        raise ValueError("forward_dft: input contains non-finite values")
    c = fft.fftshift(fft.fft(data, axis=-1, workers=workers), axes=-1)
    return Spectrum(grid.dx * c * _phase(grid), grid.spectral())


def inverse_dft(s: Spectrum, workers=None) -> np.ndarray:
    """Samples of ``(1/2pi) integral F(eta) exp(i eta y) d eta`` on the matching grid."""
    grid = s.grid.grid
    c = fft.ifftshift(s.coeffs / _phase(grid), axes=-1)
    return fft.ifft(c, axis=-1, workers=workers) / grid.dx


def _evaluate(m, eta):
    if callable(m):
        vals = np.asarray(m(eta), dtype=complex)
    else:
        vals = np.asarray(m, dtype=complex)
    return np.broadcast_to(vals, eta.shape)


def apply_multiplier(s: Spectrum, m) -> Spectrum:
    """Multiply each bin by ``m(eta_j)``; ``m`` is a callable or a precomputed array."""
    eta = s.eta
    vals = _evaluate(m, eta)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise NonFiniteMultiplier(float(eta[np.argmax(bad)]))
    return Spectrum(s.coeffs * vals, s.grid)


def sobolev_norm_sq(s: Spectrum, order: float) -> float:
    """Discrete ``||f||^2_{H^order} = (1/2pi) sum |c_j|^2 (1 + eta_j^2)^order deta``."""
    w = (1.0 + s.eta**2) ** order
    return float(np.sum(np.abs(s.coeffs) ** 2 * w) * s.grid.deta / (2 * math.pi))


def l2_norm_sq(data, grid: Grid1D) -> float:
    return float(np.sum(np.abs(data) ** 2) * grid.dx)


def spectral_derivative(data, grid: Grid1D, order=1, workers=None):
    s = forward_dft(data, grid, workers)
    return inverse_dft(apply_multiplier(s, (1j * s.eta) ** order), workers)


def oracle_inverse_fourier(spec_fn, y, window, steps=4096):
    """Composite trapezoid value of ``(1/2pi) int_{-window}^{window} spec_fn(eta) e^{i eta y} d eta``.

    Brute-force reference for the FFT pipeline; it shares no code with it.
    """
    if steps < 1024:
        raise ValueError("oracle_inverse_fourier needs at least 1024 steps")
    eta = np.linspace(-window, window, steps + 1)
    vals = np.asarray(spec_fn(eta), dtype=complex) * np.exp(1j * eta * y)
    h = 2 * window / steps
    return complex(h * (vals.sum() - 0.5 * (vals[0] + vals[-1])) / (2 * math.pi))
