"""Half-order derivatives of signals supported in [0, inf).

Two independent routes are provided for each operator:

* convolution: ``(d/dx)^(1/2) f = d/dx (Y_{-1/2} * f)`` with the Abel integral
  evaluated by product integration (the ``(x - s)^(-1/2)`` weight is integrated
  exactly against the piecewise-linear interpolant of f), followed by
  centered differences;
* spectral: multiplication by ``sqrt(i xi)`` on a zero-padded line.

The same pair realises ``sqrt(-ky^2 - 2i eps kx d/dx - 2i eps nu kx^2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft, signal, special

from .core import Grid1D, PhysicalParams
from .errors import EdgeLeakWarning, PointwiseUndefined
from .symbols import principal_sqrt

PAD = 2


@dataclass(frozen=True, eq=False)
class HalfLineSignal:
    """Samples on a grid starting at x = 0; the signal is taken to be 0 for x < 0."""

    samples: np.ndarray
    grid: Grid1D

    def __post_init__(self):
        if self.grid.x0 != 0.0:
            raise ValueError(f"half-line grid must start at 0, got {self.grid.x0}")
        s = np.array(self.samples, dtype=complex)
        if s.shape != (self.grid.n,):
            raise ValueError(f"{s.shape} samples for a grid of {self.grid.n}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_function(cls, fn, grid):
        return cls(np.asarray(fn(grid.points), dtype=complex), grid)

    @property
    def x(self):
        return self.grid.points


def y_a(x, a):
    """``Y_a(x) = x_+^a / Gamma(1 + a)`` for a > -1."""
    if not a > -1:
        raise PointwiseUndefined(f"Y_a has no pointwise values for a = {a} <= -1")
    x = np.asarray(x, dtype=float)
    pos = x > 0
    out = np.zeros_like(x)
    out[pos] = x[pos] ** a / special.gamma(1 + a)
    return out[()] if out.ndim == 0 else out


def _cell_weights(n, dx):
    """Left and right node weights of the cell ending k cells before x_i, k = 1..n."""
    k = np.arange(1, n + 1, dtype=float)
    far = k * dx          # x_i - s_j, left end of cell j
    near = (k - 1) * dx   # x_i - s_{j+1}
    m0 = 2 * (np.sqrt(far) - np.sqrt(near))
    m1 = (2 / 3) * (far**1.5 - near**1.5)
    right = (far * m0 - m1) / dx
    return m0 - right, right


def abel_weights(n, dx):
    """Product-integration weights for ``(1/sqrt(pi)) int_0^{x_i} f(s) (x_i - s)^(-1/2) ds``.

    The rule is Toeplitz, ``h_i = sum_m w[i - m] f_m``, apart from the node at
    x = 0, which has no cell on its left (see :func:`abel_integral`).
    """
    left, right = _cell_weights(n, dx)
    w = np.zeros(n)
    w[1:] = left[: n - 1]
    w += right
    return w / math.sqrt(math.pi)


def abel_integral(f: HalfLineSignal) -> np.ndarray:
    """``Y_{-1/2} * f`` on the grid of ``f``."""
    n, dx = f.grid.n, f.grid.dx
    w = abel_weights(n, dx)
    s = f.samples
    h = signal.fftconvolve(s.real, w)[:n] + 1j * signal.fftconvolve(s.imag, w)[:n]
    # drop the Toeplitz weight of the missing cell left of x = 0
    _, right = _cell_weights(n, dx)
    return h - s[0] * right / math.sqrt(math.pi)


def half_derivative_abel(f: HalfLineSignal) -> HalfLineSignal:
    h = abel_integral(f)
    return HalfLineSignal(np.gradient(h, f.grid.dx, edge_order=2), f.grid)


def sqrt_i_xi(xi):
    """``sqrt(i xi) = exp(i sign(xi) pi/4) sqrt|xi|``, set to 0 at xi = 0."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(1j * np.sign(xi) * math.pi / 4) * np.sqrt(np.abs(xi))


def _warn_far_edge(f: HalfLineSignal, tol=1e-12):
    s = np.abs(f.samples)
    peak = s.max()
    if peak > 0 and s[-1] > tol * peak:
        warnings.warn(
            f"signal does not decay at the far grid edge ({s[-1] / peak:.3e} of max)",
            EdgeLeakWarning,
            stacklevel=3,
        )


def _padded_multiply(f: HalfLineSignal, multiplier, pad=PAD, workers=None):
    n, dx = f.grid.n, f.grid.dx
    line = np.zeros(pad * n, dtype=complex)
    line[:n] = f.samples
    xi = 2 * math.pi * fft.fftfreq(pad * n, dx)
    out = fft.ifft(multiplier(xi) * fft.fft(line, workers=workers), workers=workers)
    return HalfLineSignal(out[:n], f.grid)


def half_derivative_spectral(f: HalfLineSignal, pad=PAD, workers=None) -> HalfLineSignal:
    _warn_far_edge(f)
    return _padded_multiply(f, sqrt_i_xi, pad, workers)


def derivative_spectral(f: HalfLineSignal, pad=PAD, workers=None) -> HalfLineSignal:
    """First derivative through the same padded pipeline (multiplier ``i xi``)."""
    return _padded_multiply(f, lambda xi: 1j * xi, pad, workers)


def sqrt_operator_symbol(xi, p: PhysicalParams):
    """Principal root of ``-ky^2 + 2 eps kx xi - 2i eps nu kx^2``.

    Equal to ``exp(-i pi/4) sqrt(-i ky^2 + 2i eps kx xi + 2 eps nu kx^2)``.
    """
    xi = np.asarray(xi, dtype=float)
    return principal_sqrt(-p.ky**2 + 2 * p.epsilon * p.kx * xi - 2j * p.epsilon * p.nu * p.kx**2)


def operator_symbol(xi, p: PhysicalParams):
    """Symbol of ``-ky^2 - 2i eps kx d/dx - 2i eps nu kx^2`` (the square of the root)."""
    xi = np.asarray(xi, dtype=float)
    return -p.ky**2 + 2 * p.epsilon * p.kx * xi - 2j * p.epsilon * p.nu * p.kx**2


def sqrt_operator(u: HalfLineSignal, p: PhysicalParams, mode="spectral", pad=PAD,
                  workers=None) -> HalfLineSignal:
    """Apply ``sqrt(-ky^2 - 2i eps kx d/dx - 2i eps nu kx^2)`` to ``u``."""
    if mode == "spectral":
        _warn_far_edge(u)
        return _padded_multiply(u, lambda xi: sqrt_operator_symbol(xi, p), pad, workers)
    if mode != "convolution":
        raise ValueError(f"mode must be 'spectral' or 'convolution', got {mode!r}")
    # conjugate by the exponential so the plain half-derivative applies
    rate = 1j * p.ky**2 / (2 * p.epsilon * p.kx) - p.nu * p.kx
    x = u.x
    inner = HalfLineSignal(u.samples * np.exp(-rate * x), u.grid)
    d = half_derivative_abel(inner).samples
    scale = math.sqrt(2 * p.epsilon * p.kx) * np.exp(-1j * math.pi / 4)
    return HalfLineSignal(scale * np.exp(rate * x) * d, u.grid)
