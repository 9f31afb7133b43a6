"""Symbols of the oblique advection-Schrodinger operator.

With ``S(eta) = sqrt(1 - 2 eps ky eta / kx^2 + 2i nu eps ky^2 / kx^2)`` (principal
branch) the x-roots of the characteristic polynomial are

    R_pm(i eta) = i (kx/ky) eta - i kx / (eps ky^2) * (1 pm S),

and ``Re R_- < 0 < Re R_+`` whenever ``nu > 0``.  The y-roots ``A_pm`` are the
same expressions with (kx, eta) and (ky, xi) swapped.  All functions accept
scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams, SpectralGrid
from .errors import BranchCut


def principal_sqrt(z):
    """Square root with positive real part, defined off the closed negative real axis."""
    z = np.asarray(z, dtype=complex)
    on_cut = (z.imag == 0) & (z.real <= 0)
    if np.any(on_cut):
        bad = z[on_cut].flat[0] if z.ndim else z
        raise BranchCut(f"principal square root undefined at {complex(bad)}")
    w = np.sqrt(z)
    return w[()] if w.ndim == 0 else w


def _sign(sign):
    if sign in ("+", 1, +1.0):
        return 1.0
    if sign in ("-", -1, -1.0):
        return -1.0
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def root_argument(eta, p: PhysicalParams):
    """``1 - 2 eps ky eta / kx^2 + 2i nu eps ky^2 / kx^2``, the radicand of S."""
    eta = np.asarray(eta, dtype=float)
    return 1 - 2 * p.epsilon * p.ky * eta / p.kx**2 + 2j * p.nu * p.epsilon * p.ky**2 / p.kx**2


def root_s(eta, p: PhysicalParams):
    p.require_ky()
    return principal_sqrt(root_argument(eta, p))


def r_pm(eta, sign, p: PhysicalParams):
    s = _sign(sign)
    S = root_s(eta, p)
    return 1j * p.kx / p.ky * np.asarray(eta) - 1j * p.kx / (p.epsilon * p.ky**2) * (1 + s * S)


def a_pm(xi, sign, p: PhysicalParams):
    s = _sign(sign)
    p.require_ky()
    xi = np.asarray(xi, dtype=float)
    T = principal_sqrt(
        1 - 2 * p.epsilon * p.kx * xi / p.ky**2 + 2j * p.epsilon * p.nu * p.kx**2 / p.ky**2
    )
    return 1j * p.ky / p.kx * xi - 1j * p.ky / (p.epsilon * p.kx**2) * (1 + s * T)


def entrance_multiplier(eta, p: PhysicalParams):
    """Maps the spectrum of the entrance datum g to the spectrum of the x = 0 trace."""
    return 2 / (1 + root_s(eta, p))


def k_hat(eta, p: PhysicalParams):
    """Trace kernel of the quadrant condition, from the R_pm closed form."""
    rp, rm = r_pm(eta, "+", p), r_pm(eta, "-", p)
    return -(rm - 1j * p.kx / p.ky * np.asarray(eta)) / (rp - rm)


def g_hat(gcoeff, eta, p: PhysicalParams):
    rp, rm = r_pm(eta, "+", p), r_pm(eta, "-", p)
    return -2j * p.kx / (p.epsilon * p.ky**2) * np.asarray(gcoeff) / (rp - rm)


def characteristic_poly(xi, eta, p: PhysicalParams):
    """``P_nu(i xi, i eta)``."""
    dx = 1j * np.asarray(xi, dtype=float)
    dy = 1j * np.asarray(eta, dtype=float)
    return (
        1j * (p.kx * dx + p.ky * dy)
        + 0.5 * p.epsilon * (p.ky**2 * dx**2 - 2 * p.kx * p.ky * dx * dy + p.kx**2 * dy**2)
        + 1j * p.nu
    )


def stability_constant(p: PhysicalParams) -> float:
    """Geometric constant bounding ``|M(eta)| (1 + eta^2)^(1/4)``; independent of nu."""
    p.require_ky()
    return 2 * math.sqrt(1 + p.kx**2 / (p.epsilon * abs(p.ky)))


@dataclass(frozen=True, eq=False)
class SymbolTable:
    """Symbols sampled once on a spectral grid and reused for every x slice."""

    params: PhysicalParams
    grid: SpectralGrid
    r_minus: np.ndarray
    r_plus: np.ndarray
    m_entrance: np.ndarray
    k_hat: np.ndarray
    inv_root: np.ndarray

    @classmethod
    def build(cls, params: PhysicalParams, grid: SpectralGrid) -> "SymbolTable":
        eta = grid.eta
        arrays = dict(
            r_minus=r_pm(eta, "-", params),
            r_plus=r_pm(eta, "+", params),
            m_entrance=entrance_multiplier(eta, params),
            k_hat=k_hat(eta, params),
            inv_root=1 / root_s(eta, params),
        )
        for a in arrays.values():
            a.setflags(write=False)
        return cls(params, grid, **arrays)

    @property
    def eta(self):
        return self.grid.eta

    def g_hat(self, gcoeffs):
        """``G_hat`` for spectrum coefficients of g on this grid (equals ghat / S)."""
        return np.asarray(gcoeffs) * self.inv_root

    def propagator(self, x):
        """``exp(R_-(i eta) x)`` for each x (rows) and bin (columns)."""
        x = np.asarray(x, dtype=float)
        return np.exp(np.multiply.outer(x, self.r_minus))
