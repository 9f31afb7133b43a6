"""Physical parameters, sampling grids and field containers.

Everything here is immutable after construction.  Array-valued fields are
copied and flagged read-only so instances can be shared between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidGrid,
    NonPositiveEpsilon,
    NonPositiveNu,
    NonUnitDirection,
    SupportViolation,
    ZeroKy,
)

UNIT_TOL = 1e-12
NU_FLOOR = 1e-12

BOUNDARY_KINDS = ("g", "u_in", "g_plus", "trace")


def _frozen(a, dtype=complex):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PhysicalParams:
    """Beam and medium parameters.

    Parameters
    ----------
    epsilon : float
        Inverse wave number scale, > 0.
    kx, ky : float
        Components of the unit propagation direction; ``kx > 0``.
    nu : float
        Absorption coefficient, > 0.
    outside_theory : bool
        Set by :meth:`limit_study` when ``nu`` was floored; results are then
        outside the regime where the half-space formulas are proven.
    """

    epsilon: float
    kx: float
    ky: float
    nu: float
    outside_theory: bool = False

    def __post_init__(self):
        for name in ("epsilon", "kx", "ky", "nu"):
            object.__setattr__(self, name, float(getattr(self, name)))
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.epsilon <= 0:
            raise NonPositiveEpsilon(f"epsilon must be > 0, got {self.epsilon}")
        if self.nu <= 0:
            raise NonPositiveNu(f"nu must be > 0, got {self.nu}")
        if self.kx <= 0 or abs(self.kx**2 + self.ky**2 - 1.0) > UNIT_TOL:
            raise NonUnitDirection(
                f"(kx, ky) = ({self.kx}, {self.ky}) must be a unit vector with kx > 0"
            )

    @classmethod
    def from_angle(cls, epsilon, theta, nu):
        """Build from the angle between the beam and the x axis, theta in (-pi/2, pi/2)."""
        if not -math.pi / 2 < theta < math.pi / 2:
            raise NonUnitDirection(f"theta must lie in (-pi/2, pi/2), got {theta}")
        return cls(epsilon, math.cos(theta), math.sin(theta), nu)

    @classmethod
    def limit_study(cls, epsilon, kx, ky, nu):
        """Like the constructor but floors ``nu`` at 1e-12 instead of rejecting it."""
        if nu >= NU_FLOOR:
            return cls(epsilon, kx, ky, nu)
        return cls(epsilon, kx, ky, NU_FLOOR, outside_theory=True)

    @property
    def zero_ky(self) -> bool:
        return self.ky == 0.0

    def require_ky(self) -> "PhysicalParams":
        if self.zero_ky:
            raise ZeroKy("operation divides by ky; normal incidence (ky = 0) is not supported")
        return self


def validate_params(p: PhysicalParams) -> PhysicalParams:
    """Re-check the invariants of ``p`` and return it unchanged.

    ``ky == 0`` is accepted; it shows up as ``p.zero_ky`` and only the
    operations dividing by ky reject it.
    """
    PhysicalParams(p.epsilon, p.kx, p.ky, p.nu, p.outside_theory)
    return p


def _is_pow2(n):
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``x0 + i*dx`` for ``i in range(n)``, ``n`` a power of two >= 8."""

    n: int
    x0: float
    dx: float

    def __post_init__(self):
        if int(self.n) != self.n or not _is_pow2(int(self.n)) or self.n < 8:
            raise InvalidGrid(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.dx > 0 or not math.isfinite(self.dx):
            raise InvalidGrid(f"grid spacing must be positive, got {self.dx}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @classmethod
    def span(cls, n, start, length):
        """Grid of ``n`` points starting at ``start`` with period ``length``."""
        return cls(n, start, length / n)

    @classmethod
    def centered(cls, n, length):
        return cls(n, -length / 2, length / n)

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def points(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def point(self, i):
        return self.x0 + self.dx * i

    def index_of(self, x):
        """Nearest grid index of ``x`` (exact for grid points)."""
        return int(round((x - self.x0) / self.dx))

    def spectral(self) -> "SpectralGrid":
        return SpectralGrid(self)


@dataclass(frozen=True)
class SpectralGrid:
    """Frequencies matched to a :class:`Grid1D`, in ascending order.

    ``eta[j] = deta * (j - n/2)`` so the Nyquist bin sits at ``-n/2 * deta``.
    """

    grid: Grid1D

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def deta(self) -> float:
        return 2 * math.pi / (self.grid.n * self.grid.dx)

    @property
    def eta(self) -> np.ndarray:
        return self.deta * np.arange(-self.n // 2, self.n // 2)


@dataclass(frozen=True, eq=False)
class ComplexField2D:
    """Complex samples ``values[i, j] = u(x_i, y_j)`` (x-major)."""

    values: np.ndarray
    xgrid: Grid1D
    ygrid: Grid1D

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (self.xgrid.n, self.ygrid.n):
            raise InvalidGrid(
                f"field shape {vals.shape} does not match grids ({self.xgrid.n}, {self.ygrid.n})"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @property
    def nx(self):
        return self.xgrid.n

    @property
    def ny(self):
        return self.ygrid.n

    def slice_at(self, i):
        return self.values[i]


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Samples of a boundary datum on a y grid.

    ``kind`` is one of ``g`` (entrance datum), ``u_in`` (incoming envelope),
    ``g_plus`` (datum supported in y > 0) or ``trace`` (a computed x = 0 trace).
    """

    samples: np.ndarray
    grid: Grid1D
    kind: str = "g"
    support_lo: float = field(default=-math.inf)

    def __post_init__(self):
        if self.kind not in BOUNDARY_KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        s = _frozen(self.samples)
        if s.shape != (self.grid.n,):
            raise InvalidGrid(f"{s.shape[0] if s.ndim else 0} samples for a grid of {self.grid.n}")
        if not np.all(np.isfinite(s)):
            raise ValueError("boundary samples contain non-finite values")
        object.__setattr__(self, "samples", s)
        if self.kind == "g_plus":
            bad = (self.grid.points <= 0) & (s != 0)
            if np.any(bad):
                y = self.grid.points[np.argmax(bad)]
                raise SupportViolation(f"g_plus must vanish for y <= 0; nonzero at y = {y}")
            if self.support_lo < 0:
                object.__setattr__(self, "support_lo", 0.0)

    @classmethod
    def from_function(cls, fn, grid, kind="g"):
        y = grid.points
        s = np.asarray(fn(y), dtype=complex)
        if kind == "g_plus":
            s = np.where(y > 0, s, 0)
        return cls(s, grid, kind)

    def with_kind(self, kind):
        return BoundaryData(self.samples, self.grid, kind, self.support_lo)
