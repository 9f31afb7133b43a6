"""Spectral solver for the oblique (tilted-frame) paraxial equation."""

from .core import BoundaryData, ComplexField2D, Grid1D, PhysicalParams, SpectralGrid, validate_params
from .solvers import g_from_uin, solve_halfspace, solve_quadrant, trace_equation_residual
from .symbols import SymbolTable

__all__ = [
    "BoundaryData",
    "ComplexField2D",
    "Grid1D",
    "PhysicalParams",
    "SpectralGrid",
    "SymbolTable",
    "g_from_uin",
    "solve_halfspace",
    "solve_quadrant",
    "trace_equation_residual",
    "validate_params",
]
