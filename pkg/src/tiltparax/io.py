"""Field files, CSV export and run configuration.

CPF1 layout (little-endian, no padding)::

    b"CPF1" | u32 nx | u32 ny | f64 x0, dx, y0, dy | nx*ny pairs (f64 re, f64 im), x-major
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import ComplexField2D, Grid1D, PhysicalParams
from .errors import (
    BadMagic,
    ConfigError,
    ConfigTypeError,
    InvalidGrid,
    LengthMismatch,
    MissingKey,
    NonPositiveEpsilon,
    NonPositiveNu,
    ParaxialError,
    UnknownKey,
)

MAGIC = b"CPF1"
_HEADER = struct.Struct("<4sII4d")


def write_field(f: ComplexField2D, path):
    header = _HEADER.pack(MAGIC, f.nx, f.ny, f.xgrid.x0, f.xgrid.dx, f.ygrid.x0, f.ygrid.dx)
    body = np.ascontiguousarray(f.values, dtype="<c16").tobytes()
    Path(path).write_bytes(header + body)


def read_field(path) -> ComplexField2D:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise LengthMismatch(f"{path}: {len(raw)} bytes is shorter than the CPF1 header")
    magic, nx, ny, x0, dx, y0, dy = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path}: expected magic {MAGIC!r}, found {magic!r}")
    expected = _HEADER.size + 16 * nx * ny
    if len(raw) != expected:
        raise LengthMismatch(f"{path}: {len(raw)} bytes, header implies {expected}")
    values = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(nx, ny)
    return ComplexField2D(values.astype(complex), Grid1D(nx, x0, dx), Grid1D(ny, y0, dy))


def _fmt(v):
    return f"{float(v):.17g}"


def export_csv(obj, path, x_index=None):
    """Write a decay table (``A,err,bound``) or a field slice (``x,y,re,im,abs``).

    ``obj`` may be a :class:`DecayTable`, a ComplexField2D together with
    ``x_index``, or a ``(x, y, values)`` triple of arrays for an arbitrary slice.
    """
    from .diagnostics import DecayTable

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if isinstance(obj, DecayTable):
            w.writerow(["A", "err", "bound"])
            for row in obj.rows:
                w.writerow([_fmt(v) for v in row])
            return
        if isinstance(obj, ComplexField2D):
            if x_index is None:
                raise ValueError("x_index is required to export a field slice")
            x = np.full(obj.ny, obj.xgrid.point(x_index))
            y, vals = obj.ygrid.points, obj.values[x_index]
        else:
            x, y, vals = (np.asarray(a) for a in obj)
            x = np.broadcast_to(x, np.shape(vals))
            y = np.broadcast_to(y, np.shape(vals))
        w.writerow(["x", "y", "re", "im", "abs"])
        for xi, yi, v in zip(x, y, np.asarray(vals, dtype=complex)):
            w.writerow([_fmt(xi), _fmt(yi), _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])


def read_boundary_samples(path, n):
    """Complex samples from a CSV with ``re`` and ``im`` columns (any others ignored)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "re" not in rows[0] or "im" not in rows[0]:
        raise ConfigError(f"{path}: boundary file needs 're' and 'im' columns")
    if len(rows) != n:
        raise ConfigError(f"{path}: {len(rows)} samples for a grid of {n}")
    return np.array([complex(float(r["re"]), float(r["im"])) for r in rows])


# -- configuration ----------------------------------------------------------

_FLOAT, _INT, _STR, _BOOL = float, int, str, bool

SCHEMA = {
    "params.epsilon": _FLOAT,
    "params.theta": _FLOAT,
    "params.kx": _FLOAT,
    "params.ky": _FLOAT,
    "params.nu": _FLOAT,
    "grids.ny": _INT,
    "grids.ly": _FLOAT,
    "grids.y0": _FLOAT,
    "grids.nx": _INT,
    "grids.lx": _FLOAT,
    "boundary.shape": _STR,
    "boundary.center": _FLOAT,
    "boundary.width": _FLOAT,
    "boundary.amplitude": _FLOAT,
    "boundary.shift_A": _FLOAT,
    "boundary.path": _STR,
    "outputs.field_path": _STR,
    "outputs.csv_path": _STR,
    "diagnostics.energy": _BOOL,
    "diagnostics.stability": _BOOL,
    "diagnostics.transparency": _BOOL,
    "diagnostics.decay": _BOOL,
    "diagnostics.hardy": _BOOL,
    "diagnostics.paraxiality": _BOOL,
}

REQUIRED = ("params.epsilon", "params.nu", "grids.ny", "grids.ly", "grids.nx", "grids.lx",
            "boundary.shape")

DIAGNOSTICS = ("energy", "stability", "transparency", "decay", "hardy", "paraxiality")


@dataclass(frozen=True)
class BoundarySpec:
    shape: str
    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    shift_A: float = 0.0
    path: str | None = None


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    ygrid: Grid1D
    xgrid: Grid1D
    boundary: BoundarySpec
    field_path: str | None = None
    csv_path: str | None = None
    diagnostics: frozenset = field(default_factory=frozenset)


def _convert(key, raw, lineno):
    kind = SCHEMA[key]
    try:
        if kind is _BOOL:
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError
        if kind is _INT:
            return int(raw)
        if kind is _FLOAT:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        return raw
    except ValueError:
        raise ConfigTypeError(f"{key} expects {kind.__name__}, got {raw!r}", lineno) from None


def parse_config(text) -> RunConfig:
    values, lines = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA:
            raise UnknownKey(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        values[key] = _convert(key, raw, lineno)
        lines[key] = lineno

    for key in REQUIRED:
        if key not in values:
            raise MissingKey(f"missing required key {key!r}")

    def relocate(exc, key):
        # re-raise a validation error as a config error carrying the offending line
        cls = exc if isinstance(exc, ConfigError) else ConfigTypeError(str(exc), lines.get(key))
        if isinstance(exc, ConfigError) and exc.line is None and key in lines:
            cls = type(exc)(str(exc), lines[key])
        raise cls from exc

    eps, nu = values["params.epsilon"], values["params.nu"]
    direction_key = "params.theta" if "params.theta" in values else "params.kx"
    try:
        if "params.theta" in values:
            if "params.kx" in values or "params.ky" in values:
                raise ConfigError("give either params.theta or params.kx/params.ky, not both")
            params = PhysicalParams.from_angle(eps, values["params.theta"], nu)
        elif "params.kx" in values and "params.ky" in values:
            params = PhysicalParams(eps, values["params.kx"], values["params.ky"], nu)
        else:
            raise MissingKey("direction needs params.theta or both params.kx and params.ky")
    except NonPositiveNu as exc:
        relocate(exc, "params.nu")
    except NonPositiveEpsilon as exc:
        relocate(exc, "params.epsilon")
    except ParaxialError as exc:
        relocate(exc, direction_key)

    ly, lx = values["grids.ly"], values["grids.lx"]
    try:
        ygrid = Grid1D.span(values["grids.ny"], values.get("grids.y0", -ly / 2), ly)
    except InvalidGrid as exc:
        relocate(exc, "grids.ny")
    try:
        xgrid = Grid1D.span(values["grids.nx"], 0.0, lx)
    except InvalidGrid as exc:
        relocate(exc, "grids.nx")

    for key in ("outputs.field_path", "outputs.csv_path"):
        if key in values and not Path(values[key]).expanduser().resolve().parent.is_dir():
            raise ConfigError(f"{key}: directory of {values[key]!r} does not exist", lines[key])

    shape = values["boundary.shape"]
    if shape not in ("gaussian", "file"):
        raise ConfigTypeError(f"boundary.shape must be gaussian or file, got {shape!r}",
                              lines["boundary.shape"])
    if shape == "file" and "boundary.path" not in values:
        raise MissingKey("boundary.shape = file requires boundary.path", lines["boundary.shape"])
    if values.get("boundary.width", 1.0) <= 0:
        raise ConfigTypeError("boundary.width must be positive", lines["boundary.width"])
    boundary = BoundarySpec(
        shape,
        values.get("boundary.center", 0.0),
        values.get("boundary.width", 1.0),
        values.get("boundary.amplitude", 1.0),
        values.get("boundary.shift_A", 0.0),
        values.get("boundary.path"),
    )
    diags = frozenset(d for d in DIAGNOSTICS if values.get(f"diagnostics.{d}", False))
    return RunConfig(params, ygrid, xgrid, boundary, values.get("outputs.field_path"),
                     values.get("outputs.csv_path"), diags)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())
