import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tiltparax import BoundaryData, Grid1D, PhysicalParams  # noqa: E402

S2 = math.sqrt(0.5)

PARAM_SETS = [
    (0.1, S2, S2, 0.5),
    (0.05, math.cos(0.3), math.sin(0.3), 0.2),
    (0.2, math.cos(1.0), math.sin(1.0), 1.5),
]


@pytest.fixture
def params():
    return PhysicalParams(0.1, S2, S2, 0.5)


@pytest.fixture
def params_neg():
    return PhysicalParams(0.1, S2, -S2, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def gaussian(center=0.0, width=1.0, amplitude=1.0):
    return lambda y: amplitude * np.exp(-((y - center) ** 2) / (2 * width**2))


def gaussian_hat(center=0.0, width=1.0, amplitude=1.0):
    """Analytic transform of :func:`gaussian` under F(f)(eta) = int f e^{-i eta y} dy."""
    def fn(eta):
        eta = np.asarray(eta, dtype=float)
        return (amplitude * width * math.sqrt(2 * math.pi)
                * np.exp(-(width * eta) ** 2 / 2) * np.exp(-1j * eta * center))
    return fn


def ydata(fn, grid, kind="g"):
    return BoundaryData.from_function(fn, grid, kind)


@pytest.fixture
def ygrid():
    return Grid1D.span(1024, -32.0, 64.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
