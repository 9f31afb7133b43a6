import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from tiltparax.core import Grid1D, PhysicalParams
from tiltparax.errors import EdgeLeakWarning, PointwiseUndefined
from tiltparax.fractional import (
    HalfLineSignal,
    abel_integral,
    derivative_spectral,
    half_derivative_abel,
    half_derivative_spectral,
    operator_symbol,
    sqrt_i_xi,
    sqrt_operator,
    sqrt_operator_symbol,
    y_a,
)

S2 = math.sqrt(2) / 2


def rel_l2(a, b):
    return math.sqrt(np.sum(np.abs(a - b) ** 2) / np.sum(np.abs(b) ** 2))


def bump(grid, center=5.0, width=0.5):
    return HalfLineSignal(np.exp(-((grid.points - center) ** 2) / (2 * width**2)), grid)


def test_y_a_values():
    x = np.array([-1.0, 0.0, 0.5, 2.0])
    np.testing.assert_array_equal(y_a(x, 0.0), [0, 0, 1, 1])
    np.testing.assert_allclose(y_a(x, 0.5), [0, 0, 2 * math.sqrt(0.5 / math.pi), 2 * math.sqrt(2 / math.pi)])
    np.testing.assert_allclose(y_a(x, 2.0), [0, 0, 0.125, 2.0])
    assert y_a(4.0, -0.5) == pytest.approx(1 / math.sqrt(4 * math.pi))


@pytest.mark.parametrize("a", [-1.0, -1.5, -3.0])
def test_y_a_rejects_distributions(a):
    with pytest.raises(PointwiseUndefined):
        y_a(1.0, a)


@pytest.mark.parametrize("a, b", [(-0.5, 0.0), (-0.5, 1.0), (0.3, 0.7)])
def test_y_a_semigroup(a, b):
    # (Y_a * Y_b)(x) = Y_{a+b+1}(x), checked at one point by adaptive quadrature
    x = 1.7
    val, _ = integrate.quad(lambda s: y_a(s, b) / special.gamma(1 + a), 0, x,
                            weight="alg", wvar=(0.0, a))
    assert val == pytest.approx(float(y_a(x, a + b + 1)), rel=1e-7)


@pytest.mark.parametrize("xi", [-7.0, -0.4, 0.3, 1.0, 25.0])
def test_kernel_transform_identity(xi):
    # F(Y_{-1/2})(xi) = exp(-i sign(xi) pi/4) / sqrt|xi|
    def kern(x):
        return x**-0.5 / math.sqrt(math.pi) if x > 0 else 0.0

    c, _ = integrate.quad(kern, 0, np.inf, weight="cos", wvar=abs(xi))
    s, _ = integrate.quad(kern, 0, np.inf, weight="sin", wvar=abs(xi))
    val = c - 1j * math.copysign(1.0, xi) * s
    exact = np.exp(-1j * math.copysign(1.0, xi) * math.pi / 4) / math.sqrt(abs(xi))
    assert abs(val - exact) <= 1e-3 * abs(exact)
    assert abs(1 / sqrt_i_xi(xi) - exact) <= 1e-14


def test_sqrt_i_xi():
    assert sqrt_i_xi(0.0) == 0
    xi = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(sqrt_i_xi(xi) ** 2, 1j * xi, atol=1e-14)
    assert np.all(sqrt_i_xi(xi).real >= 0)


@pytest.mark.parametrize("xi", [0.7, 3.0])
def test_abel_integral_against_quadrature(xi):
    grid = Grid1D(1024, 0.0, 1 / 128)
    f = HalfLineSignal(np.exp(1j * xi * grid.points), grid)
    h = abel_integral(f)
    for i in (64, 333, 1000):
        x = grid.point(i)
        re, _ = integrate.quad(lambda s: math.cos(xi * s), 0, x, weight="alg", wvar=(0.0, -0.5))
        im, _ = integrate.quad(lambda s: math.sin(xi * s), 0, x, weight="alg", wvar=(0.0, -0.5))
        ref = (re + 1j * im) / math.sqrt(math.pi)
        assert abs(h[i] - ref) < (xi * grid.dx) ** 2  # linear interpolation error


def test_abel_exact_on_linear_data():
    grid = Grid1D(512, 0.0, 1 / 64)
    x = grid.points
    np.testing.assert_allclose(abel_integral(HalfLineSignal(np.ones(512), grid)),
                               2 * np.sqrt(x / np.pi), atol=1e-13)
    np.testing.assert_allclose(abel_integral(HalfLineSignal(x, grid)),
                               4 / 3 * x**1.5 / np.sqrt(np.pi), atol=1e-13)


def test_zero_signal():
    grid = Grid1D(64, 0.0, 0.1)
    z = HalfLineSignal(np.zeros(64), grid)
    assert not np.any(half_derivative_abel(z).samples)
    assert not np.any(half_derivative_spectral(z).samples)
    p = PhysicalParams(0.1, S2, S2, 0.5)
    assert not np.any(sqrt_operator(z, p).samples)
    assert not np.any(sqrt_operator(z, p, "convolution").samples)


def test_closed_forms_away_from_origin():
    grid = Grid1D(4096, 0.0, 1 / 256)
    x = grid.points
    away = x >= 0.05
    one = half_derivative_abel(HalfLineSignal(np.ones(grid.n), grid)).samples
    ramp = half_derivative_abel(HalfLineSignal(x, grid)).samples
    np.testing.assert_allclose(one[away], 1 / np.sqrt(np.pi * x[away]), rtol=1e-3)
    np.testing.assert_allclose(ramp[away], 2 * np.sqrt(x[away] / np.pi), rtol=1e-3)


@pytest.mark.parametrize("lam", [2.0, 4.0])
def test_homogeneity(lam):
    # D^(1/2)[f(lam x)] = lam^(1/2) (D^(1/2) f)(lam x): same samples on a grid scaled by 1/lam
    g1 = Grid1D(2048, 0.0, 0.01)
    g2 = Grid1D(2048, 0.0, 0.01 / lam)
    s = np.exp(-((g1.points - 5) ** 2))
    d1 = half_derivative_abel(HalfLineSignal(s, g1)).samples
    d2 = half_derivative_abel(HalfLineSignal(s, g2)).samples
    np.testing.assert_allclose(d2, math.sqrt(lam) * d1, rtol=1e-12, atol=1e-12)


def test_abel_matches_spectral_on_bump():
    grid = Grid1D.span(2**16, 0.0, 800.0)
    f = bump(grid)
    assert rel_l2(half_derivative_abel(f).samples, half_derivative_spectral(f).samples) <= 1e-3


@pytest.mark.slow
def test_abel_matches_spectral_on_ramp_exponential():
    grid = Grid1D.span(2**21, 0.0, 2000.0)
    f = HalfLineSignal.from_function(lambda x: x * np.exp(-x), grid)
    assert rel_l2(half_derivative_spectral(f).samples, half_derivative_abel(f).samples) <= 1e-3


def _abel_semigroup_error(n):
    grid = Grid1D.span(n, 0.0, 64.0)
    x = grid.points
    d = half_derivative_abel(half_derivative_abel(bump(grid, 5.0, 1.0))).samples
    exact = -(x - 5) * np.exp(-((x - 5) ** 2) / 2)
    inner = (x > 1) & (x < 20)
    return np.max(np.abs(d[inner] - exact[inner]))


def test_abel_half_half_second_order():
    e = [_abel_semigroup_error(n) for n in (2**12, 2**13, 2**14)]
    assert e[2] < 2e-5
    for a, b in zip(e, e[1:]):
        assert 3.5 < a / b < 4.5


@pytest.mark.slow
def test_spectral_half_half_is_derivative():
    grid = Grid1D.span(2**20, 0.0, 12800.0)
    f = bump(grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EdgeLeakWarning)  # the x^(-3/2) tail reaches the edge
        hh = half_derivative_spectral(half_derivative_spectral(f))
    x = grid.points
    exact = -(x - 5) / 0.25 * f.samples
    assert rel_l2(hh.samples, exact) <= 1e-6


def test_spectral_derivative_pipeline():
    grid = Grid1D.span(4096, 0.0, 64.0)
    f = bump(grid)
    exact = -(grid.points - 5) / 0.25 * f.samples
    np.testing.assert_allclose(derivative_spectral(f).samples, exact, atol=1e-10)


def test_edge_warning_for_non_decaying_signal():
    grid = Grid1D(64, 0.0, 0.1)
    with pytest.warns(EdgeLeakWarning):
        half_derivative_spectral(HalfLineSignal(np.ones(64), grid))


def test_half_line_signal_validation():
    with pytest.raises(ValueError):
        HalfLineSignal(np.zeros(8), Grid1D(8, 1.0, 0.1))
    with pytest.raises(ValueError):
        HalfLineSignal(np.zeros(7), Grid1D(8, 0.0, 0.1))


@pytest.mark.parametrize("ky_sign", [1, -1])
def test_sqrt_symbol_squares_to_operator(ky_sign, rng):
    p = PhysicalParams(0.1, S2, ky_sign * S2, 0.5)
    xi = rng.uniform(-1e3, 1e3, 1000)
    r = sqrt_operator_symbol(xi, p)
    np.testing.assert_allclose(r**2, operator_symbol(xi, p), rtol=1e-12)
    assert np.all(r.real > 0)
    alt = np.exp(-1j * math.pi / 4) * np.sqrt(
        -1j * p.ky**2 + 2j * p.epsilon * p.kx * xi + 2 * p.epsilon * p.nu * p.kx**2)
    np.testing.assert_allclose(r, alt, rtol=1e-12)


@pytest.mark.parametrize("ky_sign", [1, -1])
def test_sqrt_operator_modes_agree(ky_sign):
    p = PhysicalParams(0.1, S2, ky_sign * S2, 0.5)
    grid = Grid1D.span(16384, 0.0, 128.0)
    u = bump(grid)
    a = sqrt_operator(u, p, "spectral").samples
    b = sqrt_operator(u, p, "convolution").samples
    assert rel_l2(b, a) <= 1e-3


def test_sqrt_operator_squared():
    p = PhysicalParams(0.1, S2, S2, 0.5)
    grid = Grid1D.span(4096, 0.0, 64.0)
    u = bump(grid)
    twice = sqrt_operator(sqrt_operator(u, p), p).samples
    du = -(grid.points - 5) / 0.25 * u.samples
    exact = (-p.ky**2 * u.samples - 2j * p.epsilon * p.kx * du
             - 2j * p.epsilon * p.nu * p.kx**2 * u.samples)
    assert rel_l2(twice, exact) <= 1e-10


def test_sqrt_operator_bad_mode():
    grid = Grid1D(64, 0.0, 0.1)
    with pytest.raises(ValueError):
        sqrt_operator(HalfLineSignal(np.zeros(64), grid), PhysicalParams(0.1, S2, S2, 0.5), "fft")
