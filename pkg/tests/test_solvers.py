import math

import numpy as np
import pytest

from conftest import gaussian, gaussian_hat
from tiltparax.core import BoundaryData, Grid1D, PhysicalParams
from tiltparax.diagnostics import pde_residual, spectral_ode_residual, transparency_error
from tiltparax.errors import InvalidGrid, SupportViolation, ZeroKy
from tiltparax.solvers import (
    g_from_uin,
    solve_halfspace,
    solve_quadrant,
    trace_equation_residual,
)
from tiltparax.spectral import oracle_inverse_fourier
from tiltparax.symbols import entrance_multiplier, r_pm

S2 = math.sqrt(2) / 2
YGRID = Grid1D.span(1024, -32.0, 64.0)
XGRID = Grid1D(16, 0.0, 0.25)


def test_zero_data_gives_zero(params):
    sol = solve_halfspace(BoundaryData(np.zeros(YGRID.n), YGRID, "g"), XGRID, params)
    assert not np.any(sol.field.values)
    U = solve_quadrant(BoundaryData(np.zeros(YGRID.n), YGRID, "g_plus"), XGRID, params)
    assert not np.any(U.field.values)
    uin = BoundaryData(np.zeros(YGRID.n), YGRID, "u_in")
    assert not np.any(g_from_uin(uin, params).samples)


def test_halfspace_matches_quadrature_oracle(params):
    g = BoundaryData.from_function(gaussian(0.5, 1.2), YGRID)
    sol = solve_halfspace(g, Grid1D(8, 0.0, 0.25), params)
    x = 0.5
    row = sol.field.values[sol.field.xgrid.index_of(x)]
    scale = np.abs(row).max()

    def spec(eta):
        return (entrance_multiplier(eta, params) * gaussian_hat(0.5, 1.2)(eta)
                * np.exp(r_pm(eta, "-", params) * x))

    for yv in (-3.0, -1.0, 0.0, 1.5, 4.0):
        ref = oracle_inverse_fourier(spec, yv, window=40.0, steps=32768)
        assert abs(row[YGRID.index_of(yv)] - ref) <= 1e-6 * scale


def test_g_from_uin_plane_wave(params):
    spec = YGRID.spectral()
    eta0 = spec.eta[spec.n // 2 + 12]
    uin = BoundaryData(np.exp(1j * eta0 * YGRID.points), YGRID, "u_in")
    g = g_from_uin(uin, params)
    expected = (1 - params.epsilon * params.ky * eta0 / 2) * uin.samples
    np.testing.assert_allclose(g.samples, expected, atol=1e-12)
    assert g.kind == "g"


def test_g_from_uin_gaussian_against_quadrature(params):
    uin = BoundaryData.from_function(gaussian(1.0, 0.8), YGRID, "u_in")
    g = g_from_uin(uin, params)
    fhat = gaussian_hat(1.0, 0.8)
    for yv in (-1.0, 0.5, 1.0, 2.25):
        dref = oracle_inverse_fourier(lambda e: 1j * e * fhat(e), yv, window=40.0, steps=16384)
        ref = gaussian(1.0, 0.8)(yv) + 0.5j * params.epsilon * params.ky * dref
        assert g.samples[YGRID.index_of(yv)] == pytest.approx(ref, abs=1e-12)


def test_halfspace_linearity(params, rng):
    g1 = gaussian(2.0)(YGRID.points)
    g2 = gaussian(-1.0, 0.6)(YGRID.points) * np.exp(0.5j * YGRID.points)
    a, b = 1.5 - 0.2j, -0.7j
    u = lambda s: solve_halfspace(BoundaryData(s, YGRID, "g"), XGRID, params).field.values
    lhs = u(a * g1 + b * g2)
    np.testing.assert_allclose(lhs, a * u(g1) + b * u(g2), atol=1e-13)


def test_trace_is_first_slice(params):
    g = BoundaryData.from_function(gaussian(), YGRID)
    sol = solve_halfspace(g, XGRID, params)
    np.testing.assert_array_equal(sol.trace0.samples, sol.field.values[0])
    np.testing.assert_allclose(sol.slice_spectra()[0], sol.trace_spectrum.coeffs)


def test_xgrid_must_start_at_zero(params):
    g = BoundaryData.from_function(gaussian(), YGRID)
    with pytest.raises(InvalidGrid):
        solve_halfspace(g, Grid1D(8, 1.0, 0.1), params)


def test_zero_ky_rejected():
    g = BoundaryData.from_function(gaussian(), YGRID)
    with pytest.raises(ZeroKy):
        solve_halfspace(g, XGRID, PhysicalParams(0.1, 1.0, 0.0, 0.5))


def _ode_residual(params, nx):
    g = BoundaryData.from_function(gaussian(0.0, 2.0), YGRID)
    return spectral_ode_residual(solve_halfspace(g, Grid1D(nx, 0.0, 2.0 / nx), params))


def test_spectral_ode_second_order(params):
    r1, r2 = _ode_residual(params, 64), _ode_residual(params, 128)
    assert r2 < 1e-3
    assert 3.5 < r1 / r2 < 4.5


def _pde_residual(params, nx):
    g = BoundaryData.from_function(gaussian(0.0, 2.0), YGRID)
    return pde_residual(solve_halfspace(g, Grid1D(nx, 0.0, 2.0 / nx), params), params)


def test_pde_residual_second_order(params):
    r1, r2 = _pde_residual(params, 64), _pde_residual(params, 128)
    assert 3.5 < r1 / r2 < 4.5


def test_entrance_condition(params):
    # at x = 0: kx u + (i eps / 2) ky (kx d_y - ky d_x) u = kx g, with d_x acting as R_-
    g = BoundaryData.from_function(gaussian(0.5, 1.3), YGRID)
    sol = solve_halfspace(g, XGRID, params)
    from tiltparax.spectral import Spectrum, forward_dft, inverse_dft

    c = sol.trace_spectrum.coeffs
    eta, rm = sol.symbols.eta, sol.symbols.r_minus
    lhs = c * (params.kx + 0.5j * params.epsilon * params.ky * (params.kx * 1j * eta - params.ky * rm))
    ghat = forward_dft(g.samples, YGRID).coeffs
    np.testing.assert_allclose(lhs, params.kx * ghat, atol=1e-12)
    back = inverse_dft(Spectrum(lhs, sol.trace_spectrum.grid))
    np.testing.assert_allclose(back, params.kx * g.samples, atol=1e-12)


def test_quadrant_support_violation(params):
    with pytest.raises(SupportViolation):
        solve_quadrant(BoundaryData(gaussian(3.0)(YGRID.points), YGRID, "g"), XGRID, params)


def test_quadrant_transparent_for_positive_ky(params):
    gp = BoundaryData.from_function(gaussian(3.0, 0.5), YGRID, "g_plus")
    U = solve_quadrant(gp, XGRID, params)
    u = solve_halfspace(gp.with_kind("g"), XGRID, params)
    up = U.ymask
    diff = np.abs(U.field.values[:, up] - u.field.values[:, up]).max()
    assert diff <= 1e-8 * np.abs(u.field.values).max()
    assert transparency_error(U, u) <= 1e-8
    assert not np.any(U.field.values[:, ~up])
    assert trace_equation_residual(U, gp, params) <= 1e-8 * np.linalg.norm(U.trace0)


def test_quadrant_absorbing_differs_for_negative_ky(params_neg):
    gp = BoundaryData.from_function(gaussian(1.0), YGRID, "g_plus")
    U = solve_quadrant(gp, XGRID, params_neg)
    u = solve_halfspace(gp.with_kind("g"), XGRID, params_neg)
    assert transparency_error(U, u) > 1e-6
    # one substitution from the half-space trace, not a fixed point when ky < 0
    assert trace_equation_residual(U, gp, params_neg) > 0


def test_trace_residual_linear_in_noise(params, rng):
    gp = BoundaryData.from_function(gaussian(3.0, 0.5), YGRID, "g_plus")
    U = solve_quadrant(gp, XGRID, params)
    noise = rng.standard_normal(YGRID.n) * U.ymask
    res = []
    for amp in (1e-3, 2e-3, 4e-3):
        V = type(U)(U.field, U.trace0 + amp * noise, U.symbols, U.boundary)
        res.append(trace_equation_residual(V, gp, params))
    assert res[1] / res[0] == pytest.approx(2, rel=1e-3)
    assert res[2] / res[0] == pytest.approx(4, rel=1e-3)


def test_threads_do_not_change_results(params):
    g = BoundaryData.from_function(gaussian(3.0, 0.5), YGRID, "g_plus")
    a = solve_quadrant(g, XGRID, params, workers=1).field.values
    b = solve_quadrant(g, XGRID, params, workers=4).field.values
    np.testing.assert_array_equal(a, b)
