import math

import numpy as np
import pytest

from keplerwave.errors import AccuracyError, DomainError
from keplerwave.ess import EssParams, PhysicalSpec, ess_build, ess_eval
from keplerwave.runge_lenz import (
    PolarGrid,
    commutator_residual,
    hl_from_spectrum,
    runge_lenz_diagnostics,
    z_surface,
)
from keplerwave.spectral import expand

# ==========================================================================================
# ==========================================================================================
# File:    runge_lenz_test.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: Tests for the Runge-Lenz operator, its uncertainty diagnostics and the Z
#          surface
# Instruction: This code can be run in the following ways
#              pytest tests/runge_lenz_test.py -v
#              pytest tests/runge_lenz_test.py -v --run-slow
# ==========================================================================================
# ==========================================================================================
# TEST FIXTURES


@pytest.fixture(scope="module")
def rydberg_params():
    """ESS for n_bar = 45, l_bar = 30, Delta L = 2.5"""
    return ess_build(PhysicalSpec(n_bar=45.0, l_bar=30, dl=2.5))


# ------------------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def analytic(rydberg_params):
    """Analytic diagnostics of the Rydberg packet"""
    return runge_lenz_diagnostics(rydberg_params, "analytic")


# ------------------------------------------------------------------------------------------


@pytest.fixture
def gaussian_grid():
    """Grid and a Cartesian Gaussian centered at (12, 0) with width 1.5"""
    grid = PolarGrid(n_r=600, n_phi=256, r_max=30.0)
    r = grid.r[:, None]
    x = r * np.cos(grid.phi)[None, :]
    y = r * np.sin(grid.phi)[None, :]
    f = np.exp(-((x - 12.0) ** 2 + y**2) / (2.0 * 1.5**2)).astype(np.complex128)
    return grid, f


# ==========================================================================================
# ==========================================================================================
# TEST CODE


def test_polar_grid_validation():
    """Test grid size and radius checks"""
    with pytest.raises(DomainError):
        PolarGrid(n_r=5, n_phi=64, r_max=10.0)
    with pytest.raises(DomainError):
        PolarGrid(n_r=64, n_phi=2, r_max=10.0)
    with pytest.raises(DomainError):
        PolarGrid(n_r=64, n_phi=64, r_max=0.0)
    grid = PolarGrid(n_r=100, n_phi=64, r_max=10.0)
    assert grid.h == pytest.approx(0.1)
    assert grid.r[0] == pytest.approx(0.1)
    assert grid.r[-1] == pytest.approx(10.0)
    assert grid.phi[0] == pytest.approx(-math.pi)


# ------------------------------------------------------------------------------------------


def test_polar_grid_derivatives():
    """Test the spectral angular and sixth-order radial derivatives"""
    grid = PolarGrid(n_r=400, n_phi=64, r_max=40.0)
    r = grid.r[:, None]
    phi = grid.phi[None, :]
    f = (r**2 * np.exp(-r) * np.sin(3.0 * phi)).astype(np.complex128)
    np.testing.assert_allclose(
        grid.d_phi(f), 3.0 * r**2 * np.exp(-r) * np.cos(3.0 * phi), atol=1e-12
    )
    np.testing.assert_allclose(grid.d_phiphi(f), -9.0 * f, atol=1e-12)
    exact_r = (2.0 * r - r**2) * np.exp(-r) * np.sin(3.0 * phi)
    np.testing.assert_allclose(grid.d_r(f)[5:-5], exact_r[5:-5], atol=1e-6)


# ------------------------------------------------------------------------------------------


def test_inner_product_normalizes_packet(rydberg_params):
    """Test the grid inner product of the sampled packet is one"""
    grid = PolarGrid(n_r=600, n_phi=256, r_max=4.0 * rydberg_params.spec.r_out)
    f = ess_eval(rydberg_params, grid.r[:, None], grid.phi[None, :])
    assert grid.inner(f, f).real == pytest.approx(1.0, rel=1e-6)


# ------------------------------------------------------------------------------------------


def test_commutator_identity(gaussian_grid):
    """Test [A_x, A_y] = -2 i H L on a smooth localized function"""
    grid, f = gaussian_grid
    assert commutator_residual(grid, f) < 1e-3


# ------------------------------------------------------------------------------------------


def test_analytic_rydberg_diagnostics(analytic):
    """Test the Runge-Lenz moments of the n = 45, l = 30 packet"""
    assert analytic.method == "analytic"
    assert analytic.ax_mean == pytest.approx(-0.719952, rel=1e-4)
    assert analytic.ay_mean == pytest.approx(0.0, abs=1e-10)
    assert analytic.dax == pytest.approx(0.052965, rel=1e-4)
    assert analytic.day == pytest.approx(0.151816, rel=1e-4)
    assert analytic.product == pytest.approx(0.008041, rel=1e-3)
    assert analytic.hl == pytest.approx(-7.558566e-3, rel=1e-5)
    assert analytic.z == pytest.approx(0.0638, abs=5e-4)
    assert analytic.error_estimate == 0.0


# ------------------------------------------------------------------------------------------


def test_casimir_identity(analytic):
    """Test <A^2> = 1 + 2 <H (L^2 + 1/4)>"""
    assert analytic.a2 == pytest.approx(0.544192, rel=1e-4)
    assert analytic.casimir == pytest.approx(analytic.a2, rel=1e-8)


# ------------------------------------------------------------------------------------------


def test_uncertainty_relation_holds(analytic):
    """Test Delta A_x Delta A_y >= |<HL>|"""
    assert analytic.product >= abs(analytic.hl)
    assert analytic.z >= 0.0


# ------------------------------------------------------------------------------------------


def test_higher_angular_momentum_is_less_localized():
    """Test the l_bar = 40 packet has the larger Z"""
    p = ess_build(PhysicalSpec(n_bar=45.0, l_bar=40, dl=2.5))
    diag = runge_lenz_diagnostics(p, "analytic")
    assert diag.product == pytest.approx(0.011139, rel=1e-3)
    assert diag.hl == pytest.approx(-1.006663e-2, rel=1e-5)
    assert diag.z == pytest.approx(0.1065, abs=5e-4)


# ------------------------------------------------------------------------------------------


def test_hl_from_spectrum_matches_closed_form(rydberg_params, analytic):
    """Test sum |c|^2 E l against the closed-form <HL>"""
    s = expand(rydberg_params, 1e-6)
    assert hl_from_spectrum(s) == pytest.approx(analytic.hl, rel=1e-4)


# ------------------------------------------------------------------------------------------


def test_grid_refinement_failure(rydberg_params):
    """Test a coarse grid with a tight tolerance reports the change"""
    with pytest.raises(AccuracyError) as info:
        runge_lenz_diagnostics(rydberg_params, n_r=64, n_phi=64, rtol=1e-12)
    assert info.value.change > 1e-12


# ------------------------------------------------------------------------------------------


def test_diagnostics_domain(rydberg_params):
    """Test unknown methods and states without <1/r^2>"""
    with pytest.raises(DomainError):
        runge_lenz_diagnostics(rydberg_params, "lattice")  # type: ignore[arg-type]
    shallow = EssParams(alpha=0.4, beta=3, gamma0=0.1, gamma1=0.0, delta=1.0)
    with pytest.raises(DomainError):
        runge_lenz_diagnostics(shallow)
    with pytest.raises(DomainError):
        runge_lenz_diagnostics(shallow, "analytic")


# ------------------------------------------------------------------------------------------


@pytest.mark.slow
def test_grid_matches_analytic(rydberg_params, analytic):
    """Test the fine-grid diagnostics agree with the analytic ones"""
    diag = runge_lenz_diagnostics(rydberg_params)
    assert diag.method == "grid"
    assert diag.dax == pytest.approx(analytic.dax, rel=1e-3)
    assert diag.day == pytest.approx(analytic.day, rel=1e-3)
    assert diag.hl == pytest.approx(analytic.hl, rel=1e-3)
    assert diag.casimir == pytest.approx(diag.a2, rel=1e-3)
    assert diag.error_estimate <= 1e-4


# ------------------------------------------------------------------------------------------


def test_z_surface_shape():
    """Test the scan over orbit elements"""
    surf = z_surface([1000.0, 2000.0], [0.3, 0.7], 318.5, 2.5)
    assert surf.z.shape == (2, 2)
    assert surf.beta_used.dtype == np.int64
    assert np.all(surf.beta_used >= 1)
    assert np.all(np.abs(surf.beta - surf.beta_used) <= 0.5)
    assert np.all(np.isfinite(surf.z))
    assert np.all(surf.z > -1e-9)
    with pytest.raises(DomainError):
        z_surface([], [0.5], 318.5, 2.5)


# ==========================================================================================
# ==========================================================================================
# eof
