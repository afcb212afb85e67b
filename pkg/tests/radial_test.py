import math

import numpy as np
import pytest

from keplerwave.errors import DomainError
from keplerwave.radial import (
    RssParams,
    radial_quadrature,
    require_inverse_square,
    rss_eval,
    rss_expectations,
    rss_from_moments,
    rss_moment,
    rss_oscillator_uncertainty,
    rss_squeezing,
    rss_support,
)

# ==========================================================================================
# ==========================================================================================
# File:    radial_test.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: Tests for the radial squeezed states and the radial quadrature rule
# Instruction: This code can be run in the following ways
#              pytest tests/radial_test.py -v
# ==========================================================================================
# ==========================================================================================
# TEST FIXTURES


@pytest.fixture(params=[(2.5, 0.4, 0.0), (57.408080, 0.01696509, 0.0), (8.0, 0.2, 0.3)])
def rss(request):
    """Radial states from a compact packet up to the Rydberg-sized one"""
    alpha, gamma0, gamma1 = request.param
    return RssParams(alpha=alpha, gamma0=gamma0, gamma1=gamma1)


# ------------------------------------------------------------------------------------------


@pytest.fixture
def rule(rss):
    """Quadrature nodes and weights covering the state's support"""
    lo, hi = rss_support(rss, 1e-20)
    return radial_quadrature(lo, hi, panels=64, order=16)


# ------------------------------------------------------------------------------------------


def _apply_momentum(p: RssParams, r):
    """p_r psi = -i (d/dr + 1/2r) psi for the closed-form state"""
    return -1j * rss_eval(p, r) * ((p.alpha + 0.5) / r - p.gamma0 - 1j * p.gamma1)


# ==========================================================================================
# ==========================================================================================
# TEST CODE


def test_params_validation():
    """Test the positivity and finiteness checks"""
    with pytest.raises(DomainError):
        RssParams(alpha=0.0, gamma0=1.0)
    with pytest.raises(DomainError):
        RssParams(alpha=1.0, gamma0=-1.0)
    with pytest.raises(DomainError):
        RssParams(alpha=1.0, gamma0=1.0, gamma1=math.inf)
    with pytest.raises(DomainError):
        rss_eval(RssParams(alpha=1.0, gamma0=1.0), [0.0, 1.0])


# ------------------------------------------------------------------------------------------


def test_normalization(rss, rule):
    """Test the integral of |psi|^2 r dr is one"""
    r, w = rule
    density = np.abs(rss_eval(rss, r)) ** 2 * r
    assert float(np.sum(w * density)) == pytest.approx(1.0, rel=1e-10)


# ------------------------------------------------------------------------------------------


def test_expectations_against_quadrature(rss, rule):
    """Test the closed-form moments against direct integration"""
    r, w = rule
    density = np.abs(rss_eval(rss, r)) ** 2 * r * w
    ex = rss_expectations(rss)
    assert ex.r == pytest.approx(float(np.sum(density * r)), rel=1e-10)
    assert ex.r2 == pytest.approx(float(np.sum(density * r * r)), rel=1e-10)
    assert ex.inv_r == pytest.approx(float(np.sum(density / r)), rel=1e-10)
    assert ex.inv_r2 == pytest.approx(float(np.sum(density / r**2)), rel=1e-10)
    assert ex.dr == pytest.approx(math.sqrt(ex.r2 - ex.r**2), rel=1e-8)
    assert ex.pr == -rss.gamma1


# ------------------------------------------------------------------------------------------


def test_momentum_square_against_quadrature(rss, rule):
    """Test <p_r^2> with p_r = -i (d/dr + 1/2r) applied analytically"""
    r, w = rule
    density = np.abs(rss_eval(rss, r)) ** 2 * r * w
    a = rss.alpha
    integrand = ((a + 0.5) / r - rss.gamma0) ** 2 + rss.gamma1**2
    ex = rss_expectations(rss)
    assert ex.pr2 == pytest.approx(float(np.sum(density * integrand)), rel=1e-9)
    assert ex.dpr == pytest.approx(math.sqrt(ex.pr2 - ex.pr**2), rel=1e-9)


# ------------------------------------------------------------------------------------------


def test_radial_momentum_is_hermitian():
    """Test <f|P g> = <P f|g> under r dr and that <P> is real"""
    f = RssParams(alpha=8.0, gamma0=0.2, gamma1=0.3)
    g = RssParams(alpha=6.0, gamma0=0.25, gamma1=-0.1)
    lo = min(rss_support(f, 1e-20)[0], rss_support(g, 1e-20)[0])
    hi = max(rss_support(f, 1e-20)[1], rss_support(g, 1e-20)[1])
    r, w = radial_quadrature(lo, hi, panels=64, order=16)
    left = complex(np.sum(np.conj(rss_eval(f, r)) * _apply_momentum(g, r) * r * w))
    right = complex(np.sum(np.conj(_apply_momentum(f, r)) * rss_eval(g, r) * r * w))
    assert abs(left) > 1e-3
    assert left == pytest.approx(right, rel=1e-10)
    own = complex(np.sum(np.conj(rss_eval(f, r)) * _apply_momentum(f, r) * r * w))
    assert own.imag == pytest.approx(0.0, abs=1e-12)
    assert own.real == pytest.approx(rss_expectations(f).pr, rel=1e-10)


# ------------------------------------------------------------------------------------------


def test_squeezing_matches_uncertainties(rss, rule):
    """Test S = 2 (Delta R)^2 / <1/r^2> = Delta R / Delta P from the moments"""
    r, w = rule
    density = np.abs(rss_eval(rss, r)) ** 2 * r * w
    inv_r = float(np.sum(density / r))
    inv_r2 = float(np.sum(density / r**2))
    u = rss_oscillator_uncertainty(rss)
    assert u.dR**2 == pytest.approx(inv_r2 - inv_r**2, rel=1e-8)
    assert rss_squeezing(rss) == pytest.approx(2.0 * u.dR**2 / inv_r2, rel=1e-8)
    assert rss_squeezing(rss) == pytest.approx(u.dR / u.dP, rel=1e-12)


# ------------------------------------------------------------------------------------------


def test_moment_formula():
    """Test <r^k> against the named moments and the divergence check"""
    p = RssParams(alpha=3.0, gamma0=0.5)
    ex = rss_expectations(p)
    assert rss_moment(p, 1.0) == pytest.approx(ex.r)
    assert rss_moment(p, -2.0) == pytest.approx(ex.inv_r2)
    assert rss_moment(p, 0.0) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        rss_moment(RssParams(alpha=0.3, gamma0=1.0), -3.0)


# ------------------------------------------------------------------------------------------


def test_inverse_square_domain():
    """Test alpha <= 1/2 is refused where <1/r^2> is needed"""
    p = RssParams(alpha=0.5, gamma0=1.0)
    with pytest.raises(DomainError):
        require_inverse_square(p)
    with pytest.raises(DomainError):
        rss_expectations(p)
    with pytest.raises(DomainError):
        rss_oscillator_uncertainty(p)


# ------------------------------------------------------------------------------------------


def test_from_moments_inverts_parameters():
    """Test the state built from squeezing, <1/r> and <p_r> carries those values"""
    p = rss_from_moments(0.25, 0.003, 0.02)
    assert p.alpha == pytest.approx(3.5)
    assert rss_squeezing(p) == pytest.approx(0.25)
    ex = rss_expectations(p)
    assert ex.inv_r == pytest.approx(0.003)
    assert ex.pr == pytest.approx(0.02)
    with pytest.raises(DomainError):
        rss_from_moments(2.0, 0.003, 0.0)
    with pytest.raises(DomainError):
        rss_from_moments(0.5, 0.0, 0.0)


# ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("scale", [1.0, 0.8, 1.3])
def test_oscillator_relation_is_saturated(rss, scale):
    """Test the oscillator-form radial relation holds with equality"""
    u = rss_oscillator_uncertainty(rss, scale)
    assert u.residual == pytest.approx(0.0, abs=1e-12 * u.bound)
    assert u.dR * u.dP == pytest.approx(u.bound, rel=1e-10)


# ------------------------------------------------------------------------------------------


def test_rydberg_packet_sits_at_outer_apsis():
    """Test the n = 45, l = 30 parameters place <r> at the outer turning point"""
    ex = rss_expectations(RssParams(alpha=57.408080, gamma0=0.01696509))
    assert ex.r == pytest.approx(3442.8385, rel=1e-5)
    assert ex.dr**2 == pytest.approx(101469.0, rel=1e-3)


# ------------------------------------------------------------------------------------------


def test_support_brackets_mass():
    """Test the support interval leaves negligible mass outside"""
    p = RssParams(alpha=20.0, gamma0=0.05)
    lo, hi = rss_support(p, 1e-12)
    assert 0.0 < lo < rss_expectations(p).r < hi
    r, w = radial_quadrature(lo, hi, panels=48)
    mass = float(np.sum(w * np.abs(rss_eval(p, r)) ** 2 * r))
    assert mass == pytest.approx(1.0, abs=1e-11)


# ------------------------------------------------------------------------------------------


def test_quadrature_integrates_polynomials():
    """Test the composite rule on a polynomial and an invalid interval"""
    r, w = radial_quadrature(0.0, 4.0, panels=4, order=8)
    assert float(np.sum(w * r * r)) == pytest.approx(64.0 / 3.0, rel=1e-13)
    with pytest.raises(DomainError):
        radial_quadrature(2.0, 1.0)


# ==========================================================================================
# ==========================================================================================
# eof
