import math

import numpy as np
import pytest

from keplerwave.errors import DomainError
from keplerwave.specfun import (
    bessel_i,
    bessel_i_prime,
    bessel_i_ratio,
    complex_pow,
    laguerre,
    log_abs_laguerre,
    log_complex_pow,
    log_gamma,
    scaled_bessel_i,
)

# ==========================================================================================
# ==========================================================================================
# File:    specfun_test.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: Tests for the Bessel, Laguerre and complex power wrappers
# Instruction: This code can be run in the following ways
#              pytest tests/specfun_test.py -v
# ==========================================================================================
# ==========================================================================================
# TEST CODE


def test_bessel_i_at_origin():
    """Test I_0(0) = 1 and I_n(0) = 0 for n > 0"""
    assert bessel_i(0, 0.0) == pytest.approx(1.0)
    assert bessel_i(1, 0.0) == pytest.approx(0.0)
    assert bessel_i(7, 0.0) == pytest.approx(0.0)


# ------------------------------------------------------------------------------------------


def test_bessel_i_prime_matches_finite_difference():
    """Test the Bessel derivative against a central difference"""
    h = 1e-5
    for order in (0, 1, 5):
        numeric = (bessel_i(order, 2.0 + h) - bessel_i(order, 2.0 - h)) / (2.0 * h)
        assert bessel_i_prime(order, 2.0) == pytest.approx(numeric, rel=1e-7)


# ------------------------------------------------------------------------------------------


def test_bessel_i_rejects_out_of_range():
    """Test order and argument checks"""
    with pytest.raises(DomainError):
        bessel_i(-1, 1.0)
    with pytest.raises(DomainError):
        bessel_i(201, 1.0)
    with pytest.raises(DomainError):
        bessel_i(2, 250.0)
    with pytest.raises(DomainError):
        bessel_i(True, 1.0)
    with pytest.raises(DomainError):
        bessel_i(1.5, 1.0)  # type: ignore[arg-type]


# ------------------------------------------------------------------------------------------


def test_bessel_ratio_stays_finite_for_large_argument():
    """Test I_1/I_0 approaches 1 - 1/(2z) where I_0 itself overflows"""
    ratio = bessel_i_ratio(1, 1000.0)
    assert np.isfinite(ratio)
    assert float(ratio) == pytest.approx(1.0 - 1.0 / 2000.0, rel=1e-6)
    with pytest.raises(DomainError):
        bessel_i_ratio(1, -1.0)


# ------------------------------------------------------------------------------------------


def test_scaled_bessel_uses_absolute_order():
    """Test I_{-n} = I_n on the scaled functions"""
    values = scaled_bessel_i(np.array([-3, 3]), 4.0)
    assert values[0] == pytest.approx(values[1])
    assert values[1] == pytest.approx(bessel_i(3, 4.0) * math.exp(-4.0))


# ------------------------------------------------------------------------------------------


def test_laguerre_low_degrees():
    """Test L_1^a(x) = 1 + a - x and L_2^0(x) = (x^2 - 4x + 2) / 2"""
    assert laguerre(0, 3.5, 2.0) == pytest.approx(1.0)
    assert laguerre(1, 2.5, 0.7) == pytest.approx(1.0 + 2.5 - 0.7)
    assert laguerre(2, 0.0, 3.0) == pytest.approx((9.0 - 12.0 + 2.0) / 2.0)


# ------------------------------------------------------------------------------------------


def test_laguerre_domain():
    """Test degree, superscript and argument checks"""
    with pytest.raises(DomainError):
        laguerre(301, 0.0, 1.0)
    with pytest.raises(DomainError):
        laguerre(2, -1.0, 1.0)
    with pytest.raises(DomainError):
        laguerre(2, 0.0, -0.1)


# ------------------------------------------------------------------------------------------


def test_log_abs_laguerre_matches_direct_value():
    """Test sign times exp(log magnitude) reproduces the polynomial"""
    x = np.array([0.3, 2.0, 5.5, 11.0])
    sign, log_mag = log_abs_laguerre(6, 1.5, x)
    direct = np.array([laguerre(6, 1.5, float(v)) for v in x])
    np.testing.assert_allclose(sign * np.exp(log_mag), direct, rtol=1e-12)


# ------------------------------------------------------------------------------------------


def test_log_gamma():
    """Test log Gamma(5) = log 24 and the positivity check"""
    assert log_gamma(5.0) == pytest.approx(math.log(24.0))
    with pytest.raises(DomainError):
        log_gamma(0.0)


# ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("order, z", [(1, 0.5), (5, 12.75), (30, 12.75), (5, 150.0)])
def test_bessel_i_three_term_recurrence(order, z):
    """Test I_{n-1}(z) - I_{n+1}(z) = (2n/z) I_n(z)"""
    lhs = bessel_i(order - 1, z) - bessel_i(order + 1, z)
    assert lhs == pytest.approx(2.0 * order / z * bessel_i(order, z), rel=1e-9)


# ------------------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "degree, superscript, x",
    [(1, 0.0, 0.7), (5, 2.5, 3.0), (20, 61.0, 40.0), (30, 60.0, 50.0)],
)
def test_laguerre_three_term_recurrence(degree, superscript, x):
    """Test (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}"""
    k, a = degree, superscript
    terms = (
        (k + 1) * laguerre(k + 1, a, x),
        (2 * k + 1 + a - x) * laguerre(k, a, x),
        (k + a) * laguerre(k - 1, a, x),
    )
    scale = max(abs(term) for term in terms)
    assert abs(terms[0] - terms[1] + terms[2]) <= 1e-10 * scale


# ------------------------------------------------------------------------------------------


@pytest.mark.parametrize("x", [0.3, 1.0, 7.5, 120.25])
def test_log_gamma_functional_equation(x):
    """Test log Gamma(x + 1) = log Gamma(x) + log x"""
    expected = log_gamma(x) + math.log(x)
    assert log_gamma(x + 1.0) == pytest.approx(expected, rel=1e-12, abs=1e-13)


# ------------------------------------------------------------------------------------------


def test_complex_pow_principal_branch():
    """Test the principal branch and agreement with the log form"""
    assert complex_pow(4.0, 0.5) == pytest.approx(2.0)
    base = complex(0.3, 0.8)
    value = complex_pow(base, 7.25)
    logmod, arg = log_complex_pow(base, 7.25)
    expected = math.exp(logmod) * complex(math.cos(arg), math.sin(arg))
    assert value == pytest.approx(expected)
    with pytest.raises(DomainError):
        complex_pow(complex(-1.0, 1.0), 0.5)
    with pytest.raises(DomainError):
        log_complex_pow(0.0, 2.0)


# ==========================================================================================
# ==========================================================================================
# eof
