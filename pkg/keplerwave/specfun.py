import cmath
import logging
import math
from numbers import Integral

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from keplerwave.errors import DomainError

# ==========================================================================================
# ==========================================================================================

# File:    specfun.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the special functions used by the squeezed-state modules,
#          modified Bessel functions, generalized Laguerre polynomials, log-gamma and
#          principal-branch complex powers
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayR = NDArray[np.float64]

MAX_BESSEL_ORDER = 200
MAX_BESSEL_ARGUMENT = 200.0
MAX_LAGUERRE_DEGREE = 300


def _check_order(order: int, limit: int, name: str) -> int:
    if isinstance(order, bool) or not isinstance(order, Integral):
        raise DomainError(f"{name} must be an integer, got {order!r}")
    if order < 0 or order > limit:
        raise DomainError(f"{name} must lie in [0, {limit}], got {order}")
    return int(order)


# ==========================================================================================
# ==========================================================================================


def bessel_i(order: int, z: float) -> float:
    """
    Modified Bessel function of the first kind of integer order.

    Args:
        order: Non-negative integer order, at most 200
        z: Real argument in [0, 200]

    Returns:
        I_order(z)

    Raises:
        DomainError: If the order or the argument is out of range
    """
    n = _check_order(order, MAX_BESSEL_ORDER, "order")
    if not 0.0 <= z <= MAX_BESSEL_ARGUMENT:
        raise DomainError(f"z must lie in [0, {MAX_BESSEL_ARGUMENT}], got {z}")
    return float(special.iv(n, z))


# ------------------------------------------------------------------------------------------


def bessel_i_prime(order: int, z: float) -> float:
    """
    Derivative of the modified Bessel function, (I_{n-1}(z) + I_{n+1}(z)) / 2.

    Args:
        order: Non-negative integer order, at most 199
        z: Real argument in [0, 200]

    Returns:
        dI_order/dz at z
    """
    n = _check_order(order, MAX_BESSEL_ORDER - 1, "order")
    if n == 0:
        return bessel_i(1, z)
    return 0.5 * (bessel_i(n - 1, z) + bessel_i(n + 1, z))


# ------------------------------------------------------------------------------------------


def bessel_i_ratio(order: int, z: ArrayLike) -> ArrayR:
    """
    I_order(z) / I_0(z) without overflow, valid for any z >= 0.

    The exponentially scaled functions share the factor e^{-z}, so their quotient is
    the unscaled ratio.
    """
    n = abs(int(order))
    x = np.asarray(z, dtype=np.float64)
    if np.any(x < 0.0):
        raise DomainError("z must be non-negative")
    return np.asarray(special.ive(n, x) / special.ive(0, x), dtype=np.float64)


# ------------------------------------------------------------------------------------------


def scaled_bessel_i(order: ArrayLike, z: float) -> ArrayR:
    """Exponentially scaled I_|order|(z) e^{-z}, vectorized over integer orders"""
    if z < 0.0:
        raise DomainError(f"z must be non-negative, got {z}")
    orders = np.abs(np.asarray(order))
    return np.asarray(special.ive(orders, z), dtype=np.float64)


# ==========================================================================================
# ==========================================================================================


def laguerre(degree: int, superscript: float, x: float) -> float:
    """
    Generalized Laguerre polynomial L_degree^(superscript)(x).

    Args:
        degree: Non-negative integer degree, at most 300
        superscript: Real parameter greater than -1
        x: Non-negative real argument

    Returns:
        The polynomial value
    """
    k = _check_order(degree, MAX_LAGUERRE_DEGREE, "degree")
    if superscript <= -1.0:
        raise DomainError(f"superscript must exceed -1, got {superscript}")
    if x < 0.0:
        raise DomainError(f"x must be non-negative, got {x}")
    return float(special.eval_genlaguerre(k, superscript, x))


# ------------------------------------------------------------------------------------------


def log_abs_laguerre(
    degree: int, superscript: float, x: ArrayLike
) -> tuple[ArrayR, ArrayR]:
    """
    Sign and log-magnitude of L_degree^(superscript)(x) on an array of arguments.

    Radial eigenfunctions combine this with log-space prefactors, which keeps the
    product finite where the polynomial is large and the exponential is small.
    """
    xx = np.asarray(x, dtype=np.float64)
    values = special.eval_genlaguerre(degree, superscript, xx)
    sign = np.sign(values)
    with np.errstate(divide="ignore"):
        log_mag = np.log(np.abs(values))
    return sign, log_mag


# ==========================================================================================
# ==========================================================================================


def log_gamma(x: float) -> float:
    """
    Natural logarithm of the gamma function for positive real x.

    :param x: Positive real argument
    :raises DomainError: If x is not positive
    """
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return float(special.gammaln(x))


# ------------------------------------------------------------------------------------------


def complex_pow(base: complex, exponent: float) -> complex:
    """
    Principal-branch power exp(exponent * Log(base)) for bases in the right half plane.

    :param base: Complex base with positive real part
    :param exponent: Real exponent
    :raises DomainError: If the real part of the base is not positive
    """
    b = complex(base)
    if not b.real > 0.0:
        raise DomainError(f"complex_pow requires Re(base) > 0, got {b}")
    return cmath.exp(exponent * cmath.log(b))


# ------------------------------------------------------------------------------------------


def log_complex_pow(base: complex, exponent: float) -> tuple[float, float]:
    """Log-modulus and argument of complex_pow(base, exponent), for use in log space"""
    b = complex(base)
    if not b.real > 0.0:
        raise DomainError(f"complex_pow requires Re(base) > 0, got {b}")
    return exponent * math.log(abs(b)), exponent * math.atan2(b.imag, b.real)


# ==========================================================================================
# ==========================================================================================
# eof
