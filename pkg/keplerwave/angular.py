import logging
import math
from dataclasses import dataclass, replace
from numbers import Integral, Real

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, special

from keplerwave.errors import DomainError, RangeError

# ==========================================================================================
# ==========================================================================================

# File:    angular.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the circular squeezed states on the unit circle, their
#          construction from an angular-momentum spread and their analytic moments
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayC = NDArray[np.complex128]
ArrayR = NDArray[np.float64]

MAX_SPREAD = 50.0


def wrap_angle(phi: float) -> float:
    """Map an angle onto [-pi, pi)"""
    return (phi + math.pi) % (2.0 * math.pi) - math.pi


# ------------------------------------------------------------------------------------------


def as_integer_beta(beta: float) -> int:
    """
    Return beta as an int, rejecting values that are not exactly integral.

    A non-integer angular momentum makes the angular state multi-valued on the circle,
    so the value is rejected rather than rounded.
    """
    if isinstance(beta, bool):
        raise DomainError("beta must be an integer")
    if isinstance(beta, Integral):
        return int(beta)
    if isinstance(beta, Real) and float(beta).is_integer():
        return int(beta)
    raise DomainError(f"beta must be an integer, got {beta!r}")


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class CssParams:
    """Circular squeezed state exp(delta cos(phi - phi0) + i beta (phi - phi0))

    Attributes:
        delta (float): Inverse angular squeezing, delta >= 0
        beta (int): Angular-momentum expectation
        phi0 (float): Orientation of the packet maximum, stored in [-pi, pi)
    """

    delta: float
    beta: int
    phi0: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.delta) or self.delta < 0.0:
            raise DomainError(f"delta must be finite and non-negative, got {self.delta}")
        object.__setattr__(self, "beta", as_integer_beta(self.beta))
        object.__setattr__(self, "phi0", wrap_angle(float(self.phi0)))

    # ------------------------------------------------------------------------------------------

    def rotated(self, phi0: float) -> "CssParams":
        """Same packet shape centered at a new orientation"""
        return replace(self, phi0=phi0)


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class CssExpectations:
    """Analytic moments of a CSS in the packet's own frame (phi measured from phi0)"""

    cos_phi: float
    sin_phi: float
    cos2_phi: float
    sin2_phi: float
    l_mean: float
    l2_mean: float
    d_cos: float
    d_sin: float
    d_l: float

    @property
    def dsin_dl(self) -> float:
        return self.d_sin * self.d_l

    @property
    def dcos_dl(self) -> float:
        return self.d_cos * self.d_l


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class QInvariant:
    """Quadratic uncertainty combination evaluated at a trial orientation"""

    mu2: float
    nu2: float
    Q: float
    Q0: float


# ==========================================================================================
# ==========================================================================================


def _moments(delta: float) -> tuple[float, float, float]:
    """<cos>, <cos^2>, <sin^2> about the packet axis; stable down to delta = 0"""
    z = 2.0 * delta
    i0, i1, i2 = (float(special.ive(n, z)) for n in (0, 1, 2))
    c1 = i1 / i0
    c2 = 0.5 * (i0 + i2) / i0
    s2 = 0.5 * (i0 - i2) / i0
    return c1, c2, s2


# ------------------------------------------------------------------------------------------


def spread_squared(delta: float) -> float:
    """(Delta L)^2 = (delta/2) I_1(2 delta) / I_0(2 delta)"""
    return 0.5 * delta * _moments(delta)[0]


# ------------------------------------------------------------------------------------------


def css_eval(p: CssParams, phi: ArrayLike) -> ArrayC:
    """
    Evaluate the normalized CSS amplitude.

    The normalization (2 pi I_0(2 delta))^(-1/2) is applied through the scaled Bessel
    function so large delta does not overflow.

    Args:
        p: State parameters
        phi: Angle or array of angles in radians

    Returns:
        Complex amplitude chi(phi)
    """
    theta = np.asarray(phi, dtype=np.float64) - p.phi0
    log_norm = -0.5 * math.log(2.0 * math.pi * float(special.ive(0, 2.0 * p.delta)))
    return np.exp(log_norm + p.delta * (np.cos(theta) - 1.0) + 1j * p.beta * theta)


# ------------------------------------------------------------------------------------------


def css_profile(p: CssParams, phi: ArrayLike) -> ArrayR:
    """Angular probability density |chi(phi)|^2"""
    return np.abs(css_eval(p, phi)) ** 2


# ------------------------------------------------------------------------------------------


def css_fourier_coefficients(p: CssParams, l_values: ArrayLike) -> ArrayC:
    """
    Amplitudes of chi on the angular-momentum eigenstates e^{i l phi}/sqrt(2 pi).

    Args:
        p: State parameters
        l_values: Integer angular momenta

    Returns:
        I_{beta - l}(delta) / sqrt(I_0(2 delta)) * e^{-i l phi0} for each l
    """
    ells = np.asarray(l_values, dtype=np.int64)
    scale = math.sqrt(float(special.ive(0, 2.0 * p.delta)))
    mags = special.ive(np.abs(p.beta - ells), p.delta) / scale
    return mags * np.exp(-1j * ells * p.phi0)


# ==========================================================================================
# ==========================================================================================


def delta_from_spread(dL: float) -> float:
    """
    Invert (Delta L)^2 = (delta/2) I_1(2 delta)/I_0(2 delta) for delta.

    The map is strictly increasing from 0, so a bracketed root search is used.

    Args:
        dL: Angular-momentum spread, 0 <= dL <= 50

    Returns:
        delta, exactly 0 for dL = 0

    Raises:
        DomainError: If dL is negative
        RangeError: If dL exceeds 50
    """
    if dL < 0.0 or not math.isfinite(dL):
        raise DomainError(f"dL must be non-negative, got {dL}")
    if dL == 0.0:
        return 0.0
    if dL > MAX_SPREAD:
        raise RangeError(f"dL = {dL} exceeds the validated range (<= {MAX_SPREAD})")
    target = dL * dL
    upper = 2.0 * target + 2.0
    root = optimize.brentq(
        lambda d: spread_squared(d) - target,
        0.0,
        upper,
        xtol=1e-15,
        rtol=1e-15,
        maxiter=200,
    )
    logger.debug("delta_from_spread", extra={"dL": dL, "delta": root})
    return float(root)


# ------------------------------------------------------------------------------------------


def css_from_spread(dL: float, beta: int, phi0: float = 0.0) -> CssParams:
    """
    Build the CSS with a given angular-momentum spread, mean and orientation.

    Orientation +-pi/2 gives the packet with <cos phi> = 0 and the sign of <sin phi>
    set by the sign of phi0.
    """
    return CssParams(delta=delta_from_spread(dL), beta=beta, phi0=phi0)


# ------------------------------------------------------------------------------------------


def css_expectations(p: CssParams) -> CssExpectations:
    """
    Closed-form CSS moments in the packet frame.

    Args:
        p: State parameters

    Returns:
        CssExpectations with <cos>, <sin>, <cos^2>, <sin^2>, <L>, <L^2> and the three
        standard deviations
    """
    c1, c2, s2 = _moments(p.delta)
    dl2 = 0.5 * p.delta * c1
    return CssExpectations(
        cos_phi=c1,
        sin_phi=0.0,
        cos2_phi=c2,
        sin2_phi=s2,
        l_mean=float(p.beta),
        l2_mean=dl2 + p.beta * p.beta,
        d_cos=math.sqrt(max(c2 - c1 * c1, 0.0)),
        d_sin=math.sqrt(s2),
        d_l=math.sqrt(dl2),
    )


# ------------------------------------------------------------------------------------------


def css_minimality(p: CssParams) -> float:
    """Residual Delta sin(phi) Delta L - |<cos phi>|/2 of the minimized relation"""
    ex = css_expectations(p)
    return ex.d_sin * ex.d_l - 0.5 * abs(ex.cos_phi)


# ------------------------------------------------------------------------------------------


def css_q_invariant(p: CssParams, phi0_axis: float) -> QInvariant:
    """
    Evaluate mu^2, nu^2 and Q = mu^2 + nu^2 for the operators cos(phi - axis) and
    sin(phi - axis), and the reference value Q0 taken at the packet orientation.

    Args:
        p: State parameters
        phi0_axis: Orientation at which the trigonometric operators are centered

    Returns:
        QInvariant record
    """
    c1, c2, s2 = _moments(p.delta)
    dl2 = 0.5 * p.delta * c1
    offset = p.phi0 - phi0_axis
    co, si = math.cos(offset), math.sin(offset)

    mean_cos = c1 * co
    mean_sin = c1 * si
    var_cos = c2 * co * co + s2 * si * si - mean_cos**2
    var_sin = c2 * si * si + s2 * co * co - mean_sin**2

    mu2 = var_cos * dl2 - 0.25 * mean_sin**2
    nu2 = var_sin * dl2 - 0.25 * mean_cos**2
    q0 = dl2 * (c2 - c1 * c1)
    return QInvariant(mu2=mu2, nu2=nu2, Q=mu2 + nu2, Q0=q0)


# ==========================================================================================
# ==========================================================================================
# eof
