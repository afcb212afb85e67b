import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special, stats

from keplerwave.errors import DomainError

# ==========================================================================================
# ==========================================================================================

# File:    radial.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the planar radial squeezed states, their analytic moments
#          and the radial quadrature rules shared by the expansion code
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayC = NDArray[np.complex128]
ArrayR = NDArray[np.float64]

SUPPORT_EPS = 1e-32


@dataclass(frozen=True)
class RssParams:
    """Radial squeezed state N_1 r^alpha exp(-gamma0 r - i gamma1 r)

    Attributes:
        alpha (float): Radial exponent, alpha > 0
        gamma0 (float): Decay rate in inverse bohr, gamma0 > 0
        gamma1 (float): Phase gradient in inverse bohr
    """

    alpha: float
    gamma0: float
    gamma1: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not (math.isfinite(self.gamma0) and self.gamma0 > 0.0):
            raise DomainError(f"gamma0 must be positive, got {self.gamma0}")
        if not math.isfinite(self.gamma1):
            raise DomainError(f"gamma1 must be finite, got {self.gamma1}")

    # ------------------------------------------------------------------------------------------

    @property
    def log_norm(self) -> float:
        """log N_1 with N_1 = (2 gamma0)^(alpha+1) / sqrt(Gamma(2 alpha + 2))"""
        a = self.alpha
        log_gamma = float(special.gammaln(2 * a + 2))
        return (a + 1.0) * math.log(2.0 * self.gamma0) - 0.5 * log_gamma


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class RssExpectations:
    """Closed-form radial moments of an RSS"""

    r: float
    r2: float
    pr: float
    pr2: float
    inv_r: float
    inv_r2: float
    dr: float
    dpr: float

    @property
    def dr_dpr(self) -> float:
        return self.dr * self.dpr


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class OscillatorUncertainty:
    """Terms of the oscillator-form relation Delta R Delta P >= bound"""

    dR: float
    dP: float
    bound: float
    residual: float


# ==========================================================================================
# ==========================================================================================


def require_inverse_square(p: RssParams) -> None:
    """Raise DomainError unless alpha > 1/2, the domain of the 1/r^2 based results"""
    if p.alpha <= 0.5:
        raise DomainError(f"<1/r^2> based results need alpha > 1/2, got {p.alpha}")


# ------------------------------------------------------------------------------------------


def rss_eval(p: RssParams, r: ArrayLike) -> ArrayC:
    """
    Evaluate psi(r), normalized so that the integral of |psi|^2 r dr is one.

    Args:
        p: State parameters
        r: Radius or array of radii, all positive

    Returns:
        Complex amplitude psi(r)

    Raises:
        DomainError: If any radius is not positive
    """
    rr = np.asarray(r, dtype=np.float64)
    if np.any(rr <= 0.0):
        raise DomainError("rss_eval requires r > 0")
    log_mag = p.log_norm + p.alpha * np.log(rr) - p.gamma0 * rr
    return np.exp(log_mag - 1j * p.gamma1 * rr)


# ------------------------------------------------------------------------------------------


def rss_moment(p: RssParams, k: float) -> float:
    """
    <r^k> = Gamma(2 alpha + 2 + k) / (Gamma(2 alpha + 2) (2 gamma0)^k).

    :param p: State parameters
    :param k: Real power with 2 alpha + 2 + k > 0
    """
    shape = 2.0 * p.alpha + 2.0
    if shape + k <= 0.0:
        raise DomainError(f"<r^{k}> diverges for alpha = {p.alpha}")
    log_val = special.gammaln(shape + k) - special.gammaln(shape)
    log_val -= k * math.log(2 * p.gamma0)
    return float(np.exp(log_val))


# ------------------------------------------------------------------------------------------


def rss_from_moments(S: float, inv_r: float, pr: float) -> RssParams:
    """
    Parameters of the RSS with squeezing S, <1/r> and <p_r>.

    Args:
        S: Squeezing Delta R / Delta P, 0 < S < 2
        inv_r: Expectation of 1/r, positive
        pr: Expectation of the radial momentum

    Returns:
        RssParams with alpha = 1/S - 1/2, gamma0 = <1/r>/S, gamma1 = -<p_r>
    """
    if not 0.0 < S < 2.0:
        raise DomainError(f"squeezing must satisfy 0 < S < 2, got {S}")
    if inv_r <= 0.0:
        raise DomainError(f"<1/r> must be positive, got {inv_r}")
    return RssParams(alpha=1.0 / S - 0.5, gamma0=inv_r / S, gamma1=-pr)


# ------------------------------------------------------------------------------------------


def rss_squeezing(p: RssParams) -> float:
    """Squeezing S = 2 (Delta R)^2 / <1/r^2> = 2 / (2 alpha + 1)"""
    return 2.0 / (2.0 * p.alpha + 1.0)


# ------------------------------------------------------------------------------------------


def rss_expectations(p: RssParams) -> RssExpectations:
    """
    Radial moments of an RSS from the gamma-function moment formula.

    Args:
        p: State parameters with alpha > 1/2

    Returns:
        RssExpectations holding <r>, <r^2>, <p_r>, <p_r^2>, <1/r>, <1/r^2>, Delta r
        and Delta p_r
    """
    require_inverse_square(p)
    a, g0, g1 = p.alpha, p.gamma0, p.gamma1
    r1 = (a + 1.0) / g0
    r2 = (a + 1.0) * (2.0 * a + 3.0) / (2.0 * g0 * g0)
    pr2 = g0 * g0 / (2.0 * a) + g1 * g1
    return RssExpectations(
        r=r1,
        r2=r2,
        pr=-g1,
        pr2=pr2,
        inv_r=2.0 * g0 / (2.0 * a + 1.0),
        inv_r2=2.0 * g0 * g0 / (a * (2.0 * a + 1.0)),
        dr=math.sqrt((a + 1.0) / 2.0) / g0,
        dpr=g0 / math.sqrt(2.0 * a),
    )


# ------------------------------------------------------------------------------------------


def rss_oscillator_uncertainty(p: RssParams, scale: float = 1.0) -> OscillatorUncertainty:
    """
    Delta R, Delta P and the bound of the oscillator-form radial relation.

    R is 1/r shifted by a constant, which leaves Delta R unchanged, and
    P = -(i/scale)(d/dr + 1/2r). With scale = 1 this is the hydrogenic relation
    Delta R Delta P >= <1/r^2>/2; other scales give the quantum-defect variant.
    """
    require_inverse_square(p)
    ex = rss_expectations(p)
    d_r = math.sqrt(max(ex.inv_r2 - ex.inv_r**2, 0.0))
    d_p = ex.dpr / scale
    bound = 0.5 * ex.inv_r2 / scale
    return OscillatorUncertainty(dR=d_r, dP=d_p, bound=bound, residual=d_r * d_p - bound)


# ==========================================================================================
# ==========================================================================================


def rss_support(p: RssParams, eps: float = SUPPORT_EPS) -> tuple[float, float]:
    """
    Radial interval outside which |psi|^2 r dr carries at most eps on each side.

    In x = 2 gamma0 r the radial density is the Gamma(2 alpha + 2) distribution, so the
    interval comes from its quantiles.
    """
    dist = stats.gamma(2.0 * p.alpha + 2.0)
    lo = float(dist.ppf(eps)) / (2.0 * p.gamma0)
    hi = float(dist.isf(eps)) / (2.0 * p.gamma0)
    return max(lo, 0.0), hi


# ------------------------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _legendre_rule(order: int) -> tuple[ArrayR, ArrayR]:
    return np.polynomial.legendre.leggauss(order)


# ------------------------------------------------------------------------------------------


def radial_quadrature(
    r_lo: float, r_hi: float, panels: int = 64, order: int = 16
) -> tuple[ArrayR, ArrayR]:
    """
    Composite Gauss-Legendre rule for integrals over dr on [r_lo, r_hi].

    Panels are uniform in u = sqrt(r), which spreads nodes evenly over the oscillations
    of Coulomb functions whose local wavelength grows like sqrt(r).

    Args:
        r_lo: Lower limit, non-negative
        r_hi: Upper limit, greater than r_lo
        panels: Number of panels
        order: Gauss-Legendre nodes per panel

    Returns:
        Nodes r and weights w with sum(w f(r)) approximating the integral of f dr
    """
    if r_lo < 0.0 or r_hi <= r_lo:
        raise DomainError(f"invalid radial interval [{r_lo}, {r_hi}]")
    x, w = _legendre_rule(order)
    edges = np.linspace(math.sqrt(r_lo), math.sqrt(r_hi), panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    return u * u, 2.0 * u * wu


# ==========================================================================================
# ==========================================================================================
# eof
