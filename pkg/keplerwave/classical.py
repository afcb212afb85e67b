import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from keplerwave.errors import DomainError, NumericalError, UnboundOrbitError

# ==========================================================================================
# ==========================================================================================

# File:    classical.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the classical planar Kepler reference used to check the
#          motion of the quantum wave packets, orbit geometry, periods and positions
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

AU_TIME_SECONDS = 2.4188843265857e-17
KEPLER_TOL = 1e-13
KEPLER_MAX_ITER = 100


@dataclass(frozen=True)
class OrbitGeometry:
    """Classical bound Kepler ellipse in atomic units

    Attributes:
        a (float): Semimajor axis
        e (float): Eccentricity, 0 <= e < 1
        eta (float): Orientation of the ellipse in radians
        r1 (float): Inner apsidal distance a(1 - e)
        r2 (float): Outer apsidal distance a(1 + e)
        T_cl (float): Orbital period 2 pi / (2|E|)^(3/2)
        E (float): Energy
        l (float): Angular momentum
    """

    a: float
    e: float
    eta: float
    r1: float
    r2: float
    T_cl: float
    E: float
    l: float  # noqa: E741


# ==========================================================================================
# ==========================================================================================


class Apsis(Enum):
    """Apsidal point occupied by a trajectory at t = 0"""

    OUTER = "outer"
    INNER = "inner"


# ==========================================================================================
# ==========================================================================================


def orbit_from_energy(
    E: float, l: float, eta: float = 0.0  # noqa: E741
) -> OrbitGeometry:
    """
    Build the ellipse traced by a bound Coulomb orbit of energy E and angular momentum l.

    Args:
        E: Orbital energy, must be negative
        l: Angular momentum, positive and with 2 l^2 |E| <= 1
        eta: Orientation angle of the ellipse

    Returns:
        The populated OrbitGeometry

    Raises:
        UnboundOrbitError: If E >= 0
        DomainError: If l <= 0 or the eccentricity would not be real
    """
    if E >= 0.0:
        raise UnboundOrbitError(f"orbit energy must be negative, got {E}")
    if l <= 0.0:
        raise DomainError(f"radial orbits (l <= 0) are not supported, got l = {l}")
    x = 2.0 * l * l * abs(E)
    if x > 1.0:
        raise DomainError(f"no real eccentricity: 2 l^2 |E| = {x} > 1")
    a = 1.0 / (2.0 * abs(E))
    e = math.sqrt(1.0 - x)
    period = 2.0 * math.pi / (2.0 * abs(E)) ** 1.5
    return OrbitGeometry(
        a=a, e=e, eta=eta, r1=a * (1.0 - e), r2=a * (1.0 + e), T_cl=period, E=E, l=l
    )


# ------------------------------------------------------------------------------------------


def classical_period(n_bar: float) -> tuple[float, float]:
    """
    Keplerian period 2 pi (n_bar - 1/2)^3 of the planar Rydberg series.

    :param n_bar: Mean principal quantum number, at least 1/2
    :return: The period in atomic units of time and in seconds
    """
    if n_bar < 0.5:
        raise DomainError(f"n_bar must be at least 1/2, got {n_bar}")
    t_au = 2.0 * math.pi * (n_bar - 0.5) ** 3
    return t_au, t_au * AU_TIME_SECONDS


# ------------------------------------------------------------------------------------------


def apsides(n_bar: float, l_bar: float) -> tuple[float, float]:
    """Inner and outer apsidal distances for mean quantum numbers (n_bar, l_bar)"""
    nu = n_bar - 0.5
    if l_bar <= 0.0 or l_bar > nu:
        raise DomainError(f"l_bar must lie in (0, n_bar - 1/2], got {l_bar}")
    root = math.sqrt(1.0 - (l_bar / nu) ** 2)
    return nu * nu * (1.0 - root), nu * nu * (1.0 + root)


# ==========================================================================================
# ==========================================================================================


def _true_anomaly(u: NDArray[np.float64], e: float) -> NDArray[np.float64]:
    # continuous in u, so whole revolutions accumulate instead of wrapping
    b = e / (1.0 + math.sqrt(1.0 - e * e))
    return u + 2.0 * np.arctan2(b * np.sin(u), 1.0 - b * np.cos(u))


# ------------------------------------------------------------------------------------------


def solve_kepler(mean_anomaly: ArrayLike, e: float) -> NDArray[np.float64]:
    """
    Newton iteration for the eccentric anomaly u in M = u - e sin u.

    Args:
        mean_anomaly: Mean anomaly, any real values
        e: Eccentricity in [0, 1)

    Returns:
        Eccentric anomaly with |residual| < 1e-13

    Raises:
        NumericalError: If the iteration fails to converge in 100 steps
    """
    M = np.asarray(mean_anomaly, dtype=np.float64)
    u = np.where(e < 0.8, M, M + np.sign(np.sin(M)) * e)
    for _ in range(KEPLER_MAX_ITER):
        f = u - e * np.sin(u) - M
        if np.all(np.abs(f) < KEPLER_TOL * np.maximum(1.0, np.abs(M))):
            return u
        u = u - f / (1.0 - e * np.cos(u))
    logger.error("Kepler solver did not converge", extra={"eccentricity": e})
    raise NumericalError("Kepler equation did not converge in 100 iterations")


# ------------------------------------------------------------------------------------------


def kepler_position(
    orbit: OrbitGeometry, t: ArrayLike, start: Apsis = Apsis.OUTER
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Polar position on the classical ellipse at time t.

    The angle is measured from eta and grows continuously with time; a trajectory
    started at the outer apsis sits at angle 0 there and reaches the inner apsis at
    angle pi after half a period.

    Args:
        orbit: The ellipse to follow
        t: Time or array of times in atomic units
        start: Apsis occupied at t = 0

    Returns:
        Arrays (r, phi) with the shape of t
    """
    e = orbit.e
    u0 = math.pi if start is Apsis.OUTER else 0.0
    mean = u0 + 2.0 * math.pi * np.asarray(t, dtype=np.float64) / orbit.T_cl
    u = solve_kepler(mean, e)
    r = orbit.a * (1.0 - e * np.cos(u))
    theta0 = _true_anomaly(np.asarray(u0), e)
    phi = _true_anomaly(u, e) - theta0 + orbit.eta
    return r, phi


# ==========================================================================================
# ==========================================================================================
# eof
