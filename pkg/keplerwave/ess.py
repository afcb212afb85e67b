import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize

from keplerwave.angular import (
    CssParams,
    as_integer_beta,
    css_eval,
    css_expectations,
    delta_from_spread,
    spread_squared,
)
from keplerwave.classical import apsides
from keplerwave.errors import DomainError, SolverError
from keplerwave.radial import (
    RssParams,
    require_inverse_square,
    rss_eval,
    rss_expectations,
)
from keplerwave.specfun import bessel_i_ratio

# ==========================================================================================
# ==========================================================================================

# File:    ess.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the elliptical squeezed states, the solver that fixes their
#          five parameters from n_bar, l_bar and Delta L, their closed-form expectations
#          and the approximate map from classical orbit elements
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayC = NDArray[np.complex128]

SOLVER_TOL = 1e-10
SOLVER_MAX_ITER = 200
SCAN_POINTS = 4000


@dataclass(frozen=True)
class PhysicalSpec:
    """Experiment-side inputs that fix an elliptical squeezed state

    Attributes:
        n_bar (float): Mean principal quantum number, n_bar > 1
        l_bar (int): Mean angular momentum, 1 <= l_bar <= n_bar - 1
        dl (float): Angular-momentum spread Delta L, dl > 0
    """

    n_bar: float
    l_bar: int
    dl: float

    def __post_init__(self) -> None:
        if not self.n_bar > 1.0:
            raise DomainError(f"n_bar must exceed 1, got {self.n_bar}")
        l_bar = as_integer_beta(self.l_bar)
        if l_bar < 1:
            raise DomainError(f"l_bar must be a positive integer, got {self.l_bar}")
        if l_bar > self.n_bar - 1.0:
            raise DomainError(f"l_bar = {l_bar} exceeds n_bar - 1 = {self.n_bar - 1.0}")
        if not self.dl > 0.0:
            raise DomainError(f"dl must be positive, got {self.dl}")
        object.__setattr__(self, "l_bar", l_bar)

    # ------------------------------------------------------------------------------------------

    @property
    def energy(self) -> float:
        """E_nbar = -1 / (2 (n_bar - 1/2)^2)"""
        return -0.5 / (self.n_bar - 0.5) ** 2

    # ------------------------------------------------------------------------------------------

    @property
    def r_out(self) -> float:
        return apsides(self.n_bar, self.l_bar)[1]


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class EssParams:
    """Five-parameter elliptical squeezed state psi(r) chi(phi)

    Attributes:
        alpha (float): Radial exponent
        beta (int): Angular-momentum expectation
        gamma0 (float): Radial decay rate
        gamma1 (float): Radial phase gradient
        delta (float): Inverse angular squeezing
        phi0 (float): Orientation of the packet
        spec (PhysicalSpec | None): Inputs the state was built from, if any
    """

    alpha: float
    beta: int
    gamma0: float
    gamma1: float
    delta: float
    phi0: float = 0.0
    spec: PhysicalSpec | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", as_integer_beta(self.beta))
        # constructing the views validates both factors
        _ = (self.radial, self.angular)

    # ------------------------------------------------------------------------------------------

    @property
    def radial(self) -> RssParams:
        return RssParams(alpha=self.alpha, gamma0=self.gamma0, gamma1=self.gamma1)

    # ------------------------------------------------------------------------------------------

    @property
    def angular(self) -> CssParams:
        return CssParams(delta=self.delta, beta=self.beta, phi0=self.phi0)


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class EssExpectations:
    """Closed-form ESS expectations, angular entries in the packet frame"""

    r: float
    r2: float
    pr: float
    pr2: float
    sin_phi: float
    cos_phi: float
    l_mean: float
    l2_mean: float
    h: float
    dr_dpr: float
    dsin_dl: float
    dcos_dl: float


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class OrbitMatch:
    """ESS parameters matched to a classical orbit, before the sign choice for beta

    Attributes:
        alpha (float): Radial exponent
        gamma0 (float): Radial decay rate
        beta (float): Unrounded positive root of the beta^2 relation
        beta_nearest (int): Integer closest to beta
        gamma1 (float): Phase gradient for the positive branch; the negative branch
            carries the opposite sign
        delta (float): Inverse angular squeezing, as supplied
    """

    alpha: float
    gamma0: float
    beta: float
    beta_nearest: int
    gamma1: float
    delta: float

    @property
    def rounding(self) -> float:
        return self.beta_nearest - self.beta

    # ------------------------------------------------------------------------------------------

    def branches(self) -> tuple[EssParams, EssParams]:
        """The two physical states, beta = +beta_nearest and beta = -beta_nearest"""
        plus = EssParams(
            alpha=self.alpha,
            beta=self.beta_nearest,
            gamma0=self.gamma0,
            gamma1=self.gamma1,
            delta=self.delta,
        )
        minus = EssParams(
            alpha=self.alpha,
            beta=-self.beta_nearest,
            gamma0=self.gamma0,
            gamma1=-self.gamma1,
            delta=self.delta,
        )
        return plus, minus


# ==========================================================================================
# ==========================================================================================


def ess_energy(
    alpha: float, gamma0: float, gamma1: float, beta: float, delta: float
) -> float:
    """
    Closed-form <H> of an ESS.

    <H> = gamma0 (gamma0 - 4) / (2 (2 alpha + 1)) + gamma1^2 / 2
          + gamma0^2 / (alpha (2 alpha + 1)) * <L^2>,  <L^2> = (Delta L)^2 + beta^2
    """
    return float(_energy(alpha, gamma0, gamma1, spread_squared(delta) + beta * beta))


# ------------------------------------------------------------------------------------------


def _energy(
    alpha: ArrayLike, gamma0: ArrayLike, gamma1: float, l2: float
) -> NDArray[Any]:
    a = np.asarray(alpha, dtype=np.float64)
    g = np.asarray(gamma0, dtype=np.float64)
    d = 2.0 * a + 1.0
    return g * (g - 4.0) / (2.0 * d) + 0.5 * gamma1**2 + g * g * l2 / (a * d)


# ------------------------------------------------------------------------------------------


def _energy_gradient(alpha: float, gamma0: float, l2: float) -> tuple[float, float]:
    d = 2.0 * alpha + 1.0
    d_alpha = (4.0 * gamma0 - gamma0**2) / d**2 - gamma0**2 * l2 * (4.0 * alpha + 1.0) / (
        alpha * d
    ) ** 2
    d_gamma0 = (gamma0 - 2.0) / d + 2.0 * gamma0 * l2 / (alpha * d)
    return d_alpha, d_gamma0


# ------------------------------------------------------------------------------------------


def _bracket_largest_root(
    r_target: float, e_target: float, l2: float, gamma1: float
) -> tuple[float, float]:
    """Scan alpha downward on a log grid for the first sign change of the residual"""
    upper = max(8.0 * r_target * r_target * abs(e_target), 8.0 * r_target, 100.0)
    grid = np.geomspace(upper, 0.5 + 1e-9, SCAN_POINTS)
    values = _energy(grid, (grid + 1.0) / r_target, gamma1, l2) - e_target
    flips = np.nonzero(np.sign(values[1:]) != np.sign(values[:-1]))[0]
    if flips.size == 0:
        raise SolverError(
            "no solution of <r> = r_target, <H> = E_target with alpha > 1/2",
            residuals=(float(values[-1]),),
        )
    k = int(flips[0])
    return float(grid[k + 1]), float(grid[k])


# ------------------------------------------------------------------------------------------


def solve_ess(
    r_target: float,
    e_target: float,
    beta: int,
    delta: float,
    gamma1: float = 0.0,
    *,
    tol: float = SOLVER_TOL,
    max_iter: int = SOLVER_MAX_ITER,
) -> tuple[float, float]:
    """
    Solve <r>(alpha, gamma0) = r_target and <H>(alpha, gamma0) = e_target.

    gamma0 is eliminated through <r> = (alpha + 1)/gamma0, the reduced scalar equation is
    bracketed at its largest alpha root and seeded with a bracketed root search, then
    the full 2x2 system is polished by damped Newton steps in (log alpha, log gamma0)
    with backtracking on the residual norm.

    Args:
        r_target: Target radial expectation
        e_target: Target energy, negative
        beta: Angular-momentum expectation
        delta: Inverse angular squeezing
        gamma1: Radial phase gradient
        tol: Tolerance on both relative residuals
        max_iter: Newton iteration cap

    Returns:
        (alpha, gamma0)

    Raises:
        SolverError: If no root exists, the Jacobian is singular or Newton stalls
    """
    if e_target >= 0.0 or r_target <= 0.0:
        raise DomainError("solver targets need r_target > 0 and e_target < 0")
    l2 = spread_squared(delta) + beta * beta
    lo, hi = _bracket_largest_root(r_target, e_target, l2, gamma1)
    alpha = optimize.brentq(
        lambda a: float(_energy(a, (a + 1.0) / r_target, gamma1, l2)) - e_target,
        lo,
        hi,
        xtol=1e-14,
        rtol=1e-15,
    )

    def residuals(x: NDArray[np.float64]) -> NDArray[np.float64]:
        a, g = math.exp(x[0]), math.exp(x[1])
        return np.array(
            [
                (a + 1.0) / (g * r_target) - 1.0,
                float(_energy(a, g, gamma1, l2)) / e_target - 1.0,
            ]
        )

    x = np.array([math.log(alpha), math.log((alpha + 1.0) / r_target)])
    f = residuals(x)
    for it in range(max_iter):
        if np.max(np.abs(f)) <= tol:
            a, g = math.exp(x[0]), math.exp(x[1])
            logger.debug(
                "ESS solver converged",
                extra={
                    "iterations": it,
                    "alpha": a,
                    "gamma0": g,
                    "residuals": f.tolist(),
                },
            )
            return a, g
        a, g = math.exp(x[0]), math.exp(x[1])
        dh_da, dh_dg = _energy_gradient(a, g, l2)
        jac = np.array(
            [
                [a / (g * r_target), -(a + 1.0) / (g * r_target)],
                [a * dh_da / e_target, g * dh_dg / e_target],
            ]
        )
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            logger.error(
                "ESS solver hit a singular Jacobian",
                extra={"iteration": it, "residuals": f.tolist()},
            )
            raise SolverError(
                f"singular Jacobian at Newton iteration {it}", residuals=tuple(f)
            ) from exc
        merit = 0.5 * float(f @ f)
        damping = 1.0
        while damping > 1e-12:
            trial = x + damping * step
            f_trial = residuals(trial)
            if 0.5 * float(f_trial @ f_trial) <= (1.0 - 1e-4 * damping) * merit:
                break
            damping *= 0.5
        x, f = trial, f_trial

    logger.error("ESS solver did not converge", extra={"residuals": f.tolist()})
    raise SolverError(
        f"damped Newton did not converge in {max_iter} iterations", residuals=tuple(f)
    )


# ------------------------------------------------------------------------------------------


def ess_build(spec: PhysicalSpec) -> EssParams:
    """
    Fix the five ESS parameters from the physical inputs.

    beta = l_bar, gamma1 = 0 and delta follows from Delta L; (alpha, gamma0) then put the
    packet at the outer apsis, <r> = r_out, with <H> = E_nbar.

    Args:
        spec: Physical inputs

    Returns:
        The built EssParams, carrying spec

    Raises:
        SolverError: If the parameter system has no solution or does not converge
    """
    delta = delta_from_spread(spec.dl)
    alpha, gamma0 = solve_ess(spec.r_out, spec.energy, spec.l_bar, delta)
    params = EssParams(
        alpha=alpha, beta=spec.l_bar, gamma0=gamma0, gamma1=0.0, delta=delta, spec=spec
    )
    logger.info(
        "Built ESS",
        extra={"n_bar": spec.n_bar, "l_bar": spec.l_bar, "dl": spec.dl, "alpha": alpha},
    )
    return params


# ------------------------------------------------------------------------------------------


def ess_eval(p: EssParams, r: ArrayLike, phi: ArrayLike) -> ArrayC:
    """
    Evaluate Psi(r, phi) = psi(r) chi(phi), normalized under r dr dphi.

    r and phi broadcast against each other with numpy rules.
    """
    return rss_eval(p.radial, r) * css_eval(p.angular, phi)


# ------------------------------------------------------------------------------------------


def ess_expectations(p: EssParams) -> EssExpectations:
    """
    Closed-form expectations and uncertainty products of an ESS.

    Args:
        p: State parameters with alpha > 1/2

    Returns:
        EssExpectations record
    """
    require_inverse_square(p.radial)
    rad = rss_expectations(p.radial)
    ang = css_expectations(p.angular)
    return EssExpectations(
        r=rad.r,
        r2=rad.r2,
        pr=rad.pr,
        pr2=rad.pr2,
        sin_phi=ang.sin_phi,
        cos_phi=ang.cos_phi,
        l_mean=ang.l_mean,
        l2_mean=ang.l2_mean,
        h=ess_energy(p.alpha, p.gamma0, p.gamma1, p.beta, p.delta),
        dr_dpr=rad.dr_dpr,
        dsin_dl=ang.dsin_dl,
        dcos_dl=ang.dcos_dl,
    )


# ==========================================================================================
# ==========================================================================================


def params_from_orbit(
    a: float, e: float, eta: float, dr: float, delta: float
) -> OrbitMatch:
    """
    Approximate ESS parameters for a classical ellipse.

    Args:
        a: Semimajor axis, positive
        e: Eccentricity, 0 <= e < 1
        eta: Angle of the packet position measured from the outer apsis
        dr: Radial width Delta r of the packet, positive
        delta: Inverse angular squeezing, positive

    Returns:
        OrbitMatch holding both the unrounded beta and its nearest integer

    Raises:
        DomainError: For out-of-range inputs or a negative beta^2
    """
    if a <= 0.0 or not 0.0 <= e < 1.0 or dr <= 0.0 or delta <= 0.0:
        raise DomainError(
            f"invalid orbit inputs a={a}, e={e}, dr={dr}, delta={delta}"
        )
    ratio = 1.0 / float(bessel_i_ratio(1, 2.0 * delta))
    c, s = math.cos(eta), math.sin(eta)
    gamma0 = ratio * a / (2.0 * dr * dr) * (1.0 + e * c - e * e * s * s / (1.0 - e * c))
    alpha = 2.0 * gamma0**2 * dr * dr - 1.0
    if gamma0 <= 0.0 or alpha <= 0.0:
        raise DomainError(f"orbit inputs give gamma0 = {gamma0}, alpha = {alpha}")
    beta2 = (2.0 * alpha + 1.0) ** 2 / (4.0 * gamma0 * (alpha + 1.0)) * (1.0 - e * c)
    beta2 *= ratio**3
    if beta2 < 0.0:
        raise DomainError(f"orbit inputs give beta^2 = {beta2} < 0")
    beta = math.sqrt(beta2)
    nearest = max(int(round(beta)), 1)
    gamma1 = -(2.0 * alpha + 1.0) / (2.0 * beta * (alpha + 1.0)) * e * s * ratio**3
    return OrbitMatch(
        alpha=alpha,
        gamma0=gamma0,
        beta=beta,
        beta_nearest=nearest,
        gamma1=gamma1,
        delta=delta,
    )


# ==========================================================================================
# ==========================================================================================
# eof
