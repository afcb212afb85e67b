import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from keplerwave.angular import (
    css_eval,
    css_fourier_coefficients,
    delta_from_spread,
    spread_squared,
)
from keplerwave.errors import AccuracyError, DomainError
from keplerwave.ess import EssParams, ess_energy, ess_eval, params_from_orbit
from keplerwave.radial import require_inverse_square, rss_expectations, rss_support
from keplerwave.spectral import SpectralState, get_executor, worker_count

# ==========================================================================================
# ==========================================================================================

# File:    runge_lenz.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the quantum Runge-Lenz operator on polar grids, the
#          uncertainty diagnostics Delta A_x Delta A_y against |<HL>| and the scan of the
#          localization measure Z over classical orbit elements
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayC = NDArray[np.complex128]
ArrayR = NDArray[np.float64]

FIRST_DIFF = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])
SECOND_DIFF = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
HALO = 3

RL_N_R = 1200
RL_N_PHI = 2048
RL_RTOL = 1e-4
ANALYTIC_N_PHI = 4096
RICHARDSON_FACTOR = 2**6 - 1

# Literature values for the n_bar = 45, l_bar = 30, Delta L = 2.5 packet
REFERENCE_SPEC = {"n_bar": 45.0, "l_bar": 30, "dl": 2.5}
REFERENCE_DIAGNOSTICS = {"product": 0.1214, "abs_hl": 0.0099, "z": 11.26}


@dataclass(frozen=True)
class PolarGrid:
    """Uniform polar grid r_i = i h (i = 1..n_r), phi_j = phi_start + 2 pi j / n_phi

    Functions on the grid are arrays of shape (n_r, n_phi) and are taken to vanish at
    r = 0 and beyond r_max. Angular derivatives are spectral, radial derivatives use
    sixth-order central differences.
    """

    n_r: int
    n_phi: int
    r_max: float
    phi_start: float = -math.pi

    def __post_init__(self) -> None:
        if self.n_r < 2 * HALO + 1 or self.n_phi < 4:
            raise DomainError(f"grid too small: n_r = {self.n_r}, n_phi = {self.n_phi}")
        if not self.r_max > 0.0:
            raise DomainError(f"r_max must be positive, got {self.r_max}")

    # ------------------------------------------------------------------------------------------

    @property
    def h(self) -> float:
        return self.r_max / self.n_r

    # ------------------------------------------------------------------------------------------

    @property
    def d_phi_step(self) -> float:
        return 2.0 * math.pi / self.n_phi

    # ------------------------------------------------------------------------------------------

    @cached_property
    def r(self) -> ArrayR:
        return self.h * np.arange(1, self.n_r + 1, dtype=np.float64)

    # ------------------------------------------------------------------------------------------

    @cached_property
    def phi(self) -> ArrayR:
        return self.phi_start + self.d_phi_step * np.arange(self.n_phi, dtype=np.float64)

    # ------------------------------------------------------------------------------------------

    @cached_property
    def modes(self) -> ArrayR:
        return np.fft.fftfreq(self.n_phi, d=1.0 / self.n_phi)

    # ------------------------------------------------------------------------------------------

    def d_phi(self, f: ArrayC) -> ArrayC:
        ik = 1j * self.modes
        if self.n_phi % 2 == 0:
            ik[self.n_phi // 2] = 0.0
        return np.fft.ifft(ik[None, :] * np.fft.fft(f, axis=1), axis=1)

    # ------------------------------------------------------------------------------------------

    def d_phiphi(self, f: ArrayC) -> ArrayC:
        return np.fft.ifft(-(self.modes**2)[None, :] * np.fft.fft(f, axis=1), axis=1)

    # ------------------------------------------------------------------------------------------

    def d_r(self, f: ArrayC) -> ArrayC:
        return _radial_stencil(f, FIRST_DIFF, 1.0 / self.h)

    # ------------------------------------------------------------------------------------------

    def d_rr(self, f: ArrayC) -> ArrayC:
        return _radial_stencil(f, SECOND_DIFF, 1.0 / self.h**2)

    # ------------------------------------------------------------------------------------------

    def inner(self, f: ArrayC, g: ArrayC) -> complex:
        """<f|g> under r dr dphi by the trapezoid rule"""
        weights = self.r[:, None] * (self.h * self.d_phi_step)
        return complex(np.sum(np.conj(f) * g * weights))


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class RungeLenzDiagnostics:
    """Runge-Lenz moments of a state and the localization measure Z

    Attributes:
        ax_mean (float): <A_x>
        ay_mean (float): <A_y>
        dax (float): Delta A_x
        day (float): Delta A_y
        a2 (float): <A_x^2 + A_y^2>
        hl (float): <HL>, negative for bound states with positive <L>
        casimir (float): 1 + 2 <H (L^2 + 1/4)>, equal to a2 for exact moments
        z (float): (Delta A_x Delta A_y - |<HL>|) / |<HL>|
        error_estimate (float): Richardson estimate of the relative error, zero when
            the moments are exact up to angular quadrature
        method (str): "grid" or "analytic"
    """

    ax_mean: float
    ay_mean: float
    dax: float
    day: float
    a2: float
    hl: float
    casimir: float
    z: float
    error_estimate: float
    method: str

    @property
    def product(self) -> float:
        return self.dax * self.day


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class ZSurface:
    """Z over a grid of semimajor axes and eccentricities

    Attributes:
        a (ArrayR): Semimajor axes, rows of z
        e (ArrayR): Eccentricities, columns of z
        z (ArrayR): Localization measure per (a, e)
        beta (ArrayR): Unrounded beta from the orbit map per (a, e)
        beta_used (NDArray[np.int64]): Integer beta the diagnostics were evaluated at
    """

    a: ArrayR
    e: ArrayR
    z: ArrayR
    beta: ArrayR
    beta_used: NDArray[np.int64]


# ==========================================================================================
# ==========================================================================================


def _radial_stencil(f: ArrayC, coeffs: ArrayR, scale: float) -> ArrayC:
    """Apply a seven-point stencil along axis 0 in slabs that share a three-row halo"""
    n = f.shape[0]
    padded = np.pad(f, ((HALO, HALO), (0, 0)))
    bounds = np.linspace(0, n, min(worker_count(), n) + 1).astype(int)

    def slab(i0: int, i1: int) -> ArrayC:
        block = padded[i0 : i1 + 2 * HALO]
        rows = i1 - i0
        out = np.zeros((rows, f.shape[1]), dtype=np.complex128)
        for k, c in enumerate(coeffs):
            if c != 0.0:
                out += c * block[k : k + rows]
        return out * scale

    parts = list(get_executor().map(slab, bounds[:-1], bounds[1:]))
    return np.concatenate(parts, axis=0)


# ------------------------------------------------------------------------------------------


def apply_angular_momentum(grid: PolarGrid, f: ArrayC) -> ArrayC:
    """L f = -i df/dphi"""
    return -1j * grid.d_phi(f)


# ------------------------------------------------------------------------------------------


def apply_hamiltonian(grid: PolarGrid, f: ArrayC) -> ArrayC:
    """H f = -(f_rr + f_r / r + f_phiphi / r^2) / 2 - f / r"""
    r = grid.r[:, None]
    lap = grid.d_rr(f) + grid.d_r(f) / r + grid.d_phiphi(f) / r**2
    return -0.5 * lap - f / r


# ------------------------------------------------------------------------------------------


def apply_runge_lenz(grid: PolarGrid, f: ArrayC) -> tuple[ArrayC, ArrayC]:
    """
    Both Cartesian components of the Hermitian Runge-Lenz operator,

        A_x = p_y L - (i/2) p_x - cos(phi),   A_y = -p_x L - (i/2) p_y - sin(phi),

    written in polar coordinates.

    Args:
        grid: Grid the function is sampled on
        f: Function values, shape (n_r, n_phi)

    Returns:
        (A_x f, A_y f)
    """
    r = grid.r[:, None]
    c = np.cos(grid.phi)[None, :]
    s = np.sin(grid.phi)[None, :]
    f_r = grid.d_r(f)
    f_p = grid.d_phi(f)
    f_pp = grid.d_phiphi(f)
    f_rp = grid.d_r(f_p)
    ax = -s * f_rp - (c / r) * f_pp - 0.5 * (c * f_r - (s / r) * f_p) - c * f
    ay = c * f_rp - (s / r) * f_pp - 0.5 * (s * f_r + (c / r) * f_p) - s * f
    return ax, ay


# ------------------------------------------------------------------------------------------


def commutator_residual(grid: PolarGrid, f: ArrayC) -> float:
    """
    Relative mismatch of [A_x, A_y] f against -2 i H L f on the grid.

    :param grid: Grid the function is sampled on
    :param f: Smooth function that vanishes near r = 0 and r_max
    :return: ||[A_x, A_y] f + 2 i H L f|| / ||2 i H L f||
    """
    ax, ay = apply_runge_lenz(grid, f)
    ax_ay = apply_runge_lenz(grid, ay)[0]
    ay_ax = apply_runge_lenz(grid, ax)[1]
    rhs = -2j * apply_hamiltonian(grid, apply_angular_momentum(grid, f))
    diff = ax_ay - ay_ax - rhs
    return math.sqrt(grid.inner(diff, diff).real / grid.inner(rhs, rhs).real)


# ==========================================================================================
# ==========================================================================================


def _z_measure(dax: float, day: float, hl: float) -> float:
    if hl == 0.0:
        raise DomainError("Z is undefined for <HL> = 0")
    return (dax * day - abs(hl)) / abs(hl)


# ------------------------------------------------------------------------------------------


def _grid_diagnostics(
    p: EssParams, n_r: int, n_phi: int, r_max: float
) -> RungeLenzDiagnostics:
    grid = PolarGrid(n_r=n_r, n_phi=n_phi, r_max=r_max, phi_start=p.phi0 - math.pi)
    f = ess_eval(p, grid.r[:, None], grid.phi[None, :])
    norm = grid.inner(f, f).real

    ax, ay = apply_runge_lenz(grid, f)
    ax_mean = grid.inner(f, ax).real / norm
    ay_mean = grid.inner(f, ay).real / norm
    ax2 = grid.inner(ax, ax).real / norm
    ay2 = grid.inner(ay, ay).real / norm
    del ax, ay

    lf = apply_angular_momentum(grid, f)
    hl = grid.inner(f, apply_hamiltonian(grid, lf)).real / norm
    l2f = apply_angular_momentum(grid, lf)
    del lf
    h_l2 = grid.inner(f, apply_hamiltonian(grid, l2f + 0.25 * f)).real / norm

    dax = math.sqrt(max(ax2 - ax_mean**2, 0.0))
    day = math.sqrt(max(ay2 - ay_mean**2, 0.0))
    return RungeLenzDiagnostics(
        ax_mean=ax_mean,
        ay_mean=ay_mean,
        dax=dax,
        day=day,
        a2=ax2 + ay2,
        hl=hl,
        casimir=1.0 + 2.0 * h_l2,
        z=_z_measure(dax, day, hl),
        error_estimate=0.0,
        method="grid",
    )


# ------------------------------------------------------------------------------------------


def _l_moments(p: EssParams, powers: tuple[int, ...]) -> list[float]:
    spread = math.sqrt(spread_squared(p.delta))
    half = int(math.ceil(12.0 * spread)) + 20
    ells = np.arange(p.beta - half, p.beta + half + 1)
    weights = np.abs(css_fourier_coefficients(p.angular, ells)) ** 2
    return [float(weights @ ells.astype(np.float64) ** k) for k in powers]


# ------------------------------------------------------------------------------------------


def _analytic_diagnostics(p: EssParams, n_phi: int) -> RungeLenzDiagnostics:
    """
    Exact radial moments combined with a periodic angular quadrature.

    For Psi = psi(r) chi(phi) the ratios A_x Psi / Psi and A_y Psi / Psi have the form
    a(phi) + b(phi) / r, so every moment reduces to angular averages times <1/r> and
    <1/r^2>.
    """
    rad = rss_expectations(p.radial)
    phi = p.phi0 + 2.0 * math.pi * np.arange(n_phi) / n_phi
    theta = phi - p.phi0
    weight = np.abs(css_eval(p.angular, phi)) ** 2 * (2.0 * math.pi / n_phi)
    weight /= np.sum(weight)

    c, s = np.cos(phi), np.sin(phi)
    kappa = complex(-p.gamma0, -p.gamma1)
    w = -p.delta * np.sin(theta) + 1j * p.beta
    w2 = w * w - p.delta * np.cos(theta)
    alpha = p.alpha

    a_x = -s * kappa * w - 0.5 * c * kappa - c
    b_x = -s * alpha * w - c * w2 - 0.5 * c * alpha + 0.5 * s * w
    a_y = c * kappa * w - 0.5 * s * kappa - s
    b_y = c * alpha * w - s * w2 - 0.5 * s * alpha - 0.5 * c * w

    def moments(a: ArrayC, b: ArrayC) -> tuple[float, float]:
        mean = np.sum(weight * a) + np.sum(weight * b) * rad.inv_r
        square = (
            np.sum(weight * np.abs(a) ** 2)
            + 2.0 * np.sum(weight * (np.conj(a) * b).real) * rad.inv_r
            + np.sum(weight * np.abs(b) ** 2) * rad.inv_r2
        )
        return float(mean.real), float(square)

    ax_mean, ax2 = moments(a_x, b_x)
    ay_mean, ay2 = moments(a_y, b_y)

    energy = ess_energy(p.alpha, p.gamma0, p.gamma1, p.beta, p.delta)
    l1, l2, l3, l4 = _l_moments(p, (1, 2, 3, 4))
    h_radial = energy - 0.5 * rad.inv_r2 * l2
    hl = h_radial * l1 + 0.5 * rad.inv_r2 * l3
    h_l2 = h_radial * l2 + 0.5 * rad.inv_r2 * l4 + 0.25 * energy

    dax = math.sqrt(max(ax2 - ax_mean**2, 0.0))
    day = math.sqrt(max(ay2 - ay_mean**2, 0.0))
    return RungeLenzDiagnostics(
        ax_mean=ax_mean,
        ay_mean=ay_mean,
        dax=dax,
        day=day,
        a2=ax2 + ay2,
        hl=hl,
        casimir=1.0 + 2.0 * h_l2,
        z=_z_measure(dax, day, hl),
        error_estimate=0.0,
        method="analytic",
    )


# ------------------------------------------------------------------------------------------


def _default_r_max(p: EssParams) -> float:
    if p.spec is not None:
        return 4.0 * p.spec.r_out
    return 1.25 * rss_support(p.radial)[1]


# ------------------------------------------------------------------------------------------


def runge_lenz_diagnostics(
    p: EssParams,
    method: Literal["grid", "analytic"] = "grid",
    *,
    n_r: int = RL_N_R,
    n_phi: int = RL_N_PHI,
    r_max: float | None = None,
    rtol: float = RL_RTOL,
) -> RungeLenzDiagnostics:
    """
    Runge-Lenz uncertainties, <HL> and Z for an ESS at t = 0.

    The grid method samples Psi on (0, r_max] x [phi0 - pi, phi0 + pi), applies the
    operators with spectral angular and sixth-order radial derivatives, and repeats the
    computation with both resolutions halved. The analytic method needs no radial grid.

    Args:
        p: State with alpha > 1/2
        method: "grid" or "analytic"
        n_r: Radial points of the fine grid
        n_phi: Angular points of the fine grid
        r_max: Outer radius, 4 r_out by default
        rtol: Largest relative change between the two grids

    Returns:
        RungeLenzDiagnostics, with a Richardson error estimate for the grid method

    Raises:
        AccuracyError: If halving the grid changes Delta A_x, Delta A_y or <HL> by more
            than rtol
        DomainError: For alpha <= 1/2 or an unknown method
    """
    if method == "analytic":
        return _analytic_diagnostics(p, max(n_phi, ANALYTIC_N_PHI))
    if method != "grid":
        raise DomainError(f"unknown Runge-Lenz method {method!r}")
    require_inverse_square(p.radial)
    outer = r_max if r_max is not None else _default_r_max(p)

    fine = _grid_diagnostics(p, n_r, n_phi, outer)
    coarse = _grid_diagnostics(p, n_r // 2, n_phi // 2, outer)
    change = max(
        abs(fine.dax - coarse.dax) / abs(fine.dax),
        abs(fine.day - coarse.day) / abs(fine.day),
        abs(fine.hl - coarse.hl) / abs(fine.hl),
    )
    logger.debug(
        "Runge-Lenz grid refinement",
        extra={"n_r": n_r, "n_phi": n_phi, "r_max": outer, "change": change},
    )
    if change > rtol:
        logger.error(
            "Runge-Lenz quadrature did not converge",
            extra={"change": change, "rtol": rtol},
        )
        raise AccuracyError(
            f"halving the Runge-Lenz grid changed the moments by {change:.3e}"
            f" > {rtol:.1e}",
            change=change,
        )
    return RungeLenzDiagnostics(
        ax_mean=fine.ax_mean,
        ay_mean=fine.ay_mean,
        dax=fine.dax,
        day=fine.day,
        a2=fine.a2,
        hl=fine.hl,
        casimir=fine.casimir,
        z=fine.z,
        error_estimate=change / RICHARDSON_FACTOR,
        method="grid",
    )


# ------------------------------------------------------------------------------------------


def hl_from_spectrum(s: SpectralState) -> float:
    """<HL> = sum |c_nl|^2 E_nl l from an eigenstate expansion"""
    ells = s.l_values.astype(np.float64)[None, :]
    return float(np.sum(s.probabilities * s.energies * ells))


# ==========================================================================================
# ==========================================================================================


def z_surface(
    a_grid: ArrayLike,
    e_grid: ArrayLike,
    dr: float,
    dL: float,
    eta: float = 0.0,
) -> ZSurface:
    """
    Scan Z over classical orbit elements.

    Each (a, e) is mapped to ESS parameters by params_from_orbit, beta is rounded to
    the nearest integer on the positive branch, and the analytic diagnostics give Z.

    Args:
        a_grid: Semimajor axes in bohr
        e_grid: Eccentricities in [0, 1)
        dr: Radial width Delta r shared by every grid point
        dL: Angular-momentum spread shared by every grid point
        eta: Angle of the packet on each ellipse, measured from the outer apsis

    Returns:
        ZSurface with one row per semimajor axis
    """
    a_values = np.atleast_1d(np.asarray(a_grid, dtype=np.float64))
    e_values = np.atleast_1d(np.asarray(e_grid, dtype=np.float64))
    if a_values.size == 0 or e_values.size == 0:
        raise DomainError("z_surface needs non-empty a and e grids")
    delta = delta_from_spread(dL)

    def point(ae: tuple[float, float]) -> tuple[float, float, int]:
        match = params_from_orbit(ae[0], ae[1], eta, dr, delta)
        plus = match.branches()[0]
        diag = _analytic_diagnostics(plus, ANALYTIC_N_PHI)
        return diag.z, match.beta, match.beta_nearest

    pairs = [(float(a), float(e)) for a in a_values for e in e_values]
    results = list(get_executor().map(point, pairs))
    shape = (a_values.size, e_values.size)
    logger.info("Computed Z surface", extra={"n_a": shape[0], "n_e": shape[1]})
    return ZSurface(
        a=a_values,
        e=e_values,
        z=np.array([r[0] for r in results]).reshape(shape),
        beta=np.array([r[1] for r in results]).reshape(shape),
        beta_used=np.array([r[2] for r in results], dtype=np.int64).reshape(shape),
    )


# ==========================================================================================
# ==========================================================================================
# eof
