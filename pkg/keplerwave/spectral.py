import atexit
import logging
import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special

from keplerwave.angular import css_fourier_coefficients, spread_squared
from keplerwave.errors import AccuracyError, DomainError, TruncationError
from keplerwave.ess import EssParams, ess_energy
from keplerwave.radial import radial_quadrature, rss_eval, rss_support
from keplerwave.specfun import log_abs_laguerre, log_complex_pow

# ==========================================================================================
# ==========================================================================================

# File:    spectral.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the eigenstate expansion of a squeezed state, its exact
#          time evolution, reconstruction on polar grids and coefficient-space
#          observables such as <r>(t) and the autocorrelation
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

ArrayC = NDArray[np.complex128]
ArrayR = NDArray[np.float64]
ArrayI = NDArray[np.int64]

MAX_PRINCIPAL = 400
CLOSED_FORM_MAX_COND = 1e5
OVERLAP_PANELS = 48
MATRIX_PANELS = 96
QUAD_ORDER = 16

_executor: ThreadPoolExecutor | None = None
_executor_lock = threading.Lock()


def worker_count() -> int:
    """Worker cap from KEPLERWAVE_THREADS, defaulting to the available CPUs"""
    raw = os.environ.get("KEPLERWAVE_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        value = 0
    return value if value > 0 else (os.cpu_count() or 1)


# ------------------------------------------------------------------------------------------


def get_executor() -> ThreadPoolExecutor:
    """Shared thread pool for per-channel and per-slab work"""
    global _executor
    with _executor_lock:
        if _executor is None:
            _executor = ThreadPoolExecutor(
                max_workers=worker_count(), thread_name_prefix="keplerwave"
            )
        return _executor


# ------------------------------------------------------------------------------------------


def _shutdown_executor() -> None:
    global _executor
    with _executor_lock:
        if _executor is not None:
            _executor.shutdown(wait=False)
            _executor = None


atexit.register(_shutdown_executor)


def _frozen(array: NDArray[Any]) -> NDArray[Any]:
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out


# ==========================================================================================
# ==========================================================================================


class RadialBasis:
    """
    Coulomb-like radial eigenfunctions normalized under r dr,

        R(r) = N r^lam e^{-r/nu} L_k^{2 lam}(2 r / nu),   nu = k + lam + 1/2,

    with lam = |l| and k = n - |l| - 1 for the planar hydrogen atom. Subclasses change
    lam and k; the energy is always -1 / (2 nu^2).
    """

    name = "hydrogenic"

    def effective_l(self, l: int) -> float:  # noqa: E741
        return float(abs(l))

    # ------------------------------------------------------------------------------------------

    def degree(self, n: int, l: int) -> int:  # noqa: E741
        return n - abs(l) - 1

    # ------------------------------------------------------------------------------------------

    def valid(self, n: int, l: int) -> bool:  # noqa: E741
        return n >= 1 and abs(l) <= n - 1

    # ------------------------------------------------------------------------------------------

    def nu(self, n: int, l: int) -> float:  # noqa: E741
        return self.degree(n, l) + self.effective_l(l) + 0.5

    # ------------------------------------------------------------------------------------------

    def energy(self, n: int, l: int) -> float:  # noqa: E741
        return -0.5 / self.nu(n, l) ** 2

    # ------------------------------------------------------------------------------------------

    def log_norm(self, n: int, l: int) -> float:  # noqa: E741
        k, lam, nu = self.degree(n, l), self.effective_l(l), self.nu(n, l)
        return 0.5 * (
            (2.0 * lam + 2.0) * math.log(2.0 / nu)
            + special.gammaln(k + 1)
            - special.gammaln(k + 2.0 * lam + 1.0)
            - math.log(2.0 * nu)
        )

    # ------------------------------------------------------------------------------------------

    def evaluate(self, n: int, l: int, r: ArrayLike) -> ArrayR:  # noqa: E741
        """Radial function of channel (n, l) at radii r > 0"""
        if not self.valid(n, l):
            raise DomainError(f"(n, l) = ({n}, {l}) is not a bound state of this basis")
        rr = np.asarray(r, dtype=np.float64)
        if np.any(rr <= 0.0):
            raise DomainError("radial functions are evaluated at r > 0")
        k, lam, nu = self.degree(n, l), self.effective_l(l), self.nu(n, l)
        sign, log_lag = log_abs_laguerre(k, 2.0 * lam, 2.0 * rr / nu)
        log_mag = self.log_norm(n, l) + lam * np.log(rr) - rr / nu + log_lag
        return np.asarray(sign * np.exp(log_mag), dtype=np.float64)

    # ------------------------------------------------------------------------------------------

    def evaluate_many(
        self, n_values: ArrayLike, l: int, r: ArrayLike  # noqa: E741
    ) -> ArrayR:
        """Rows of R_{n l}(r) for every n, zero rows where (n, l) is not a bound state"""
        rr = np.asarray(r, dtype=np.float64)
        ns = np.asarray(n_values, dtype=np.int64)
        out = np.zeros((ns.size, rr.size))
        for i, n in enumerate(ns):
            if self.valid(int(n), l):
                out[i] = self.evaluate(int(n), l, rr)
        return out


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class SpectralState:
    """Windowed eigenstate expansion sum c_nl R_nl(r) Y_l(phi) at time t

    Attributes:
        n_values (ArrayI): Principal quantum numbers of the window rows
        l_values (ArrayI): Angular momenta of the window columns
        coeffs (ArrayC): Coefficients c_nl(t), zero where (n, l) is not a bound state
        energies (ArrayR): Eigenenergies per (n, l), zero where not a bound state
        t (float): Time of the coefficients in atomic units
        tail_mass (float): Probability outside the window, 1 - sum |c|^2
        basis (RadialBasis): Radial eigenbasis the coefficients refer to
    """

    n_values: ArrayI
    l_values: ArrayI
    coeffs: ArrayC
    energies: ArrayR
    t: float
    tail_mass: float
    basis: RadialBasis = field(default_factory=RadialBasis)

    @property
    def window(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (
            (int(self.n_values[0]), int(self.n_values[-1])),
            (int(self.l_values[0]), int(self.l_values[-1])),
        )

    # ------------------------------------------------------------------------------------------

    @property
    def probabilities(self) -> ArrayR:
        return np.abs(self.coeffs) ** 2

    # ------------------------------------------------------------------------------------------

    @property
    def norm(self) -> float:
        return float(np.sum(self.probabilities))

    # ------------------------------------------------------------------------------------------

    def mean_energy(self) -> float:
        return float(np.sum(self.probabilities * self.energies))

    # ------------------------------------------------------------------------------------------

    def l_moments(self) -> tuple[float, float]:
        """<L> and <L^2> from the coefficient weights"""
        weights = np.sum(self.probabilities, axis=0)
        ells = self.l_values.astype(np.float64)
        return float(weights @ ells), float(weights @ ells**2)


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class GridField:
    """Probability density r |Psi|^2 sampled on a polar grid

    Attributes:
        r_grid (ArrayR): Radii in bohr
        phi_grid (ArrayR): Angles in radians
        values (ArrayR): r |Psi(r, phi)|^2, shape (len(r_grid), len(phi_grid))
        t (float): Time in atomic units
        amplitude (ArrayC | None): Psi on the same grid, when kept
    """

    r_grid: ArrayR
    phi_grid: ArrayR
    values: ArrayR
    t: float
    amplitude: ArrayC | None = None

    def __post_init__(self) -> None:
        if self.r_grid.size == 0 or self.phi_grid.size == 0:
            raise DomainError("grid fields need non-empty r and phi grids")
        if self.values.shape != (self.r_grid.size, self.phi_grid.size):
            raise DomainError(f"values shape {self.values.shape} does not match the grid")
        if np.any(self.values < 0.0):
            raise DomainError("grid densities must be non-negative")

    # ------------------------------------------------------------------------------------------

    def mass(self) -> float:
        """Trapezoid integral of the density over the grid"""
        inner = np.trapezoid(self.values, self.phi_grid, axis=1)
        return float(np.trapezoid(inner, self.r_grid))

    # ------------------------------------------------------------------------------------------

    def peak(self) -> tuple[float, float]:
        """(r, phi) of the largest sample"""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.r_grid[i]), float(self.phi_grid[j])

    # ------------------------------------------------------------------------------------------

    def distance(self, other: "GridField") -> float:
        """Relative L2 distance ||other - self|| / ||self|| on a shared grid"""
        if self.values.shape != other.values.shape:
            raise DomainError("grid fields must share a grid to be compared")
        return float(
            np.linalg.norm(other.values - self.values) / np.linalg.norm(self.values)
        )

    # ------------------------------------------------------------------------------------------

    def rank1_residual(self) -> float:
        """
        Fraction of the sampled norm of sqrt(r) Psi missed by its best product
        approximation f(r) g(phi); zero for a separable wave function.
        """
        if self.amplitude is None:
            raise DomainError("rank1_residual needs the complex amplitude")
        weighted = np.sqrt(self.r_grid)[:, None] * self.amplitude
        sigma = np.linalg.svd(weighted, compute_uv=False)
        total = float(np.sum(sigma**2))
        return math.sqrt(max(1.0 - sigma[0] ** 2 / total, 0.0))


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class TimeSeries:
    """Coefficient-space observables sampled at a list of times"""

    times: ArrayR
    r: ArrayR
    r2: ArrayR
    cos_phi: ArrayR
    sin_phi: ArrayR
    autocorrelation: ArrayR

    @property
    def dr(self) -> ArrayR:
        return np.sqrt(np.maximum(self.r2 - self.r**2, 0.0))

    # ------------------------------------------------------------------------------------------

    @property
    def localization(self) -> ArrayR:
        """|<e^{i phi}>|, one for a point-like angular distribution"""
        return np.hypot(self.cos_phi, self.sin_phi)


# ==========================================================================================
# ==========================================================================================


def _closed_form_overlap(
    p: EssParams, basis: RadialBasis, n: int, l: int  # noqa: E741
) -> tuple[complex, float]:
    """Radial overlap by the finite Laguerre-term sum, with its condition estimate"""
    k, lam, nu = basis.degree(n, l), basis.effective_l(l), basis.nu(n, l)
    base = complex(1.0 / nu + p.gamma0, p.gamma1)
    log_terms = np.empty(k + 1)
    phases = np.empty(k + 1)
    for j in range(k + 1):
        log_pow, arg_pow = log_complex_pow(base, -(p.alpha + lam + j + 2.0))
        log_terms[j] = (
            j * math.log(2.0 / nu)
            + special.gammaln(k + 2.0 * lam + 1.0)
            - special.gammaln(k - j + 1.0)
            - special.gammaln(2.0 * lam + j + 1.0)
            - special.gammaln(j + 1.0)
            + special.gammaln(p.alpha + lam + j + 2.0)
            + log_pow
        )
        phases[j] = arg_pow + math.pi * (j % 2)
    top = float(np.max(log_terms))
    scaled = np.exp(log_terms - top)
    total = complex(np.sum(scaled * np.exp(1j * phases)))
    cond = float(np.sum(scaled)) / max(abs(total), np.finfo(float).tiny)
    log_pre = p.radial.log_norm + basis.log_norm(n, l) + top
    return math.exp(log_pre) * total, cond


# ------------------------------------------------------------------------------------------


def _channel_overlaps(
    p: EssParams,
    basis: RadialBasis,
    n_values: ArrayI,
    l: int,  # noqa: E741
    nodes: ArrayR,
    psi_weighted: ArrayC,
    method: str,
) -> ArrayC:
    if method == "quadrature":
        return basis.evaluate_many(n_values, l, nodes) @ psi_weighted
    out = np.zeros(n_values.size, dtype=np.complex128)
    for i, n in enumerate(n_values):
        if not basis.valid(int(n), l):
            continue
        value, cond = _closed_form_overlap(p, basis, int(n), l)
        if cond > CLOSED_FORM_MAX_COND:
            logger.error(
                "Closed-form overlap is ill-conditioned",
                extra={"n": int(n), "l": l, "condition": cond},
            )
            raise AccuracyError(
                f"closed-form overlap for (n, l) = ({n}, {l}) has condition {cond:.3e}",
                change=cond * np.finfo(float).eps,
            )
        out[i] = value
    return out


# ------------------------------------------------------------------------------------------


def _center_n(p: EssParams) -> float:
    if p.spec is not None:
        return p.spec.n_bar
    energy = ess_energy(p.alpha, p.gamma0, p.gamma1, p.beta, p.delta)
    if energy >= 0.0:
        raise DomainError("expansion needs a state with negative mean energy")
    return 0.5 + 1.0 / math.sqrt(-2.0 * energy)


# ------------------------------------------------------------------------------------------


def expand(
    p: EssParams,
    tol: float = 1e-6,
    *,
    basis: RadialBasis | None = None,
    method: Literal["quadrature", "closed"] = "quadrature",
    max_n: int = MAX_PRINCIPAL,
    l_min: int | None = None,
) -> SpectralState:
    """
    Expand an ESS in radial eigenstates times e^{i l phi}/sqrt(2 pi).

    c_nl is the angular amplitude I_{beta-l}(delta)/sqrt(I_0(2 delta)) times the radial
    overlap of R_nl with psi. The rectangular window starts at n_bar +- 10 and
    beta +- 6 Delta L and its margins double until the tail mass drops to tol.

    Args:
        p: State to expand
        tol: Largest acceptable tail mass
        basis: Radial eigenbasis, hydrogenic when omitted
        method: "quadrature" for Gauss-Legendre overlaps, "closed" for the finite
            Laguerre-term sum guarded by a condition estimate
        max_n: Largest principal quantum number the window may reach
        l_min: Lowest angular momentum the window must include, beta - 6 Delta L
            when omitted

    Returns:
        SpectralState at t = 0

    Raises:
        TruncationError: If the window reaches max_n before the tail drops to tol
        AccuracyError: If the closed-form sum is too ill-conditioned to trust
    """
    if method not in ("quadrature", "closed"):
        raise DomainError(f"unknown expansion method {method!r}")
    basis = basis if basis is not None else RadialBasis()
    center = int(round(_center_n(p)))
    n_margin = 10
    l_margin = max(int(math.ceil(6.0 * math.sqrt(spread_squared(p.delta)))), 2)

    r_lo, r_hi = rss_support(p.radial)
    nodes, weights = radial_quadrature(r_lo, r_hi, OVERLAP_PANELS, QUAD_ORDER)
    psi_weighted = rss_eval(p.radial, nodes) * nodes * weights

    tail = float("nan")
    while True:
        n_lo, n_hi = max(1, center - n_margin), center + n_margin
        if n_hi > max_n:
            logger.error(
                "Expansion window exceeded its cap",
                extra={"max_n": max_n, "tail_mass": tail},
            )
            raise TruncationError(
                f"expansion window reached n = {n_hi} > {max_n} before tail <= {tol}",
                tail_mass=tail,
            )
        n_values = np.arange(n_lo, n_hi + 1, dtype=np.int64)
        l_lo = p.beta - l_margin if l_min is None else min(p.beta - l_margin, l_min)
        l_values = np.arange(l_lo, p.beta + l_margin + 1, dtype=np.int64)

        pool = get_executor()
        columns = list(
            pool.map(
                lambda ell: _channel_overlaps(
                    p, basis, n_values, int(ell), nodes, psi_weighted, method
                ),
                l_values,
            )
        )
        radial_part = np.stack(columns, axis=1)
        coeffs = radial_part * css_fourier_coefficients(p.angular, l_values)[None, :]
        tail = 1.0 - float(np.sum(np.abs(coeffs) ** 2))
        logger.debug(
            "Expansion window",
            extra={
                "n_range": (n_lo, n_hi),
                "l_range": (int(l_values[0]), int(l_values[-1])),
                "tail_mass": tail,
            },
        )
        if tail <= tol:
            break
        n_margin *= 2
        l_margin *= 2

    energies = np.zeros(coeffs.shape)
    for i, n in enumerate(n_values):
        for j, ell in enumerate(l_values):
            if basis.valid(int(n), int(ell)):
                energies[i, j] = basis.energy(int(n), int(ell))

    return SpectralState(
        n_values=_frozen(n_values),
        l_values=_frozen(l_values),
        coeffs=_frozen(coeffs),
        energies=_frozen(energies),
        t=0.0,
        tail_mass=max(tail, 0.0),
        basis=basis,
    )


# ------------------------------------------------------------------------------------------


def evolve(s: SpectralState, t: float) -> SpectralState:
    """
    Propagate the expansion to absolute time t by the phases e^{-i E (t - s.t)}.

    :param s: State to propagate
    :param t: Target time in atomic units
    """
    phases = np.exp(-1j * s.energies * (t - s.t))
    return SpectralState(
        n_values=s.n_values,
        l_values=s.l_values,
        coeffs=_frozen(s.coeffs * phases),
        energies=s.energies,
        t=float(t),
        tail_mass=s.tail_mass,
        basis=s.basis,
    )


# ------------------------------------------------------------------------------------------


def _radial_sums(s: SpectralState, r: ArrayR) -> ArrayC:
    """g_l(r) = sum_n c_nl R_nl(r) for every window column, shape (L, len(r))"""

    def column(j: int) -> ArrayC:
        basis_rows = s.basis.evaluate_many(s.n_values, int(s.l_values[j]), r)
        return s.coeffs[:, j] @ basis_rows

    return np.stack(list(get_executor().map(column, range(s.l_values.size))))


# ------------------------------------------------------------------------------------------


def reconstruct(
    s: SpectralState, r_grid: ArrayLike, phi_grid: ArrayLike, keep_amplitude: bool = True
) -> GridField:
    """
    Sum the expansion on a polar grid and return the density r |Psi|^2.

    Args:
        s: Expansion at the time of interest
        r_grid: Radii, all positive
        phi_grid: Angles in radians
        keep_amplitude: Store Psi on the grid as well

    Returns:
        GridField at time s.t

    Raises:
        DomainError: For empty grids or non-positive radii
    """
    r = np.asarray(r_grid, dtype=np.float64).ravel()
    phi = np.asarray(phi_grid, dtype=np.float64).ravel()
    if r.size == 0 or phi.size == 0:
        raise DomainError("reconstruct needs non-empty r and phi grids")
    radial = _radial_sums(s, r)
    harmonics = np.exp(1j * np.outer(s.l_values, phi)) / math.sqrt(2.0 * math.pi)
    psi = radial.T @ harmonics
    values = r[:, None] * np.abs(psi) ** 2
    return GridField(
        r_grid=r,
        phi_grid=phi,
        values=values,
        t=s.t,
        amplitude=psi if keep_amplitude else None,
    )


# ==========================================================================================
# ==========================================================================================


def _matrix_elements(s: SpectralState) -> tuple[ArrayR, ArrayR, ArrayR]:
    """Per-channel radial matrices of r and r^2, and the l -> l+1 overlaps of 1"""
    nu_max = max(
        s.basis.nu(int(n), int(ell))
        for n in s.n_values
        for ell in s.l_values
        if s.basis.valid(int(n), int(ell))
    )
    r_max = 2.0 * nu_max**2 + 40.0 * nu_max
    nodes, weights = radial_quadrature(0.0, r_max, MATRIX_PANELS, QUAD_ORDER)
    rows = list(
        get_executor().map(
            lambda ell: s.basis.evaluate_many(s.n_values, int(ell), nodes), s.l_values
        )
    )
    basis = np.stack(rows)  # (L, N, nodes)
    w1 = weights * nodes
    m_r = np.einsum("lnk,k,lmk->lnm", basis, w1 * nodes, basis, optimize=True)
    m_r2 = np.einsum("lnk,k,lmk->lnm", basis, w1 * nodes**2, basis, optimize=True)
    shift = np.einsum("lpk,k,lnk->lpn", basis[1:], w1, basis[:-1], optimize=True)
    return m_r, m_r2, shift


# ------------------------------------------------------------------------------------------


def observables_vs_time(s: SpectralState, times: ArrayLike) -> TimeSeries:
    """
    <r>, <r^2>, <cos phi>, <sin phi> and |<Psi(s.t)|Psi(t)>|^2 at each time.

    All quantities come from coefficient space: radial matrix elements of r and r^2
    within each l channel, and the radial overlaps that couple channel l to l + 1 for
    <e^{i phi}>. Expectations are divided by the window norm.

    Args:
        s: Expansion at its reference time
        times: Absolute times in atomic units

    Returns:
        TimeSeries of the observables
    """
    t = np.atleast_1d(np.asarray(times, dtype=np.float64))
    m_r, m_r2, shift = _matrix_elements(s)
    phases = np.exp(-1j * s.energies[None, :, :] * (t[:, None, None] - s.t))
    c_t = s.coeffs[None, :, :] * phases
    norm = s.norm

    mean_r = np.einsum("tnl,lnm,tml->t", c_t.conj(), m_r, c_t).real / norm
    mean_r2 = np.einsum("tnl,lnm,tml->t", c_t.conj(), m_r2, c_t).real / norm
    e_iphi = (
        np.einsum("tpl,lpn,tnl->t", c_t[:, :, 1:].conj(), shift, c_t[:, :, :-1]) / norm
    )
    overlap = np.sum(s.probabilities[None, :, :] * phases, axis=(1, 2))

    return TimeSeries(
        times=t,
        r=mean_r,
        r2=mean_r2,
        cos_phi=e_iphi.real,
        sin_phi=e_iphi.imag,
        autocorrelation=np.abs(overlap) ** 2,
    )


# ==========================================================================================
# ==========================================================================================
# eof
