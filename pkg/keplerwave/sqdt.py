import json
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from numbers import Integral
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from keplerwave.angular import delta_from_spread
from keplerwave.classical import apsides
from keplerwave.errors import DomainError, SolverError
from keplerwave.ess import EssParams, PhysicalSpec, solve_ess
from keplerwave.radial import OscillatorUncertainty, RssParams, rss_oscillator_uncertainty
from keplerwave.spectral import ArrayR, RadialBasis, SpectralState, expand

# ==========================================================================================
# ==========================================================================================

# File:    sqdt.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the quantum-defect extension, starred quantum numbers,
#          the defect-shifted radial eigenbasis and the self-consistent construction of
#          squeezed states for alkali-metal Rydberg atoms
# ==========================================================================================
# ==========================================================================================
# Insert Code here

logger = logging.getLogger(__name__)

LITHIUM_DEFECTS = {0: 0.40, 1: 0.05}
BUILD_TOL = 1e-8
BUILD_MAX_OUTER = 50
BUILD_EXPAND_TOL = 1e-9


@dataclass(frozen=True)
class QuantumDefectTable:
    """Asymptotic quantum defects delta(|l|) and integer shifts I(|l|)

    Attributes:
        defects (Mapping[int, float]): delta per |l|, each in [0, 1); absent keys are 0
        shifts (Mapping[int, int]): I per |l|; absent keys are 0
    """

    defects: Mapping[int, float] = field(default_factory=dict)
    shifts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        defects: dict[int, float] = {}
        for key, value in self.defects.items():
            ell = _table_key(key)
            if not 0.0 <= float(value) < 1.0:
                raise DomainError(f"defect for |l| = {ell} must lie in [0, 1): {value}")
            defects[ell] = float(value)
        shifts: dict[int, int] = {}
        for key, value in self.shifts.items():
            ell = _table_key(key)
            if isinstance(value, bool) or not float(value).is_integer():
                raise DomainError(f"shift for |l| = {ell} must be an integer: {value!r}")
            shifts[ell] = int(value)
        object.__setattr__(self, "defects", defects)
        object.__setattr__(self, "shifts", shifts)

    # ------------------------------------------------------------------------------------------

    def defect(self, l: int) -> float:  # noqa: E741
        return self.defects.get(abs(l), 0.0)

    # ------------------------------------------------------------------------------------------

    def shift(self, l: int) -> int:  # noqa: E741
        return self.shifts.get(abs(l), 0)

    # ------------------------------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.defects.values()) and not any(self.shifts.values())

    # ------------------------------------------------------------------------------------------

    def scaled(self, s: float) -> "QuantumDefectTable":
        """Table with every defect multiplied by s, shifts unchanged"""
        if s < 0.0:
            raise DomainError(f"scale must be non-negative, got {s}")
        return QuantumDefectTable(
            defects={k: s * v for k, v in self.defects.items()}, shifts=dict(self.shifts)
        )

    # ------------------------------------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "QuantumDefectTable":
        """
        Build a table from {"defects": {"0": 0.40, ...}, "shifts": {"0": 0, ...}}.

        :param data: Parsed JSON document; both keys are optional
        :raises DomainError: For unknown top-level keys or invalid entries
        """
        unknown = set(data) - {"defects", "shifts"}
        if unknown:
            raise DomainError(f"unknown quantum-defect keys: {sorted(unknown)}")
        return cls(
            defects=dict(data.get("defects", {})), shifts=dict(data.get("shifts", {}))
        )

    # ------------------------------------------------------------------------------------------

    @classmethod
    def from_json(cls, path: str | Path) -> "QuantumDefectTable":
        """Read a table from a JSON file; OSError propagates for unreadable paths"""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise DomainError(f"{path} does not hold a JSON object")
        table = cls.from_dict(data)
        logger.debug("Loaded quantum-defect table", extra={"path": str(path)})
        return table

    # ------------------------------------------------------------------------------------------

    @classmethod
    def lithium(cls) -> "QuantumDefectTable":
        """Asymptotic lithium s and p defects"""
        return cls(defects=dict(LITHIUM_DEFECTS))


# ==========================================================================================
# ==========================================================================================


@dataclass(frozen=True)
class StarredQuantum:
    """Defect-shifted quantum numbers n* = n - delta and l* = |l| - delta + I"""

    n_star: float
    l_star: float


# ==========================================================================================
# ==========================================================================================


class SqdtBasis(RadialBasis):
    """
    Radial eigenbasis of the effective potential l*^2 / 2r^2 - 1/r.

    The Laguerre superscript is 2 l* and the degree n - |l| - 1 - I, which puts every
    state at nu = n* - 1/2 and energy -1 / (2 (n* - 1/2)^2). Channels need l* > -1/2.
    """

    name = "sqdt"

    def __init__(self, table: QuantumDefectTable):
        self.table = table

    # ------------------------------------------------------------------------------------------

    def effective_l(self, l: int) -> float:  # noqa: E741
        return abs(l) - self.table.defect(l) + self.table.shift(l)

    # ------------------------------------------------------------------------------------------

    def degree(self, n: int, l: int) -> int:  # noqa: E741
        return n - abs(l) - 1 - self.table.shift(l)

    # ------------------------------------------------------------------------------------------

    def valid(self, n: int, l: int) -> bool:  # noqa: E741
        return (
            n >= 1
            and abs(l) <= n - 1
            and self.degree(n, l) >= 0
            and self.effective_l(l) > -0.5
        )


# ==========================================================================================
# ==========================================================================================


def _table_key(key: Any) -> int:
    try:
        ell = int(key)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"table keys must be integers, got {key!r}") from exc
    if ell < 0 or (isinstance(key, float) and not key.is_integer()):
        raise DomainError(f"table keys must be non-negative integers, got {key!r}")
    return ell


# ------------------------------------------------------------------------------------------


def _check_state(n: int, l: int) -> None:  # noqa: E741
    if isinstance(n, bool) or not isinstance(n, Integral) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if abs(l) > n - 1:
        raise DomainError(f"|l| = {abs(l)} exceeds n - 1 = {n - 1}")


# ------------------------------------------------------------------------------------------


def starred(n: int, l: int, table: QuantumDefectTable) -> StarredQuantum:  # noqa: E741
    """
    Starred quantum numbers of channel (n, l).

    Args:
        n: Principal quantum number
        l: Angular momentum with |l| <= n - 1
        table: Quantum-defect table

    Returns:
        StarredQuantum with n* = n - delta(|l|) and l* = |l| - delta(|l|) + I(|l|)
    """
    _check_state(n, l)
    d = table.defect(l)
    return StarredQuantum(n_star=n - d, l_star=abs(l) - d + table.shift(l))


# ------------------------------------------------------------------------------------------


def sqdt_energy(n: int, l: int, table: QuantumDefectTable) -> float:  # noqa: E741
    """E = -1 / (2 (n* - 1/2)^2)"""
    _check_state(n, l)
    return -0.5 / (starred(n, l, table).n_star - 0.5) ** 2


# ------------------------------------------------------------------------------------------


def sqdt_eigenstate(
    n: int, l: int, table: QuantumDefectTable, r: ArrayLike  # noqa: E741
) -> ArrayR:
    """
    Defect-shifted radial eigenfunction R_{n* l*}(r), normalized under r dr.

    Raises:
        DomainError: If (n, l) is invalid, not normalizable for the table, or r <= 0
    """
    _check_state(n, l)
    basis = SqdtBasis(table)
    if not basis.valid(n, l):
        raise DomainError(
            f"(n, l) = ({n}, {l}) gives l* = {basis.effective_l(l)} and degree "
            f"{basis.degree(n, l)}, which is not a normalizable state"
        )
    return basis.evaluate(n, l, r)


# ------------------------------------------------------------------------------------------


def sqdt_expand(
    p: EssParams, table: QuantumDefectTable, tol: float = 1e-6
) -> SpectralState:
    """Expand an ESS in the defect-shifted eigenbasis, with the tail policy of expand"""
    return expand(p, tol, basis=SqdtBasis(table))


# ------------------------------------------------------------------------------------------


def sqdt_hamiltonian_expectation(s: SpectralState, table: QuantumDefectTable) -> float:
    """
    <H> = sum |c_nl|^2 E_{n*} over the expansion window.

    :param s: Expansion in the defect-shifted basis of the same table
    :param table: Quantum-defect table fixing the energies
    """
    probs = s.probabilities
    defects = np.array([table.defect(int(ell)) for ell in s.l_values])
    nu = s.n_values[:, None] - defects[None, :] - 0.5
    occupied = probs > 0.0
    return float(np.sum(probs[occupied] * (-0.5 / nu[occupied] ** 2)))


# ------------------------------------------------------------------------------------------


def apsidal_precession(l: int, table: QuantumDefectTable) -> float:  # noqa: E741
    """
    Apsidal advance per radial period, -2 pi d(delta)/dl, in radians.

    The slope is the central difference of the table around |l|. A table whose defects
    do not change with |l| near l gives zero, and the packet then keeps the hydrogenic
    orientation.
    """
    drop = table.defect(abs(l) - 1) - table.defect(abs(l) + 1)
    return math.pi * drop


# ------------------------------------------------------------------------------------------


def starred_outer_apsis(spec: PhysicalSpec, table: QuantumDefectTable) -> float:
    """r*_out from the apsidal formula with both mean quantum numbers starred"""
    d = table.defect(spec.l_bar)
    n_star = spec.n_bar - d
    l_star = spec.l_bar - d + table.shift(spec.l_bar)
    return apsides(n_star, l_star)[1]


# ------------------------------------------------------------------------------------------


def sqdt_build(
    spec: PhysicalSpec,
    table: QuantumDefectTable,
    *,
    simple: bool = False,
    tol: float = BUILD_TOL,
    max_outer: int = BUILD_MAX_OUTER,
) -> EssParams:
    """
    ESS parameters for an alkali atom: <r> = r*_out and <H> = E_{n_bar*}.

    The first pass solves with the closed-form hydrogenic <H>. Unless simple is set, the
    state is then expanded in the defect-shifted basis and the hydrogenic target is moved
    by the gap between E_{n_bar*} and sum |c|^2 E_{n*} until that gap is within
    tol |E_{n_bar*}|.

    Args:
        spec: Physical inputs
        table: Quantum-defect table
        simple: Stop after the first pass
        tol: Relative tolerance of the fixed point
        max_outer: Cap on fixed-point iterations

    Returns:
        EssParams carrying spec

    Raises:
        SolverError: If the fixed point does not converge within max_outer iterations
    """
    n_star = spec.n_bar - table.defect(spec.l_bar)
    e_star = -0.5 / (n_star - 0.5) ** 2
    r_star = starred_outer_apsis(spec, table)
    delta = delta_from_spread(spec.dl)

    target = e_star
    gap = math.nan
    for outer in range(max_outer):
        alpha, gamma0 = solve_ess(r_star, target, spec.l_bar, delta)
        params = EssParams(
            alpha=alpha,
            beta=spec.l_bar,
            gamma0=gamma0,
            gamma1=0.0,
            delta=delta,
            spec=spec,
        )
        if simple or table.is_zero:
            return params
        state = sqdt_expand(params, table, BUILD_EXPAND_TOL)
        energy = sqdt_hamiltonian_expectation(state, table) / state.norm
        gap = e_star - energy
        logger.debug(
            "SQDT fixed point",
            extra={"iteration": outer, "alpha": alpha, "gamma0": gamma0, "gap": gap},
        )
        if abs(gap) <= tol * abs(e_star):
            logger.info(
                "Built SQDT ESS",
                extra={"n_bar": spec.n_bar, "l_bar": spec.l_bar, "iterations": outer + 1},
            )
            return params
        target += gap

    logger.error("SQDT fixed point did not converge", extra={"gap": gap})
    raise SolverError(
        f"SQDT energy fixed point did not converge in {max_outer} iterations",
        residuals=(gap,),
    )


# ------------------------------------------------------------------------------------------


def sqdt_oscillator_uncertainty(
    p: RssParams, l: int, table: QuantumDefectTable  # noqa: E741
) -> OscillatorUncertainty:
    """
    Oscillator-form radial uncertainty with the momentum scaled by f = |l*| / |l|.

    :param p: Radial state with alpha > 1/2
    :param l: Nonzero angular momentum
    :param table: Quantum-defect table
    :raises DomainError: For l = 0 or l* = 0
    """
    if l == 0:
        raise DomainError("the defect-scaled relation needs l != 0")
    l_star = abs(l) - table.defect(l) + table.shift(l)
    f = abs(l_star) / abs(l)
    if f == 0.0:
        raise DomainError(f"l* vanishes for l = {l}")
    return rss_oscillator_uncertainty(p, scale=f)


# ==========================================================================================
# ==========================================================================================
# eof
