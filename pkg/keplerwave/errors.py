from typing import Any

# ==========================================================================================
# ==========================================================================================

# File:    errors.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the exception hierarchy shared by every keplerwave module
# ==========================================================================================
# ==========================================================================================
# Insert Code here


class KeplerWaveError(Exception):
    """Root of every exception raised by the keplerwave package"""


# ==========================================================================================
# ==========================================================================================


class DomainError(KeplerWaveError, ValueError):
    """Raised when an argument lies outside the domain of an operation"""


# ==========================================================================================
# ==========================================================================================


class UnboundOrbitError(DomainError):
    """Raised when a classical orbit is requested for a non-negative energy"""


# ==========================================================================================
# ==========================================================================================


class RangeError(DomainError):
    """Raised when an input is valid in principle but outside the validated range"""


# ==========================================================================================
# ==========================================================================================


class SolverError(KeplerWaveError):
    """
    Raised when an iterative solver fails to converge

    :param message: Human readable description of the failure
    :param residuals: The residuals at the last iterate, if any were computed
    """

    def __init__(self, message: str, residuals: Any = None):
        super().__init__(message)
        self.residuals = residuals


# ==========================================================================================
# ==========================================================================================


class AccuracyError(KeplerWaveError):
    """
    Raised when a refinement check shows a result has not converged

    :param message: Human readable description of the failure
    :param change: Relative change observed between the two resolutions
    """

    def __init__(self, message: str, change: float = float("nan")):
        super().__init__(message)
        self.change = change


# ==========================================================================================
# ==========================================================================================


class TruncationError(KeplerWaveError):
    """
    Raised when an eigenstate expansion cannot reach its tail tolerance

    :param message: Human readable description of the failure
    :param tail_mass: Probability left outside the largest window tried
    """

    def __init__(self, message: str, tail_mass: float = float("nan")):
        super().__init__(message)
        self.tail_mass = tail_mass


# ==========================================================================================
# ==========================================================================================


class NumericalError(KeplerWaveError):
    """Raised when a numerical kernel fails in a way its inputs should not allow"""


# ==========================================================================================
# ==========================================================================================


class ConfigError(KeplerWaveError):
    """Raised for invalid or incomplete run configurations"""


# ==========================================================================================
# ==========================================================================================
# eof
