"""
Custom exception classes for treecrit.
Each exception carries an HTTP status for the API and an exit code for the CLI.
"""

from typing import Any, Dict, Optional, Sequence, Tuple

from fastapi import status

EXIT_OK = 0
EXIT_PARSE_ERROR = 2
EXIT_DOMAIN_ERROR = 3
EXIT_NUMERICAL_ERROR = 4


class TreeCritException(Exception):
    """Base exception class for all treecrit exceptions."""

    def __init__(
        self,
        message: str,
        error_code: str = "TREECRIT_ERROR",
        status_code: int = status.HTTP_500_INTERNAL_SERVER_ERROR,
        exit_code: int = 1,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.status_code = status_code
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


# Configuration parsing


class ConfigParseError(TreeCritException):
    """Raised when an environment or step-law config cannot be parsed."""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        error_code: str = "CONFIG_PARSE_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        self.field = field
        error_details = details or {}
        if field:
            error_details["field"] = field
        super().__init__(
            message=message,
            error_code=error_code,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            exit_code=EXIT_PARSE_ERROR,
            details=error_details,
        )


class SchemaViolationError(ConfigParseError):
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, field=field, error_code="SCHEMA_VIOLATION")


class InvalidBranchingError(ConfigParseError):
    def __init__(self, b: Any):
        super().__init__(
            f"branching number b must be an integer >= 2, got {b!r}",
            field="b",
            error_code="INVALID_BRANCHING",
        )


class MissingEntryError(ConfigParseError):
    """Raised when the b x b entries grid has a hole."""

    def __init__(self, i: int, j: int):
        self.entry = (i, j)
        super().__init__(
            f"missing entry ({i},{j})",
            field=f"entries[{i}][{j}]",
            error_code="MISSING_ENTRY",
            details={"entry": [i, j]},
        )


class NonPositiveSupportError(ConfigParseError):
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, field=field, error_code="NON_POSITIVE_SUPPORT")


class ProbabilitySumError(ConfigParseError):
    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, field=field, error_code="PROBABILITY_SUM")


class UnknownFamilyError(ConfigParseError):
    def __init__(self, kind: str, field: Optional[str] = None, known: Sequence[str] = ()):
        super().__init__(
            f"unknown distribution kind {kind!r}; known kinds: {', '.join(known)}",
            field=field,
            error_code="UNKNOWN_FAMILY",
        )


# Mathematical domain


class DomainError(TreeCritException):
    """Raised when s lies outside a moment domain, or a precondition fails."""

    def __init__(
        self,
        message: str,
        s: Optional[float] = None,
        interval: Optional[Tuple[float, float]] = None,
        entry: Optional[Tuple[int, int]] = None,
        error_code: str = "DOMAIN_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        self.s = s
        self.interval = interval
        self.entry = entry
        error_details = details or {}
        if s is not None:
            error_details["s"] = s
        if interval is not None:
            error_details["interval"] = list(interval)
        if entry is not None:
            error_details["entry"] = list(entry)
        super().__init__(
            message=message,
            error_code=error_code,
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            exit_code=EXIT_DOMAIN_ERROR,
            details=error_details,
        )

    def tagged(self, i: int, j: int) -> "DomainError":
        """Return a copy naming the (parent colour, child colour) entry."""
        return DomainError(
            f"entry ({i},{j}): {self.message}",
            s=self.s,
            interval=self.interval,
            entry=(i, j),
            error_code=self.error_code,
        )


class NoCrossingError(DomainError):
    def __init__(self, message: str, lo: float, hi: float):
        super().__init__(message, interval=(lo, hi), error_code="NO_CROSSING")


class UnsupportedEnvironmentError(DomainError):
    def __init__(self, message: str, sibling_mode: Optional[str] = None):
        super().__init__(
            message,
            error_code="UNSUPPORTED_ENVIRONMENT",
            details={"sibling_mode": sibling_mode} if sibling_mode else None,
        )


class NoFiniteMeanError(DomainError):
    def __init__(self, rho_at_one: float):
        self.rho_at_one = rho_at_one
        super().__init__(
            f"no finite mean: rho(1) = {rho_at_one:.12g} >= 1",
            s=1.0,
            error_code="NO_FINITE_MEAN",
            details={"rho_at_one": rho_at_one},
        )


class SpeedSearchError(DomainError):
    def __init__(self, lo: float, hi: float, g_lo: float, g_hi: float):
        super().__init__(
            f"speed equation has no sign change on [{lo:g}, {hi:g}]",
            interval=(lo, hi),
            error_code="SPEED_NO_SIGN_CHANGE",
            details={"g_lo": g_lo, "g_hi": g_hi},
        )


# Numerical failures and budgets


class ConvergenceError(TreeCritException):
    """Raised when an iterative method exceeds its iteration cap."""

    def __init__(self, message: str, method: str, iterations: Optional[int] = None):
        super().__init__(
            message=message,
            error_code="CONVERGENCE_ERROR",
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            exit_code=EXIT_NUMERICAL_ERROR,
            details={"method": method, "iterations": iterations},
        )


class QuadratureError(ConvergenceError):
    def __init__(self, message: str, abserr: Optional[float] = None):
        super().__init__(message, method="quadrature")
        if abserr is not None:
            self.details["abserr"] = abserr


class BudgetExceededError(TreeCritException):
    """Raised when a simulation would exceed its configured size budget."""

    def __init__(self, resource: str, requested: float, limit: float):
        super().__init__(
            message=f"{resource} budget exceeded: requested {requested:.6g}, limit {limit:.6g}",
            error_code="BUDGET_EXCEEDED",
            status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
            exit_code=EXIT_NUMERICAL_ERROR,
            details={"resource": resource, "requested": requested, "limit": limit},
        )
