"""
Exception hierarchy for walkerverify.

Every error raised by the toolkit derives from ``WalkerVerifyError`` so that
the command line front end can map it to a single exit code.
"""

from typing import Any, Optional


class WalkerVerifyError(Exception):
    """Base exception for walkerverify errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}


class ExpressionSyntaxError(WalkerVerifyError):
    """Raised when expression text does not conform to the grammar."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(
            f"{message} at position {position}",
            error_code="syntax",
            details={"position": position, "text": text},
        )
        self.position = position


class UnknownNameError(WalkerVerifyError):
    """Raised when an expression refers to an unregistered name."""

    def __init__(self, name: str, position: Optional[int] = None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(
            f"Unknown name '{name}'{where}",
            error_code="unknown-name",
            details={"name": name, "position": position},
        )
        self.name = name


class EvaluationDomainError(WalkerVerifyError):
    """Raised when an expression is evaluated outside its domain."""
    pass


class SingularMetricError(WalkerVerifyError):
    """Raised when a metric is not invertible at a point."""
    pass


class GaugeViolationError(WalkerVerifyError):
    """Raised when a metric is not in the gauge an operation requires."""
    pass


class FlowIntegrationError(WalkerVerifyError):
    """Raised when a flow leaves its domain or the integrator gives up."""
    pass


class PreconditionError(WalkerVerifyError):
    """Raised when an operation's precondition does not hold."""
    pass


class CatalogError(WalkerVerifyError):
    """Raised for unknown catalog entries or failing self-tests."""
    pass


class UnsupportedDegreeError(WalkerVerifyError):
    """Raised when a holomorphic polynomial exceeds the supported degree."""
    pass


class DSLFormatError(WalkerVerifyError):
    """Raised when a metric definition file is malformed."""
    pass
