# errors.py

"""
Exception hierarchy shared by every zermelo module.

Each exception carries an ``exit_code`` used by the command-line front end:
2 for bad input (invalid specs, points outside a chart, non-convex data,
inadmissible classifications) and 3 for numerical failures (degenerate normal
forms, degenerate flags, failed searches, failed verifications).
"""

from typing import Any, Optional, Sequence


class ZermeloError(Exception):
    """
    Base class for all errors raised by the package.
    """

    exit_code = 1


class ValidationError(ZermeloError, ValueError):
    """
    Raised when input data violates a structural requirement
    (non-skew matrix, wrong shape, unknown model kind, ...).
    """

    exit_code = 2


class DomainError(ZermeloError, ValueError):
    """
    Raised when a point lies outside the domain of a function: outside a chart,
    on a finite-difference stencil that leaves the domain, or at a jet operation
    (division by zero, square root of a non-positive value).
    """

    exit_code = 2

    def __init__(self, message: str, point: Optional[Sequence[float]] = None):
        if point is not None:
            message = f"{message} at point {list(map(float, point))}"
        super().__init__(message)
        self.point = point


class ConvexityError(ZermeloError, ValueError):
    """
    Raised when strong convexity fails (|W|_h >= 1, ||b|| >= 1, singular
    fundamental tensor, or no strongly convex open set for a classified wind).
    """

    exit_code = 2

    def __init__(self, message: str, margin: Optional[float] = None):
        if margin is not None:
            message = f"{message} (margin {margin:.6g})"
        super().__init__(message)
        self.margin = margin


class ClassificationError(ZermeloError, ValueError):
    """
    Raised when (K, sigma) cannot belong to a constant flag curvature Randers metric.
    """

    exit_code = 2


class DegeneracyError(ZermeloError):
    """
    Raised when a numerical decision sits too close to a boundary between cases.
    """

    exit_code = 3

    def __init__(self, message: str, margins: Optional[dict] = None):
        if margins:
            details = ", ".join(f"{key}={value:.3e}" for key, value in margins.items())
            message = f"{message} [{details}]"
        super().__init__(message)
        self.margins = margins or {}


class FlagError(ZermeloError):
    """
    Raised when a flag (y, V) is degenerate.
    """

    exit_code = 3


class SearchFailureError(ZermeloError):
    """
    Raised when shooting does not reach the goal within its evaluation budget.
    """

    exit_code = 3

    def __init__(self, message: str, best_residual: Any = None):
        if best_residual is not None:
            message = f"{message} (best residual {best_residual:.3e})"
        super().__init__(message)
        self.best_residual = best_residual


class VerificationFailure(ZermeloError):
    """
    Raised by the CLI when a verification report does not pass.
    """

    exit_code = 3
