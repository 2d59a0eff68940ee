"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HWError(Exception):
    """Base class for library errors."""


class DomainError(HWError, ValueError):
    """Input outside the region where an operation is defined."""


class PoleError(DomainError):
    """Argument sits on a pole of the gamma function."""


class NoSaddle(DomainError):
    """The saddle-point equation has no admissible root for this t."""


class NegativeCurvature(DomainError):
    """Saddle too shallow: log u0 <= 2 + 2*rho, so the curvature M is not positive."""


class NonConvergence(HWError, ArithmeticError):
    """An iterative method ran out of its iteration or term budget."""


class ToleranceNotMet(NonConvergence):
    """Quadrature could not reach the requested tolerance within its node budget.

    ``log_bound``, when set, is the log of an estimated upper bound on the
    magnitude of the quantity that could not be resolved.
    """

    def __init__(self, message: str, log_bound: float | None = None):
        super().__init__(message)
        self.log_bound = log_bound
