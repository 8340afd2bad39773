"""Exception types shared across the package."""

from __future__ import annotations


class CbdError(Exception):
    """Base class for all package-specific errors."""


class InfeasibleStats(CbdError):
    """Raised when (m_a, m_b, cov) admits no 2x2 probability table."""


class MissingContext(CbdError):
    """Raised when a cyclic system is built or queried without all four contexts."""


class InfeasibleInjection(CbdError):
    """Raised when a requested signaling shift leaves the feasible region."""


class TrialParseError(CbdError):
    """Raised on malformed trial input; carries the offending line number."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SolverFailure(CbdError):
    """Raised when the LP solver cannot certify an optimum.

    Carries the iteration count, the last objective value seen, and, when the
    failure happens inside a full analysis, the partial report assembled from
    the closed-form quantities.
    """

    def __init__(self, message: str, iterations: int | None = None,
                 objective: float | None = None, report=None):
        self.iterations = iterations
        self.objective = objective
        self.report = report
        super().__init__(message)
