"""Exception hierarchy for the mckaygamma package.

Two broad failure classes matter to callers: bad input data (DomainError)
and numerical estimation failure (EstimationError, NumericRangeError).
The command-line tool maps them to distinct exit codes.
"""


class McKayError(Exception):
    """Base class for all package-specific errors."""


class DomainError(McKayError):
    """Input outside the mathematical or data domain (bad pairs, bad args)."""


class NumericRangeError(McKayError):
    """An intermediate quantity left the representable floating-point range."""


class EstimationError(McKayError):
    """An estimation procedure could not produce a usable result."""


class DegenerateStatisticsError(EstimationError):
    """A closed-form denominator is (numerically) zero for this sample."""


class NoValidEstimateError(EstimationError):
    """Every candidate on a profile grid failed or was non-positive."""


class InsufficientReplicatesError(EstimationError):
    """Too few bootstrap replicates converged to report a standard error."""


class DifferentiationError(EstimationError):
    """Numerical differentiation hit a degenerate perturbed point."""
