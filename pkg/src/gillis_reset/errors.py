"""Exception types shared across the package."""


class GrwError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GrwError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A gamma-type function was evaluated at a pole."""


class NonConvergenceError(GrwError):
    """A series or iteration hit its term/iteration cap before converging."""


class DegenerateParameterError(GrwError):
    """Hypergeometric parameters fall in a band where the generic
    connection formula is invalid and a logarithmic case must be used."""


class InsufficientPrefixError(GrwError):
    """A pmf prefix is too short for the requested computation."""


class ResourceLimitError(GrwError):
    """A request exceeds a configured resource cap."""


class ExcessCensoringError(GrwError):
    """Too many Monte Carlo trajectories hit the step cap for the
    estimate to be trusted."""


class NegativeVarianceError(GrwError):
    """Rounding drove a variance significantly below zero; indicates a
    numerics bug rather than a legitimate answer."""
