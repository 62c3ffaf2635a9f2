"""Exception hierarchy shared across the suite."""


class StationKeepError(Exception):
    """Base class for all suite-specific errors."""


class ConfigurationError(StationKeepError):
    """Invalid parameter set or scenario configuration."""


class DomainError(StationKeepError):
    """Evaluation requested outside the physical domain (e.g. above the surface)."""


class SolverError(StationKeepError):
    """Iterative solver failed to converge."""


class DivergenceError(StationKeepError):
    """Simulated state became non-finite."""


class EstimatorError(StationKeepError):
    """Numerical failure inside the state estimator."""


class UsageError(StationKeepError):
    """Caller misuse of an otherwise valid API (empty series, mismatched pairs...)."""
