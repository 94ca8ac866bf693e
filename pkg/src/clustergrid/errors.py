"""Exception hierarchy shared across the package.

Everything raised on purpose derives from ClusterGridError so callers can
catch one type at pipeline boundaries. Per-candidate failures inside a grid
run are captured into the candidate's report instead of propagating.
"""


class ClusterGridError(Exception):
    """Base class for all errors raised by clustergrid."""


class SchemaError(ClusterGridError):
    """Input table violates structural expectations (e.g. duplicate headers)."""


class IngestionError(ClusterGridError):
    """A cell could not be parsed as a finite number."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class InsufficientDataError(ClusterGridError):
    """Fewer surviving rows than the pipeline can work with."""


class ParameterError(ClusterGridError):
    """An algorithm or operation parameter is out of its valid range."""


class DomainError(ClusterGridError):
    """Input data violates an algorithm's domain (e.g. negative cells for NMF)."""


class MetricUndefinedError(ClusterGridError):
    """The metric is mathematically undefined for this labeling (e.g. k < 2)."""


class DegenerateMetricError(ClusterGridError):
    """The metric hit a degenerate configuration (e.g. coincident centroids)."""


class StatTestUndefinedError(ClusterGridError):
    """The statistical test is undefined for the given sample sizes."""


class ConfigError(ClusterGridError):
    """Run configuration is malformed or names unknown algorithms/parameters."""
