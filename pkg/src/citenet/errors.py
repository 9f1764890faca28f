"""Exception hierarchy shared across the package."""


class CitenetError(Exception):
    """Base class for all errors raised by this package."""


class MalformedPatternError(CitenetError):
    """A lite-regex query pattern could not be parsed."""


class QueryRejectedError(CitenetError):
    """The upstream service rejected a query (4xx); carries its message."""


class TransientFailureError(CitenetError):
    """Retries on 429/5xx were exhausted without a successful response."""


class PayloadDecodeError(CitenetError):
    """An upstream or cached payload could not be decoded."""


class BudgetExceededError(CitenetError):
    """The configured daily request budget would be exceeded."""


class AbstractConflictError(CitenetError):
    """Two terms of an inverted abstract index claim the same position."""


class CorpusLoadError(CitenetError):
    """A corpus file failed to decode or violated a corpus invariant."""


class FieldError(CitenetError):
    """An export was asked for a field name that does not exist."""


class MetricError(CitenetError):
    """A metric was requested that is invalid for the given graph kind."""


class ConvergenceError(CitenetError):
    """An iterative computation did not converge within its iteration cap."""


class ClusteringParameterError(CitenetError):
    """Clustering was invoked with inconsistent parameters."""


class GMLError(CitenetError):
    """A graph could not be serialized to or parsed from GML."""
