"""Exception types shared across the toolkit."""


class CitenetError(Exception):
    """Base class for all citenet errors."""


class CorpusError(CitenetError):
    """Raised for unusable corpus files or invalid queries."""


class GraphError(CitenetError):
    """Raised for invalid graph operations (empty graph, mismatched inputs)."""


class EmptyResultError(CitenetError):
    """Raised when an operation legitimately produces nothing to work with.

    The CLI maps this class to exit code 2.
    """


class NoSeedMatchesError(EmptyResultError):
    """Raised when a query matches no document in the corpus."""


class ConvergenceError(CitenetError):
    """Raised when an iterative solve fails to reach its tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class SynthError(CitenetError):
    """Raised for infeasible or inconsistent generator specifications."""
