"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid or inconsistent input data (bad CSV, empty mask, shape mismatch)."""


class NothingToCompleteError(DataError):
    """Hard-constraint completion requested for a matrix with no missing entries."""


class SolverError(RuntimeError):
    """Optimization failed; carries the last finite iterate when available."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
