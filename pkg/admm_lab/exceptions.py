"""
Exceptions for admm-lab.
"""

from typing import Any, Optional, Tuple


class AdmmLabException(Exception):
    """Base exception for admm-lab."""
    pass


class ConfigurationError(AdmmLabException):
    """Exception raised for invalid settings, spec files or overrides."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class ValidationError(AdmmLabException):
    """Exception raised for invalid model parameters."""
    pass


class DimensionMismatchError(ValidationError):
    """Exception raised when vector or matrix shapes disagree."""

    def __init__(
        self,
        message: str = "Dimension mismatch.",
        expected: Optional[Tuple[int, ...]] = None,
        actual: Optional[Tuple[int, ...]] = None,
    ):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NonBinarySignalError(ValidationError):
    """Exception raised when a symbol error rate is requested for a non ±1 signal."""

    def __init__(self, message: str = "SER is only defined for ±1 signals."):
        super().__init__(message)


class NonFiniteMatrixError(AdmmLabException):
    """Exception raised when a measurement matrix holds NaN or infinite entries."""

    def __init__(self, message: str = "Matrix has non-finite entries."):
        super().__init__(message)


class SaddleSearchError(AdmmLabException):
    """Base exception for failures of the saddle-point search."""
    pass


class OptimumAtBoundaryError(SaddleSearchError):
    """
    Raised when the search returns a coordinate next to an endpoint of its
    range, which means the range does not bracket the optimizer.

    Attributes:
        parameter: ``"alpha"`` or ``"beta"``.
        side: ``"lower"`` or ``"upper"``.
        value: The coordinate the search returned.
        search_range: The range that was searched.
    """

    def __init__(
        self,
        parameter: str,
        side: str,
        value: float,
        search_range: Tuple[float, float],
    ):
        super().__init__(
            f"{parameter}* = {value:.6g} lies at the {side} end of the search "
            f"range ({search_range[0]:.6g}, {search_range[1]:.6g}); widen the range."
        )
        self.parameter = parameter
        self.side = side
        self.value = value
        self.search_range = search_range


class NonFiniteObjectiveError(SaddleSearchError):
    """Raised when the saddle objective evaluates to NaN or infinity."""

    def __init__(self, alpha: float, beta: float):
        super().__init__(f"Saddle objective is not finite at alpha={alpha!r}, beta={beta!r}.")
        self.alpha = alpha
        self.beta = beta


class IdentityCheckError(AdmmLabException):
    """Raised when the rewritten s-update disagrees with the direct one."""

    def __init__(self, relative_gap: float):
        super().__init__(
            f"Rewritten s-update disagrees with the direct update (relative gap {relative_gap:.3e})."
        )
        self.relative_gap = relative_gap


class MissingSourceError(AdmmLabException):
    """Raised when a comparison needs a result source that the table lacks."""

    def __init__(self, source: str):
        super().__init__(f"Result table has no '{source}' rows to compare against.")
        self.source = source


class ExperimentFailedError(AdmmLabException):
    """
    Raised when an experiment stops early. The partial result table, ending
    with a failure marker row, has already been written.

    Attributes:
        partial: The partial ResultTable that was flushed.
        cause: The original exception.
    """

    def __init__(self, message: str, partial: Any = None, cause: Optional[BaseException] = None):
        super().__init__(message)
        self.partial = partial
        self.cause = cause
