"""
    Error and warning classes.
"""

from __future__ import annotations

from typing import Optional, Union
from typing_validation import validate

class Error(Exception):
    """
        Generic spatial fairness error.
    """

class InputError(Error, ValueError):
    """
        Generic error for invalid input data.
    """

class DimensionMismatchError(InputError):
    """
        Error raised when two points (or a point and a model) have different dimensions.
    """

    dim_a: int
    dim_b: int

    def __init__(self, dim_a: int, dim_b: int) -> None:
        validate(dim_a, int)
        validate(dim_b, int)
        self.dim_a = dim_a
        self.dim_b = dim_b
        if dim_a == dim_b:
            raise ValueError(f"Dimensions {dim_a} and {dim_b} match.")
        super().__init__(f"Dimension mismatch: found {dim_a} and {dim_b}.")

class InvalidNormOrderError(InputError):
    """
        Error raised when a norm order ``p`` is not a real number ``>= 1``.
    """

    p: float

    def __init__(self, p: Union[int, float]) -> None:
        validate(p, Union[int, float])
        self.p = float(p)
        if p >= 1:
            raise ValueError(f"Norm order {p} is valid.")
        super().__init__(f"Norm order must be >= 1, found {p}.")

class EmptyInputError(InputError):
    """
        Error raised when a collection which must be non-empty is empty.
    """

    def __init__(self, what: str) -> None:
        validate(what, str)
        super().__init__(f"Input {what} must be non-empty.")

class DegenerateReferenceError(InputError):
    """
        Error raised when every point coincides with the reference point,
        so that the distance normalizer would be zero.
    """

    def __init__(self) -> None:
        super().__init__("All points coincide with the reference point: distance normalizer is zero.")

class ScoreRangeError(InputError):
    """
        Error raised when a likelihood score lies outside ``[0, 1]``.
    """

    index: int
    value: float

    def __init__(self, index: int, value: float) -> None:
        validate(index, int)
        validate(value, float)
        self.index = index
        self.value = value
        if 0.0 <= value <= 1.0:
            raise ValueError(f"Score {value} is in range [0, 1].")
        super().__init__(f"Score at index {index} is {value}, outside range [0, 1].")

class UnnormalizedInputError(InputError):
    """
        Error raised when a polynomial input lies outside ``[-1, 1]``,
        where no fairness bound applies.
    """

    value: float

    def __init__(self, value: float) -> None:
        validate(value, float)
        self.value = value
        super().__init__(f"Input value {value} lies outside [-1, 1]: normalize inputs first.")

class NonFiniteInputError(InputError):
    """
        Error raised when an input contains NaN or infinite values.
    """

    def __init__(self, what: str) -> None:
        validate(what, str)
        super().__init__(f"Input {what} contains non-finite values.")

class ConfigError(Error, ValueError):
    """
        Error raised for invalid configuration values (``c``, degree, dimension, norm order, grids, solver options).
    """

class DataFormatError(Error):
    """
        Generic error for delimited input files which cannot be ingested.
    """

    line: Optional[int]
    reason: str

    def __init__(self, reason: str, line: Optional[int] = None) -> None:
        validate(reason, str)
        validate(line, Optional[int])
        self.reason = reason
        self.line = line
        if line is None:
            super().__init__(reason)
        else:
            super().__init__(f"Line {line}: {reason}")

class MalformedRowError(DataFormatError):
    """
        Error raised when a data row cannot be parsed or violates a value constraint.
        Line numbers are 1-based, with the header on line 1.
    """

    line: int

    def __init__(self, line: int, reason: str) -> None:
        validate(line, int)
        super().__init__(reason, line)

class ModelFormatError(Error):
    """
        Error raised when a model file cannot be read or has an unsupported format version.
    """


class SpatialFairnessWarning(UserWarning):
    """
        Generic spatial fairness warning.
    """

class DegenerateDimensionWarning(SpatialFairnessWarning):
    """
        Warning issued when a coordinate dimension is constant and is normalized to zero.
    """

class ClippedInputWarning(SpatialFairnessWarning):
    """
        Warning issued when query points fall outside the normalization box and are clipped into it.
    """

class SkippedDegreeWarning(SpatialFairnessWarning):
    """
        Warning issued when a degree cannot be evaluated during degree selection.
    """

class UnderdeterminedSystemWarning(SpatialFairnessWarning):
    """
        Warning issued when a least squares system has fewer rows than columns.
    """

class NonConvergenceWarning(SpatialFairnessWarning):
    """
        Warning issued when the solver reaches its iteration cap before the optimality conditions hold.
    """
