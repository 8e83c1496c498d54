"""
Exception hierarchy shared by every module of the collective-learning engine.
"""

from typing import Tuple


class CollectiveGNNError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(CollectiveGNNError, ValueError):
    """Operand shapes are incompatible."""

    def __init__(self, operation: str, left: Tuple[int, ...], right: Tuple[int, ...]):
        self.operation = operation
        self.left = tuple(left)
        self.right = tuple(right)
        super().__init__(f"{operation}: incompatible shapes {self.left} and {self.right}")


class DegenerateBatchError(CollectiveGNNError, ValueError):
    """A weighted loss was requested with every row weight equal to zero."""


class ParameterError(CollectiveGNNError, ValueError):
    """A numeric hyperparameter is outside its valid range."""


class GraphFormatError(CollectiveGNNError, ValueError):
    """A graph input file could not be parsed."""

    def __init__(self, path: str, line_number: int, message: str):
        self.path = str(path)
        self.line_number = line_number
        super().__init__(f"{self.path}:{line_number}: {message}")


class InconsistentGraphError(CollectiveGNNError, ValueError):
    """Graph files or arrays disagree with each other or break a graph invariant."""


class SamplingError(CollectiveGNNError):
    """A randomized sampler could not produce a valid sample."""


class MaskError(CollectiveGNNError, ValueError):
    """A label mask cannot be drawn for the requested node set."""


class ConfigurationError(CollectiveGNNError, ValueError):
    """An experiment or training configuration is inconsistent."""


class CertificationError(CollectiveGNNError):
    """A synthetic counterexample failed its own certification."""


class SizeBoundError(CollectiveGNNError, ValueError):
    """Brute-force search was requested on a graph above the supported size."""


class DegenerateTestError(CollectiveGNNError, ValueError):
    """A paired statistical test has zero variance in its differences."""
