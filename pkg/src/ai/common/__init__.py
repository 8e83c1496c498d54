"""
Numerics and errors shared across all AI modules.
"""

from .exceptions import (
    CollectiveGNNError,
    DimensionError,
    DegenerateBatchError,
    ParameterError,
    GraphFormatError,
    InconsistentGraphError,
    SamplingError,
    MaskError,
    ConfigurationError,
    CertificationError,
    SizeBoundError,
    DegenerateTestError,
)
from .linalg import (
    Matrix,
    matmul,
    softmax_rows,
    masked_cross_entropy,
    relu,
    relu_backward,
    dropout,
    dropout_backward,
)
from .optim import Param, adam_step, clip_grad_norm

__all__ = [
    "CollectiveGNNError",
    "DimensionError",
    "DegenerateBatchError",
    "ParameterError",
    "GraphFormatError",
    "InconsistentGraphError",
    "SamplingError",
    "MaskError",
    "ConfigurationError",
    "CertificationError",
    "SizeBoundError",
    "DegenerateTestError",
    "Matrix",
    "matmul",
    "softmax_rows",
    "masked_cross_entropy",
    "relu",
    "relu_backward",
    "dropout",
    "dropout_backward",
    "Param",
    "adam_step",
    "clip_grad_norm",
]
