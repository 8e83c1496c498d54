"""
Dense float64 numerics with hand-derived forward/backward pairs.

Matrices are plain ``numpy`` arrays of dtype float64. Every function here is
pure given its inputs and an explicit ``numpy.random.Generator``.
"""

from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt

from .exceptions import DegenerateBatchError, DimensionError, ParameterError

Matrix = npt.NDArray[np.float64]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product with an explicit shape check."""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError("matmul", a.shape, b.shape)
    return a @ b


def softmax_rows(logits: Matrix) -> Matrix:
    """Row-wise softmax computed after subtracting each row's maximum."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def masked_cross_entropy(
    probs: Matrix,
    targets: Matrix,
    row_weights: npt.ArrayLike,
) -> Tuple[float, Matrix]:
    """
    Weighted mean negative log-likelihood of one-hot targets.

    Args:
        probs: Row-normalized class probabilities (n x C)
        targets: One-hot target matrix (n x C); rows with weight 0 are ignored
        row_weights: Length-n vector of {0, 1} weights

    Returns:
        Tuple of (loss, gradient of the loss with respect to the pre-softmax logits)
    """
    if probs.shape != targets.shape:
        raise DimensionError("masked_cross_entropy", probs.shape, targets.shape)
    weights = np.asarray(row_weights, dtype=np.float64).reshape(-1)
    if weights.shape[0] != probs.shape[0]:
        raise DimensionError("masked_cross_entropy weights", weights.shape, probs.shape)

    total = weights.sum()
    if total <= 0:
        raise DegenerateBatchError("masked_cross_entropy: every row weight is zero")

    active = weights > 0
    picked = (probs[active] * targets[active]).sum(axis=1)
    tiny = np.finfo(np.float64).tiny
    loss = float(-(weights[active] * np.log(np.maximum(picked, tiny))).sum() / total)

    dlogits = (weights / total)[:, None] * (probs - targets)
    return loss, dlogits


def relu(x: Matrix) -> Matrix:
    return np.maximum(x, 0.0)


def relu_backward(x: Matrix, upstream: Matrix) -> Matrix:
    """Gradient of relu; the tie at exactly zero passes no gradient."""
    if x.shape != upstream.shape:
        raise DimensionError("relu_backward", x.shape, upstream.shape)
    return upstream * (x > 0.0)


def dropout(
    x: Matrix,
    p: float,
    rng: Optional[np.random.Generator],
    training: bool = True,
) -> Tuple[Matrix, Matrix]:
    """
    Inverted dropout.

    Returns the output and the scaling mask used, so that the backward pass is
    ``upstream * mask``. Evaluation mode (or ``p == 0``) is the identity.
    """
    if not (0.0 <= p < 1.0):
        raise ParameterError(f"dropout probability must lie in [0, 1), got {p}")
    if not training or p == 0.0:
        return x, np.ones_like(x)
    if rng is None:
        raise ParameterError("dropout in training mode needs a random generator")
    keep = rng.random(x.shape) >= p
    mask = keep / (1.0 - p)
    return x * mask, mask


def dropout_backward(upstream: Matrix, mask: Matrix) -> Matrix:
    return upstream * mask
