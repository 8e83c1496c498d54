"""
Learnable parameters, Adam with decoupled weight decay, and global-norm clipping.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import DimensionError, ParameterError
from .linalg import Matrix


@dataclass(eq=False)
class Param:
    """A parameter matrix together with its gradient and Adam moments."""

    value: Matrix
    grad: Matrix
    m1: Matrix
    m2: Matrix

    def __post_init__(self):
        shapes = {self.value.shape, self.grad.shape, self.m1.shape, self.m2.shape}
        if len(shapes) != 1:
            raise DimensionError("Param", self.value.shape, self.grad.shape)

    @classmethod
    def create(cls, value: Matrix) -> "Param":
        value = np.array(value, dtype=np.float64)
        return cls(
            value=value,
            grad=np.zeros_like(value),
            m1=np.zeros_like(value),
            m2=np.zeros_like(value),
        )

    @property
    def shape(self):
        return self.value.shape

    def zero_grad(self):
        self.grad = np.zeros_like(self.value)

    def copy(self) -> "Param":
        return Param(
            value=self.value.copy(),
            grad=self.grad.copy(),
            m1=self.m1.copy(),
            m2=self.m2.copy(),
        )


def adam_step(
    param: Param,
    lr: float,
    weight_decay: float = 0.0,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
    step_index: int = 1,
) -> Param:
    """
    Apply one Adam update with decoupled weight decay, in place.

    Args:
        param: Parameter whose ``grad`` holds the current gradient
        lr: Learning rate
        weight_decay: Decoupled decay coefficient (scaled by ``lr``)
        beta1: First-moment decay
        beta2: Second-moment decay
        eps: Denominator floor
        step_index: 1-based step counter used for bias correction

    Returns:
        The same ``param`` object, updated
    """
    if step_index < 1:
        raise ParameterError(f"step_index must be >= 1, got {step_index}")

    param.m1 = beta1 * param.m1 + (1.0 - beta1) * param.grad
    param.m2 = beta2 * param.m2 + (1.0 - beta2) * param.grad * param.grad
    m_hat = param.m1 / (1.0 - beta1 ** step_index)
    v_hat = param.m2 / (1.0 - beta2 ** step_index)
    param.value = param.value - lr * (m_hat / (np.sqrt(v_hat) + eps) + weight_decay * param.value)
    return param


def clip_grad_norm(params: Iterable[Param], max_norm: float) -> float:
    """Scale all gradients so their global L2 norm is at most ``max_norm``; returns the norm before clipping."""
    params = list(params)
    total = float(np.sqrt(sum(float((p.grad * p.grad).sum()) for p in params)))
    if max_norm is not None and max_norm > 0 and total > max_norm:
        scale = max_norm / (total + 1e-12)
        for p in params:
            p.grad = p.grad * scale
    return total
