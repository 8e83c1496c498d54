"""
Model state shared by every architecture, plus the softmax readout.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List

import numpy as np

from src.ai.common import DimensionError, Matrix, Param, matmul, softmax_rows


class ModelKind(str, Enum):
    GCN = "gcn"
    SAGE = "sage"


def glorot_uniform(fan_in: int, fan_out: int, rng: np.random.Generator) -> Matrix:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


@dataclass(eq=False)
class ModelState:
    """All learnable parameters of a component GNN and its readout."""

    kind: str
    input_dim: int
    hidden_dim: int
    num_classes: int
    layer_params: List[Param]
    readout_w: Param
    readout_b: Param
    dropout_p: float = 0.5
    sample_size: int = 5
    step_count: int = field(default=0)

    def __post_init__(self):
        if self.readout_w.shape != (self.hidden_dim, self.num_classes):
            raise DimensionError("readout_w", self.readout_w.shape, (self.hidden_dim, self.num_classes))
        if self.readout_b.shape != (1, self.num_classes):
            raise DimensionError("readout_b", self.readout_b.shape, (1, self.num_classes))

    def parameters(self) -> List[Param]:
        return [*self.layer_params, self.readout_w, self.readout_b]

    def zero_grad(self):
        for p in self.parameters():
            p.zero_grad()

    def clone(self) -> "ModelState":
        return ModelState(
            kind=self.kind,
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim,
            num_classes=self.num_classes,
            layer_params=[p.copy() for p in self.layer_params],
            readout_w=self.readout_w.copy(),
            readout_b=self.readout_b.copy(),
            dropout_p=self.dropout_p,
            sample_size=self.sample_size,
            step_count=self.step_count,
        )


def readout_logits(model: ModelState, z: Matrix) -> Matrix:
    if z.ndim != 2 or z.shape[1] != model.hidden_dim:
        raise DimensionError("readout", z.shape, model.readout_w.shape)
    return matmul(z, model.readout_w.value) + model.readout_b.value


def predict_probs(model: ModelState, z: Matrix) -> Matrix:
    """softmax(z W + b) row by row."""
    return softmax_rows(readout_logits(model, z))


def readout_backward(model: ModelState, z: Matrix, dlogits: Matrix) -> Matrix:
    """Accumulate readout gradients and return the gradient with respect to ``z``."""
    model.readout_w.grad += z.T @ dlogits
    model.readout_b.grad += dlogits.sum(axis=0, keepdims=True)
    return dlogits @ model.readout_w.value.T


def predict_classes(probs: Matrix) -> np.ndarray:
    """Row argmax; ties go to the lowest class index."""
    return np.argmax(probs, axis=1)
