"""
The two-layer component models.

GCN:  z = Â relu(dropout(Â dropout(x) W1)) W2
SAGE: h1 = relu([d(x) ‖ S1 d(x)] W1);  z = [d(h1) ‖ S2 d(h1)] W2

``Â`` is the self-loop symmetric normalization, ``S`` the sampled neighbor
mean, ``d`` dropout. Neither layer carries a bias; the readout does.
"""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.ai.common import (
    DimensionError,
    Matrix,
    Param,
    ParameterError,
    dropout,
    dropout_backward,
    matmul,
    relu,
    relu_backward,
)
from src.ai.graph import Graph, mean_neighbor_aggregate, sym_norm_propagate
from .model import ModelKind, ModelState, glorot_uniform
from .registry import ArchitectureRegistry

# Evaluation-mode neighbor samples are frozen: every eval forward draws them
# from a generator seeded with this value.
EVAL_SAMPLING_SEED = 0

Cache = Dict[str, Any]


def _check_input(model: ModelState, g: Graph, x: Matrix):
    if x.ndim != 2 or x.shape != (g.num_nodes, model.input_dim):
        raise DimensionError(f"{model.kind} forward input", x.shape, (g.num_nodes, model.input_dim))


@ArchitectureRegistry.register
class GCNArchitecture:
    kind = ModelKind.GCN.value

    def init_layers(self, input_dim: int, hidden_dim: int, rng: np.random.Generator) -> List[Param]:
        return [
            Param.create(glorot_uniform(input_dim, hidden_dim, rng)),
            Param.create(glorot_uniform(hidden_dim, hidden_dim, rng)),
        ]

    def forward(
        self,
        model: ModelState,
        g: Graph,
        x: Matrix,
        training: bool,
        rng: Optional[np.random.Generator],
    ) -> Tuple[Matrix, Cache]:
        _check_input(model, g, x)
        w1, w2 = (p.value for p in model.layer_params)
        x_drop, mask0 = dropout(x, model.dropout_p, rng, training)
        ax = sym_norm_propagate(g, x_drop)
        pre1 = matmul(ax, w1)
        h1_drop, mask1 = dropout(relu(pre1), model.dropout_p, rng, training)
        ah = sym_norm_propagate(g, h1_drop)
        z = matmul(ah, w2)
        return z, {"graph": g, "ax": ax, "pre1": pre1, "mask1": mask1, "ah": ah}

    def backward(self, model: ModelState, cache: Cache, dz: Matrix):
        w1, w2 = model.layer_params
        w2.grad += cache["ah"].T @ dz
        # Â is symmetric, so its transpose is itself
        dh1_drop = sym_norm_propagate(cache["graph"], dz @ w2.value.T)
        dpre1 = relu_backward(cache["pre1"], dropout_backward(dh1_drop, cache["mask1"]))
        w1.grad += cache["ax"].T @ dpre1


@ArchitectureRegistry.register
class SAGEArchitecture:
    kind = ModelKind.SAGE.value

    def init_layers(self, input_dim: int, hidden_dim: int, rng: np.random.Generator) -> List[Param]:
        return [
            Param.create(glorot_uniform(2 * input_dim, hidden_dim, rng)),
            Param.create(glorot_uniform(2 * hidden_dim, hidden_dim, rng)),
        ]

    def _layer(self, model: ModelState, g: Graph, h: Matrix, w: Matrix, training, rng, sampler_rng):
        h_drop, mask = dropout(h, model.dropout_p, rng, training)
        agg, sampler = mean_neighbor_aggregate(g, h_drop, model.sample_size, sampler_rng)
        cat = np.hstack([h_drop, agg])
        return matmul(cat, w), {"mask": mask, "sampler": sampler, "cat": cat}

    def forward(
        self,
        model: ModelState,
        g: Graph,
        x: Matrix,
        training: bool,
        rng: Optional[np.random.Generator],
    ) -> Tuple[Matrix, Cache]:
        _check_input(model, g, x)
        if training and rng is None:
            raise ParameterError("SAGE forward in training mode needs a random generator")
        sampler_rng = rng if training else np.random.default_rng(EVAL_SAMPLING_SEED)
        w1, w2 = (p.value for p in model.layer_params)
        pre1, layer1 = self._layer(model, g, x, w1, training, rng, sampler_rng)
        z, layer2 = self._layer(model, g, relu(pre1), w2, training, rng, sampler_rng)
        return z, {"pre1": pre1, "layer1": layer1, "layer2": layer2}

    def backward(self, model: ModelState, cache: Cache, dz: Matrix):
        w1, w2 = model.layer_params
        layer2 = cache["layer2"]
        w2.grad += layer2["cat"].T @ dz
        dcat = dz @ w2.value.T
        width = model.hidden_dim
        dh1_drop = dcat[:, :width] + layer2["sampler"].T @ dcat[:, width:]
        dpre1 = relu_backward(cache["pre1"], dropout_backward(np.asarray(dh1_drop), layer2["mask"]))
        w1.grad += cache["layer1"]["cat"].T @ dpre1
