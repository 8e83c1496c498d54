"""
Shared fixtures: small graphs, seeded generators and the central
finite-difference helper every gradient test goes through.
"""

from typing import Callable

import numpy as np
import pytest

from src.ai.common import Param
from src.ai.graph import Graph, UNLABELED

FD_EPS = 1e-5
FD_RTOL = 1e-4


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def path_graph():
    """0 - 1 - 2 - 3 - 4, one feature, no labels."""
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def toy_graph():
    """
    Two triangles joined by an edge, 3 features, 2 classes; node 5 unlabeled.

        0 - 1      3 - 4
         \\ |      | /
           2 ---- 5
    """
    rng = np.random.default_rng(42)
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 5)]
    labels = [0, 0, 0, 1, 1, UNLABELED]
    return Graph.from_edges(6, edges, features=rng.normal(size=(6, 3)), labels=labels, num_classes=2)


def random_graph(rng: np.random.Generator, n: int = 7, num_classes: int = 3, feature_dim: int = 3, p: float = 0.35) -> Graph:
    """Connected random graph (path backbone plus extra edges), every node labeled."""
    edges = [(i, i + 1) for i in range(n - 1)]
    edges += [(i, j) for i in range(n) for j in range(i + 2, n) if rng.random() < p]
    return Graph.from_edges(
        n,
        edges,
        features=rng.normal(size=(n, feature_dim)),
        labels=rng.integers(0, num_classes, size=n),
        num_classes=num_classes,
    )


def numeric_param_grad(loss: Callable[[], float], param: Param, eps: float = FD_EPS) -> np.ndarray:
    """Central differences of ``loss()`` with respect to every entry of ``param.value``."""
    grad = np.zeros_like(param.value)
    for index in np.ndindex(param.value.shape):
        original = param.value[index]
        param.value[index] = original + eps
        plus = loss()
        param.value[index] = original - eps
        minus = loss()
        param.value[index] = original
        grad[index] = (plus - minus) / (2.0 * eps)
    return grad


def numeric_grad(loss: Callable[[np.ndarray], float], x: np.ndarray, eps: float = FD_EPS) -> np.ndarray:
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        shifted = x.copy()
        shifted[index] += eps
        plus = loss(shifted)
        shifted[index] -= 2.0 * eps
        grad[index] = (plus - loss(shifted)) / (2.0 * eps)
    return grad


def assert_grad_close(analytic: np.ndarray, numeric: np.ndarray, rtol: float = FD_RTOL):
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    error = np.linalg.norm(analytic - numeric) / max(scale, 1e-12)
    assert error < rtol, f"relative gradient error {error:.3e}"
