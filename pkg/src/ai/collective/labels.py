"""
Label sample sets and the collective input matrix.
"""

from dataclasses import dataclass

import numpy as np

from src.ai.common import DimensionError, Matrix, ParameterError
from src.ai.graph import Graph
from .masks import MaskMatrix


@dataclass(frozen=True, eq=False)
class LabelSampleSet:
    """
    K label matrices (stacked as a K x n x C array) used as the label channel
    of non-visible nodes.

    Rows are one-hot, except in the zero base (all rows zero) and in
    probabilistic sets, whose single sample holds probability rows.
    """

    samples: np.ndarray
    source_iteration: int
    zero_base: bool = False
    probabilistic: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 3 or samples.shape[0] < 1:
            raise DimensionError("LabelSampleSet", samples.shape, (1, 0, 0))
        object.__setattr__(self, "samples", samples)
        if self.zero_base:
            if np.any(samples != 0.0):
                raise ParameterError("zero base sample set must be all zero")
        elif not self.probabilistic:
            row_sums = samples.sum(axis=2)
            if np.any((samples != 0.0) & (samples != 1.0)) or np.any(row_sums != 1.0):
                raise ParameterError("label samples must be one-hot in every row")

    @classmethod
    def zeros(cls, k: int, num_nodes: int, num_classes: int) -> "LabelSampleSet":
        """Recursion base: every node's predicted-label channel is zero."""
        return cls(np.zeros((k, num_nodes, num_classes)), source_iteration=0, zero_base=True)

    @property
    def K(self) -> int:
        return self.samples.shape[0]

    @property
    def num_nodes(self) -> int:
        return self.samples.shape[1]

    @property
    def num_classes(self) -> int:
        return self.samples.shape[2]


def build_input(g: Graph, y_l_onehot: Matrix, yhat: Matrix, m: MaskMatrix) -> Matrix:
    """Return ``[X ‖ Y_L⊙M + Ŷ⊙M̄]`` of width p + C."""
    expected = (g.num_nodes, g.num_classes)
    if y_l_onehot.shape != expected:
        raise DimensionError("build_input labels", y_l_onehot.shape, expected)
    if yhat.shape != expected:
        raise DimensionError("build_input samples", yhat.shape, expected)
    if m.num_nodes != g.num_nodes:
        raise DimensionError("build_input mask", (m.num_nodes,), (g.num_nodes,))
    bits = m.node_bits[:, None]
    channel = y_l_onehot * bits + yhat * (1.0 - bits)
    return np.hstack([g.features, channel])


def draw_label_samples(probs: Matrix, k: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw ``k`` independent categorical labels per row of ``probs`` by inverse CDF.

    Returns a k x n x C one-hot array. A class with zero probability is never
    drawn; every class with positive probability can be.
    """
    if k < 1:
        raise ParameterError(f"sample count must be >= 1, got {k}")
    n, num_classes = probs.shape
    cdf = np.cumsum(probs, axis=1)
    u = rng.random((k, n, 1))
    classes = np.minimum((u >= cdf[None, :, :]).sum(axis=2), num_classes - 1)
    # rounding in the cumulative sum must not land on a zero-probability tail class
    tail = probs[np.arange(n)[None, :], classes] == 0.0
    if np.any(tail):
        last_positive = num_classes - 1 - np.argmax(probs[:, ::-1] > 0.0, axis=1)
        classes = np.where(tail, last_positive[None, :], classes)
    onehot = np.zeros((k, n, num_classes))
    np.put_along_axis(onehot, classes[:, :, None], 1.0, axis=2)
    return onehot


def uniform_probs(num_nodes: int, num_classes: int) -> Matrix:
    return np.full((num_nodes, num_classes), 1.0 / num_classes)
