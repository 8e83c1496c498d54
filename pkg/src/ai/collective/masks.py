"""
Node-level label masks. Bit 1 means the node's true label is visible as input;
bit 0 nodes (among the labeled ones) are the training targets.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.ai.common import Matrix, MaskError
from src.ai.graph import Graph, UNLABELED
from .config import CLConfig, Scenario

MAX_MASK_RETRIES = 1000


@dataclass(frozen=True, eq=False)
class MaskMatrix:
    """Length-n bit vector, logically an n x C matrix with identical columns."""

    node_bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.node_bits, dtype=np.float64).reshape(-1)
        if np.any((bits != 0.0) & (bits != 1.0)):
            raise MaskError("mask bits must be 0 or 1")
        object.__setattr__(self, "node_bits", bits)

    @classmethod
    def zeros(cls, num_nodes: int) -> "MaskMatrix":
        return cls(np.zeros(num_nodes))

    @property
    def num_nodes(self) -> int:
        return self.node_bits.shape[0]

    @property
    def visible_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.node_bits)

    @property
    def complement(self) -> np.ndarray:
        return 1.0 - self.node_bits

    def broadcast(self, num_classes: int) -> Matrix:
        return np.repeat(self.node_bits[:, None], num_classes, axis=1)


def sample_mask(
    g: Graph,
    labeled: Sequence[int],
    cfg: CLConfig,
    rng: np.random.Generator,
    require_hidden: bool = True,
) -> MaskMatrix:
    """
    Draw one mask over ``labeled``.

    In scenario ``test_unlabeled`` the mask is all zero and no randomness is
    consumed. In ``test_partial`` each labeled node is visible independently
    with probability ``1 - mask_rate``; with ``require_hidden`` an all-visible
    draw is rejected and redrawn so that at least one node remains a target.
    """
    if cfg.scenario == Scenario.TEST_UNLABELED:
        return MaskMatrix.zeros(g.num_nodes)

    labeled = np.asarray(labeled, dtype=np.int64)
    if labeled.size == 0:
        raise MaskError("scenario test_partial needs a non-empty labeled set")
    if labeled.min() < 0 or labeled.max() >= g.num_nodes or np.any(g.labels[labeled] == UNLABELED):
        raise MaskError("labeled set contains nodes without a known label")

    for _ in range(MAX_MASK_RETRIES):
        visible = rng.random(labeled.size) < 1.0 - cfg.mask_rate
        if not require_hidden or not visible.all():
            bits = np.zeros(g.num_nodes)
            bits[labeled[visible]] = 1.0
            return MaskMatrix(bits)
    raise MaskError(f"every draw of {MAX_MASK_RETRIES} left all {labeled.size} labeled nodes visible")
