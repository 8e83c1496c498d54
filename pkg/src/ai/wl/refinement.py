"""
1-WL color refinement.

Each round replaces a node's color by the pair (own color, sorted multiset of
neighbor colors); the pairs are re-indexed to dense ids in sorted order, so
colors are canonical and no hashing is involved.
"""

from dataclasses import dataclass
from typing import Hashable, List, Optional, Sequence, Set

import numpy as np

from src.ai.common import ParameterError
from src.ai.graph import Graph


@dataclass(frozen=True, eq=False)
class Coloring:
    colors: np.ndarray
    rounds: int
    stable: bool

    @property
    def num_colors(self) -> int:
        return int(self.colors.max()) + 1 if self.colors.size else 0

    def classes(self) -> List[Set[int]]:
        """Color classes, ordered by color id."""
        return [set(np.flatnonzero(self.colors == c).tolist()) for c in range(self.num_colors)]


def dense_ids(keys: Sequence[Hashable]) -> np.ndarray:
    """Map keys to 0..k-1 in sorted key order."""
    index = {key: i for i, key in enumerate(sorted(set(keys)))}
    return np.array([index[key] for key in keys], dtype=np.int64)


def initial_colors(g: Graph, extra: Optional[Sequence[Hashable]] = None) -> np.ndarray:
    """Colors from feature rows and labels (``-1`` for unlabeled nodes), plus optional per-node attributes."""
    keys = []
    for v in range(g.num_nodes):
        key = (tuple(g.features[v].tolist()), int(g.labels[v]))
        if extra is not None:
            key = key + (extra[v],)
        keys.append(key)
    return dense_ids(keys)


def refine_once(g: Graph, colors: np.ndarray) -> np.ndarray:
    keys = [
        (int(colors[v]), tuple(sorted(colors[g.neighbors(v)].tolist())))
        for v in range(g.num_nodes)
    ]
    return dense_ids(keys)


def wl_refine(g: Graph, init_colors: Sequence[int], max_rounds: Optional[int] = None) -> Coloring:
    """
    Refine ``init_colors`` until the partition stops changing.

    Args:
        g: Graph to color
        init_colors: Dense initial color ids (0..k-1)
        max_rounds: Stop after this many refining rounds even if not yet stable

    Returns:
        Coloring with the number of rounds that refined the partition
    """
    colors = np.asarray(init_colors, dtype=np.int64)
    if colors.shape != (g.num_nodes,):
        raise ParameterError(f"expected {g.num_nodes} initial colors, got shape {colors.shape}")
    if colors.size and set(colors.tolist()) != set(range(int(colors.max()) + 1)):
        raise ParameterError("initial colors must be dense ids starting at 0")
    if max_rounds is not None and max_rounds < 0:
        raise ParameterError(f"max_rounds must be >= 0, got {max_rounds}")

    rounds = 0
    num_colors = len(set(colors.tolist()))
    while max_rounds is None or rounds < max_rounds:
        refined = refine_once(g, colors)
        refined_count = int(refined.max()) + 1 if refined.size else 0
        if refined_count == num_colors:
            return Coloring(colors=colors, rounds=rounds, stable=True)
        colors, num_colors = refined, refined_count
        rounds += 1
    stable = int(refine_once(g, colors).max(initial=-1)) + 1 == num_colors
    return Coloring(colors=colors, rounds=rounds, stable=stable)


def wl_node_equivalence(g: Graph, d: int, init_colors: Optional[Sequence[int]] = None) -> Coloring:
    """
    Coloring after exactly ``d`` refinement rounds from feature/label colors.

    Two nodes sharing a round-d color are indistinguishable to any d-layer
    message-passing model whose aggregation ignores degrees.
    """
    if d < 0:
        raise ParameterError(f"round count must be >= 0, got {d}")
    init = initial_colors(g) if init_colors is None else init_colors
    return wl_refine(g, init, max_rounds=d)


def is_refinement(fine: Sequence[int], coarse: Sequence[int]) -> bool:
    """True when every class of ``fine`` lies inside one class of ``coarse``."""
    owner = {}
    for f, c in zip(np.asarray(fine).tolist(), np.asarray(coarse).tolist()):
        if owner.setdefault(f, c) != c:
            return False
    return True
