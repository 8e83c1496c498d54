"""
Connected-set sampling and train/validation/test split generation.
"""

from typing import Optional, Set

import numpy as np

from src.ai.common import ParameterError, SamplingError
from src.utils.logger import logger
from .graph import Graph, SplitSpec, UNLABELED

TEST_LABEL_MODES = ("component", "random")


def connected_component_sample(
    g: Graph,
    target_size: int,
    rng: np.random.Generator,
    eligible: Optional[np.ndarray] = None,
    max_retries: int = 50,
) -> np.ndarray:
    """
    Grow a connected node set of ``target_size`` from a random start.

    Growth is breadth-first with the neighbors of each expanded node visited
    in random order. Only ``eligible`` nodes (boolean mask, default all) may
    join. A start whose component is too small is retried from another start.

    Returns:
        Sorted array of node ids inducing a connected subgraph
    """
    if target_size < 1:
        raise ParameterError(f"target_size must be >= 1, got {target_size}")
    allowed = np.ones(g.num_nodes, dtype=bool) if eligible is None else np.asarray(eligible, dtype=bool)
    candidates = np.flatnonzero(allowed)
    if candidates.size < target_size:
        raise SamplingError(f"only {candidates.size} eligible nodes for a connected set of {target_size}")

    for attempt in range(max_retries):
        start = int(rng.choice(candidates))
        chosen = [start]
        seen: Set[int] = {start}
        head = 0
        while head < len(chosen) and len(chosen) < target_size:
            u = chosen[head]
            head += 1
            nbrs = g.neighbors(u)
            for w in rng.permutation(nbrs).tolist():
                if w not in seen and allowed[w]:
                    seen.add(w)
                    chosen.append(w)
                    if len(chosen) == target_size:
                        break
        if len(chosen) == target_size:
            return np.array(sorted(chosen), dtype=np.int64)

    raise SamplingError(
        f"no connected set of {target_size} nodes reached after {max_retries} random starts"
    )


def make_split(
    g: Graph,
    train_size: int,
    test_size: int,
    rng: np.random.Generator,
    val_size: Optional[int] = None,
    test_label_rate: float = 0.0,
    test_label_mode: str = "component",
) -> SplitSpec:
    """
    Draw one trial's split over labeled nodes.

    ``train_labeled`` is a connected sample; ``test_eval`` is drawn from the
    remaining labeled nodes; ``test_labeled`` is sized so that it makes up
    ``test_label_rate`` of the test region, either as another connected
    sample (``component``) or uniformly (``random``); ``validation`` (default
    size: the test size) comes from what is left.
    """
    if test_label_mode not in TEST_LABEL_MODES:
        raise ParameterError(f"test_label_mode must be one of {TEST_LABEL_MODES}, got {test_label_mode!r}")
    if not (0.0 <= test_label_rate < 1.0):
        raise ParameterError(f"test_label_rate must lie in [0, 1), got {test_label_rate}")
    val_size = test_size if val_size is None else val_size
    test_labeled_size = int(round(test_label_rate / (1.0 - test_label_rate) * test_size))

    available = g.labels != UNLABELED
    needed = train_size + test_size + val_size + test_labeled_size
    if available.sum() < needed:
        raise SamplingError(f"split needs {needed} labeled nodes, graph has {int(available.sum())}")

    train = connected_component_sample(g, train_size, rng, eligible=available)
    available[train] = False

    test_labeled = np.zeros(0, dtype=np.int64)
    if test_labeled_size and test_label_mode == "component":
        test_labeled = connected_component_sample(g, test_labeled_size, rng, eligible=available)
        available[test_labeled] = False

    remaining = rng.permutation(np.flatnonzero(available))
    test_eval = np.sort(remaining[:test_size])
    remaining = remaining[test_size:]
    if test_labeled_size and test_label_mode == "random":
        test_labeled = np.sort(remaining[:test_labeled_size])
        remaining = remaining[test_labeled_size:]
    validation = np.sort(remaining[:val_size])

    split = SplitSpec(
        train_labeled=train.tolist(),
        validation=validation.tolist(),
        test_eval=test_eval.tolist(),
        test_labeled=test_labeled.tolist(),
    )
    logger.debug(
        "Split generated",
        train=len(split.train_labeled),
        validation=len(split.validation),
        test_eval=len(split.test_eval),
        test_labeled=len(split.test_labeled),
        test_label_mode=test_label_mode,
    )
    return split
