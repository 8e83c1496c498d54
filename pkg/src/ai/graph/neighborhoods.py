"""
Breadth-first distances and d-hop egonets.
"""

from collections import deque
from typing import Dict, Optional

import numpy as np

from src.ai.common import ParameterError
from .graph import Graph


def bfs_distances(g: Graph, source: int, max_depth: Optional[int] = None) -> Dict[int, int]:
    """Hop distance from ``source`` to every node reachable within ``max_depth`` hops."""
    distances = {int(source): 0}
    queue = deque([int(source)])
    while queue:
        u = queue.popleft()
        if max_depth is not None and distances[u] >= max_depth:
            continue
        for w in g.neighbors(u).tolist():
            if w not in distances:
                distances[w] = distances[u] + 1
                queue.append(w)
    return distances


def d_hop_egonet(g: Graph, v: int, d: int) -> Graph:
    """Induced subgraph on all nodes within distance d of ``v``; ``v`` is recorded as the center."""
    if not (0 <= v < g.num_nodes):
        raise ParameterError(f"node {v} outside [0, {g.num_nodes})")
    if d < 0:
        raise ParameterError(f"radius must be >= 0, got {d}")
    nodes = np.array(sorted(bfs_distances(g, v, max_depth=d)), dtype=np.int64)
    return g.induced_subgraph(nodes, center=v)
