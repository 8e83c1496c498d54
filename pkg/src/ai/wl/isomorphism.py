"""
Exact isomorphism search for small graphs by backtracking over node mappings.
"""

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from src.ai.common import SizeBoundError
from src.ai.graph import Graph, d_hop_egonet

MAX_BRUTE_FORCE_NODES = 12


@dataclass(frozen=True)
class IsomorphismResult:
    isomorphic: bool
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.isomorphic


def _signatures(g: Graph, attrs: Optional[Sequence[Hashable]]) -> List[Hashable]:
    return [
        (
            tuple(g.features[v].tolist()),
            int(g.labels[v]),
            int(g.degrees[v]),
            attrs[v] if attrs is not None else None,
        )
        for v in range(g.num_nodes)
    ]


def graphs_isomorphic(
    a: Graph,
    b: Graph,
    anchors: Optional[Tuple[int, int]] = None,
    attrs_a: Optional[Sequence[Hashable]] = None,
    attrs_b: Optional[Sequence[Hashable]] = None,
) -> IsomorphismResult:
    """
    Decide whether ``a`` and ``b`` are isomorphic, respecting features, labels,
    optional extra node attributes and an optional anchor pair.

    Returns:
        IsomorphismResult whose witness maps node ``i`` of ``a`` to ``witness[i]`` of ``b``
    """
    for g in (a, b):
        if g.num_nodes > MAX_BRUTE_FORCE_NODES:
            raise SizeBoundError(
                f"brute-force isomorphism supports at most {MAX_BRUTE_FORCE_NODES} nodes, got {g.num_nodes}"
            )
    if a.num_nodes != b.num_nodes or a.num_edges != b.num_edges:
        return IsomorphismResult(False)

    sig_a, sig_b = _signatures(a, attrs_a), _signatures(b, attrs_b)
    if sorted(map(repr, sig_a)) != sorted(map(repr, sig_b)):
        return IsomorphismResult(False)
    if anchors is not None and sig_a[anchors[0]] != sig_b[anchors[1]]:
        return IsomorphismResult(False)

    adj_a = a.adjacency.toarray() > 0
    adj_b = b.adjacency.toarray() > 0
    n = a.num_nodes

    # Anchor first, then most constrained (highest degree) nodes
    order = sorted(range(n), key=lambda v: (-int(a.degrees[v]), v))
    if anchors is not None:
        order.remove(anchors[0])
        order.insert(0, anchors[0])

    mapping: Dict[int, int] = {}
    used = np.zeros(n, dtype=bool)

    def extend(position: int) -> bool:
        if position == n:
            return True
        u = order[position]
        candidates = [anchors[1]] if anchors is not None and position == 0 else range(n)
        for w in candidates:
            if used[w] or sig_a[u] != sig_b[w]:
                continue
            if any(adj_a[u, x] != adj_b[w, y] for x, y in mapping.items()):
                continue
            mapping[u] = w
            used[w] = True
            if extend(position + 1):
                return True
            del mapping[u]
            used[w] = False
        return False

    if extend(0):
        return IsomorphismResult(True, tuple(mapping[v] for v in range(n)))
    return IsomorphismResult(False)


def egonets_isomorphic(g: Graph, u: int, v: int, d: int, annotate_degree: bool = False) -> IsomorphismResult:
    """
    Compare the d-hop egonets of ``u`` and ``v`` with the centers anchored.

    With ``annotate_degree`` every egonet node also carries its degree in the
    full graph. The witness is expressed in original node ids of ``g``: it
    maps ``ego_u.source_ids[i]`` to ``witness[i]``.
    """
    ego_u, ego_v = d_hop_egonet(g, u, d), d_hop_egonet(g, v, d)
    attrs_u = g.degrees[ego_u.source_ids].tolist() if annotate_degree else None
    attrs_v = g.degrees[ego_v.source_ids].tolist() if annotate_degree else None
    result = graphs_isomorphic(ego_u, ego_v, anchors=(ego_u.center, ego_v.center), attrs_a=attrs_u, attrs_b=attrs_v)
    if not result.isomorphic:
        return result
    return IsomorphismResult(True, tuple(int(ego_v.source_ids[i]) for i in result.witness))
