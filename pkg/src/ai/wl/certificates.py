"""
Small counterexample graphs that come with machine-checked certificates.

``thm2``: two groups of unlabeled nodes sharing one stable 1-WL color that no
automorphism relates, so any 1-WL-bounded model collapses them while label
sampling can tell them apart.

``prop2``: a node pair whose d-hop neighborhoods agree but whose 2d-hop
neighborhoods differ, so a d-layer model collapses them while sampled labels
of nearby nodes carry information from further away.
"""

import itertools
from typing import Dict, Iterator, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.ai.common import CertificationError, ParameterError
from src.ai.graph import Graph, UNLABELED, bfs_distances
from src.utils.logger import logger
from .isomorphism import MAX_BRUTE_FORCE_NODES, egonets_isomorphic, graphs_isomorphic
from .refinement import initial_colors, wl_refine


class SeparationCertificate(BaseModel):
    kind: Literal["thm2", "prop2"]
    num_nodes: int
    edges: List[Tuple[int, int]]
    features: List[List[float]]
    labels: List[int]
    num_classes: int
    group_a: List[int]
    group_b: List[int]
    shared_color: Optional[int] = None
    wl_rounds: Optional[int] = None
    automorphisms_checked: int = 0
    radius: Optional[int] = None
    egonet_witness: Optional[List[int]] = Field(
        default=None,
        description="Original ids the nodes of the first center's d-hop egonet map to",
    )
    distinguishing_nodes: Optional[Tuple[int, int]] = None

    def graph(self) -> Graph:
        return Graph.from_edges(
            self.num_nodes,
            self.edges,
            features=np.array(self.features, dtype=np.float64),
            labels=self.labels,
            num_classes=self.num_classes,
        )

    @property
    def pair(self) -> Tuple[int, int]:
        return self.group_a[0], self.group_b[0]

    def verify(self):
        """Re-check every certified fact; raises CertificationError on the first failure."""
        if self.kind == "thm2":
            _verify_thm2(self.graph(), self.group_a, self.group_b)
        else:
            u, v = self.pair
            _verify_prop2(self.graph(), u, v, self.radius, self.distinguishing_nodes)


def _verify_thm2(g: Graph, group_a: List[int], group_b: List[int]) -> Tuple[int, int, int]:
    coloring = wl_refine(g, initial_colors(g))
    members = group_a + group_b
    colors = set(coloring.colors[members].tolist())
    if len(colors) != 1:
        raise CertificationError(f"groups span {len(colors)} stable 1-WL colors, expected one")
    checked = 0
    for a, b in itertools.product(group_a, group_b):
        if graphs_isomorphic(g, g, anchors=(a, b)).isomorphic:
            raise CertificationError(f"an automorphism maps node {a} to node {b}")
        checked += 1
    return colors.pop(), coloring.rounds, checked


def make_thm2_graph() -> SeparationCertificate:
    """
    Two 4-cycles of unlabeled nodes (A = 0..3, B = 4..7) and two labeled hubs
    (8, 9). Adjacent A nodes share a hub; in B the nodes sharing a hub are
    opposite on the cycle. Every unlabeled node has two cycle neighbors and one
    hub, every hub four unlabeled neighbors, so 1-WL sees one color, yet A
    nodes lie on triangles and B nodes do not.
    """
    group_a, group_b = [0, 1, 2, 3], [4, 5, 6, 7]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4)]
    edges += [(0, 8), (1, 8), (2, 9), (3, 9), (4, 8), (6, 8), (5, 9), (7, 9)]
    features = [[1.0, 0.0]] * 8 + [[0.0, 1.0]] * 2
    labels = [UNLABELED] * 8 + [0, 0]
    g = Graph.from_edges(10, edges, features=np.array(features), labels=labels, num_classes=2)

    shared, rounds, checked = _verify_thm2(g, group_a, group_b)
    logger.info("Symmetric-groups graph certified", shared_color=shared, wl_rounds=rounds, checked=checked)
    return SeparationCertificate(
        kind="thm2",
        num_nodes=g.num_nodes,
        edges=g.edges(),
        features=g.features.tolist(),
        labels=g.labels.tolist(),
        num_classes=g.num_classes,
        group_a=group_a,
        group_b=group_b,
        shared_color=shared,
        wl_rounds=rounds,
        automorphisms_checked=checked,
    )


def _structure(g: Graph) -> Graph:
    """Same edges with constant features and no labels."""
    n = g.num_nodes
    return Graph.from_edges(n, g.edges(), features=np.ones((n, 1)), labels=[UNLABELED] * n, num_classes=g.num_classes)


def _degree_features(g: Graph) -> np.ndarray:
    degrees = np.asarray(g.degrees, dtype=np.int64)
    return np.eye(int(degrees.max()) + 1)[degrees]


def _path_with_pendants(length: int, pendants: Tuple[int, ...]) -> Graph:
    edges = [(i, i + 1) for i in range(length - 1)]
    edges += [(p, length + j) for j, p in enumerate(pendants)]
    return _structure(Graph.from_edges(length + len(pendants), edges, num_classes=2))


def _family(max_nodes: int) -> Iterator[Graph]:
    """Paths with pendant leaves, smallest first."""
    for length in range(3, max_nodes + 1):
        for count in range(0, min(2, max_nodes - length) + 1):
            for pendants in itertools.combinations(range(length), count):
                yield _path_with_pendants(length, pendants)


def _image_map(g: Graph, u: int, witness: Tuple[int, ...], d: int) -> Dict[int, int]:
    return dict(zip(sorted(bfs_distances(g, u, max_depth=d)), witness))


def _distinguishing_nodes(g: Graph, u: int, witness: Tuple[int, ...], d: int) -> Optional[Tuple[int, int]]:
    for a, image in _image_map(g, u, witness, d).items():
        if a == image:
            continue
        if not egonets_isomorphic(g, a, image, d, annotate_degree=True).isomorphic:
            return a, image
    return None


def _verify_prop2(g: Graph, u: int, v: int, d: int, distinguishing: Optional[Tuple[int, int]]) -> Tuple[int, ...]:
    bare = _structure(g)
    near = egonets_isomorphic(bare, u, v, d, annotate_degree=True)
    if not near.isomorphic:
        raise CertificationError(f"{d}-hop egonets of {u} and {v} are not isomorphic")
    if egonets_isomorphic(bare, u, v, 2 * d, annotate_degree=True).isomorphic:
        raise CertificationError(f"{2 * d}-hop egonets of {u} and {v} are isomorphic")
    if distinguishing is None:
        raise CertificationError(f"no node near {u} has a {d}-hop egonet differing from its image")

    a, b = distinguishing
    if _image_map(bare, u, near.witness, d).get(a) != b:
        raise CertificationError(f"node {b} is not the image of node {a} under the {d}-hop isomorphism")
    if egonets_isomorphic(bare, a, b, d, annotate_degree=True).isomorphic:
        raise CertificationError(f"{d}-hop egonets of {a} and its image {b} are isomorphic")
    if UNLABELED in (g.labels[a], g.labels[b]) or g.labels[a] == g.labels[b]:
        raise CertificationError(f"nodes {a} and {b} must carry two different labels")
    return near.witness


def make_prop2_graph(d: int) -> SeparationCertificate:
    """
    Search paths with pendant leaves for a certified pair (u, v).

    Every egonet below is compared with its center anchored and each node
    annotated with its full-graph degree:

    * the d-hop egonets of u and v are isomorphic;
    * their 2d-hop egonets are not;
    * some node a within d hops of u has a d-hop egonet that differs from the
      one of its image b under the d-hop isomorphism.

    The emitted graph carries one-hot degree features, so a d-layer model sees
    exactly the annotated egonets, and labels a and b with classes 0 and 1.
    Everything else stays unlabeled.
    """
    if d not in (1, 2):
        raise ParameterError(f"radius must be 1 or 2, got {d}")

    for g in _family(MAX_BRUTE_FORCE_NODES):
        for u, v in itertools.combinations(range(g.num_nodes), 2):
            if g.degrees[u] != g.degrees[v]:
                continue
            near = egonets_isomorphic(g, u, v, d, annotate_degree=True)
            if not near.isomorphic:
                continue
            if egonets_isomorphic(g, u, v, 2 * d, annotate_degree=True).isomorphic:
                continue
            distinguishing = _distinguishing_nodes(g, u, near.witness, d)
            if distinguishing is None:
                continue

            labels = np.full(g.num_nodes, UNLABELED)
            labels[list(distinguishing)] = [0, 1]
            certified = Graph.from_edges(
                g.num_nodes, g.edges(), features=_degree_features(g), labels=labels.tolist(), num_classes=2
            )
            _verify_prop2(certified, u, v, d, distinguishing)
            logger.info(
                "Radius-extension graph certified",
                radius=d,
                num_nodes=g.num_nodes,
                pair=(u, v),
                distinguishing=distinguishing,
            )
            return SeparationCertificate(
                kind="prop2",
                num_nodes=certified.num_nodes,
                edges=certified.edges(),
                features=certified.features.tolist(),
                labels=certified.labels.tolist(),
                num_classes=certified.num_classes,
                group_a=[u],
                group_b=[v],
                radius=d,
                egonet_witness=list(near.witness),
                distinguishing_nodes=distinguishing,
            )

    raise CertificationError(f"no certified pair found for radius {d} within {MAX_BRUTE_FORCE_NODES} nodes")
