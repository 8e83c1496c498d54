"""
Immutable graph model: symmetric CSR adjacency, dense features, per-node labels.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, Field, model_validator

from src.ai.common import InconsistentGraphError, Matrix

UNLABELED = -1


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected simple graph with node features and (partially known) labels.

    ``labels[v] == UNLABELED`` marks a node whose class is unknown. Which of
    the known labels are observed as model input is decided by a ``SplitSpec``,
    not by the graph.
    """

    num_nodes: int
    csr_offsets: np.ndarray
    csr_targets: np.ndarray
    features: Matrix
    labels: np.ndarray
    num_classes: int
    center: Optional[int] = None
    source_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.num_nodes
        offsets = np.asarray(self.csr_offsets, dtype=np.int64)
        targets = np.asarray(self.csr_targets, dtype=np.int64)
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "csr_offsets", offsets)
        object.__setattr__(self, "csr_targets", targets)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

        if offsets.shape != (n + 1,) or offsets[0] != 0 or offsets[-1] != targets.shape[0]:
            raise InconsistentGraphError(f"csr offsets malformed for {n} nodes")
        if np.any(np.diff(offsets) < 0):
            raise InconsistentGraphError("csr offsets must be monotone")
        if targets.size and (targets.min() < 0 or targets.max() >= n):
            raise InconsistentGraphError("csr targets out of range")
        if features.ndim != 2 or features.shape[0] != n:
            raise InconsistentGraphError(f"feature matrix has shape {features.shape}, expected {n} rows")
        if labels.shape != (n,):
            raise InconsistentGraphError(f"label vector has shape {labels.shape}, expected ({n},)")
        if self.num_classes < 1:
            raise InconsistentGraphError("num_classes must be >= 1")
        known = labels[labels != UNLABELED]
        if known.size and (known.min() < 0 or known.max() >= self.num_classes):
            raise InconsistentGraphError(f"labels must lie in [0, {self.num_classes}) or be {UNLABELED}")

        rows = np.repeat(np.arange(n), np.diff(offsets))
        if np.any(rows == targets):
            raise InconsistentGraphError("self-loops are not stored")
        adjacency = sp.csr_matrix((np.ones(targets.shape[0]), (rows, targets)), shape=(n, n))
        if adjacency.nnz and adjacency.data.max() > 1:
            raise InconsistentGraphError("duplicate edges are not stored")
        if (adjacency != adjacency.T).nnz:
            raise InconsistentGraphError("adjacency must be symmetric")

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[Tuple[int, int]],
        features: Optional[Matrix] = None,
        labels: Optional[Sequence[int]] = None,
        num_classes: Optional[int] = None,
        **kwargs,
    ) -> "Graph":
        """Build a graph from an edge list; edges are symmetrized, deduplicated and self-loops dropped."""
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= num_nodes):
            raise InconsistentGraphError(f"edge endpoint outside [0, {num_nodes})")
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        both = np.concatenate([pairs, pairs[:, ::-1]], axis=0)
        both = np.unique(both, axis=0) if both.size else both

        offsets = np.zeros(num_nodes + 1, dtype=np.int64)
        if both.size:
            np.add.at(offsets, both[:, 0] + 1, 1)
        offsets = np.cumsum(offsets)
        targets = both[:, 1] if both.size else np.zeros(0, dtype=np.int64)

        if features is None:
            features = np.ones((num_nodes, 1))
        if labels is None:
            labels = np.full(num_nodes, UNLABELED)
        labels = np.asarray(labels, dtype=np.int64)
        if num_classes is None:
            num_classes = int(labels.max()) + 1 if np.any(labels != UNLABELED) else 1

        return cls(
            num_nodes=num_nodes,
            csr_offsets=offsets,
            csr_targets=targets,
            features=features,
            labels=labels,
            num_classes=num_classes,
            **kwargs,
        )

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def num_edges(self) -> int:
        """Number of undirected edges."""
        return self.csr_targets.shape[0] // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.csr_offsets)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        rows = np.repeat(np.arange(self.num_nodes), self.degrees)
        return sp.csr_matrix(
            (np.ones(self.csr_targets.shape[0]), (rows, self.csr_targets)),
            shape=(self.num_nodes, self.num_nodes),
        )

    @cached_property
    def normalized_adjacency(self) -> sp.csr_matrix:
        """D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I."""
        d_inv_sqrt = 1.0 / np.sqrt(self.degrees + 1.0)
        with_loops = self.adjacency + sp.identity(self.num_nodes, format="csr")
        scale = sp.diags(d_inv_sqrt)
        return sp.csr_matrix(scale @ with_loops @ scale)

    def neighbors(self, v: int) -> np.ndarray:
        return self.csr_targets[self.csr_offsets[v]:self.csr_offsets[v + 1]]

    def edges(self) -> List[Tuple[int, int]]:
        """Undirected edges as (u, v) pairs with u < v."""
        rows = np.repeat(np.arange(self.num_nodes), self.degrees)
        keep = rows < self.csr_targets
        return list(zip(rows[keep].tolist(), self.csr_targets[keep].tolist()))

    @property
    def labeled_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.labels != UNLABELED)

    def label_onehot(self, observed: Optional[Iterable[int]] = None) -> Matrix:
        """One-hot label matrix; rows outside ``observed`` (default: every labeled node) are zero."""
        onehot = np.zeros((self.num_nodes, self.num_classes))
        nodes = self.labeled_nodes if observed is None else np.asarray(list(observed), dtype=np.int64)
        if nodes.size:
            classes = self.labels[nodes]
            if np.any(classes == UNLABELED):
                raise InconsistentGraphError("observed set contains unlabeled nodes")
            onehot[nodes, classes] = 1.0
        return onehot

    def induced_subgraph(self, nodes: Sequence[int], center: Optional[int] = None) -> "Graph":
        """Subgraph on ``nodes`` (kept in the given order); ``center`` is an original node id."""
        nodes = np.asarray(nodes, dtype=np.int64)
        position = {int(v): i for i, v in enumerate(nodes)}
        sub_edges = [
            (position[u], position[v])
            for u, v in self.edges()
            if u in position and v in position
        ]
        return Graph.from_edges(
            num_nodes=len(nodes),
            edges=sub_edges,
            features=self.features[nodes],
            labels=self.labels[nodes],
            num_classes=self.num_classes,
            center=position[int(center)] if center is not None else None,
            source_ids=nodes,
        )

    def permute(self, perm: Sequence[int]) -> "Graph":
        """Relabel nodes so that old node ``v`` becomes ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inverse = np.empty_like(perm)
        inverse[perm] = np.arange(self.num_nodes)
        return Graph.from_edges(
            num_nodes=self.num_nodes,
            edges=[(int(perm[u]), int(perm[v])) for u, v in self.edges()],
            features=self.features[inverse],
            labels=self.labels[inverse],
            num_classes=self.num_classes,
            center=int(perm[self.center]) if self.center is not None else None,
        )


class SplitSpec(BaseModel):
    """Disjoint node sets of one trial."""

    train_labeled: List[int]
    validation: List[int] = Field(default_factory=list)
    test_eval: List[int] = Field(default_factory=list)
    test_labeled: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_disjoint(self):
        sets = {
            "train_labeled": self.train_labeled,
            "validation": self.validation,
            "test_eval": self.test_eval,
            "test_labeled": self.test_labeled,
        }
        for name, nodes in sets.items():
            if len(set(nodes)) != len(nodes):
                raise ValueError(f"{name} contains duplicate nodes")
        names = list(sets)
        for i, first in enumerate(names):
            for second in names[i + 1:]:
                overlap = set(sets[first]) & set(sets[second])
                if overlap:
                    raise ValueError(f"{first} and {second} overlap on {sorted(overlap)[:5]}")
        return self

    def check_against(self, g: Graph):
        """Every node index must exist and every labeled set must carry known labels."""
        for name in ("train_labeled", "validation", "test_eval", "test_labeled"):
            nodes = np.asarray(getattr(self, name), dtype=np.int64)
            if nodes.size and (nodes.min() < 0 or nodes.max() >= g.num_nodes):
                raise InconsistentGraphError(f"split set {name} references nodes outside the graph")
        for name in ("train_labeled", "test_labeled"):
            nodes = np.asarray(getattr(self, name), dtype=np.int64)
            if nodes.size and np.any(g.labels[nodes] == UNLABELED):
                raise InconsistentGraphError(f"split set {name} contains unlabeled nodes")
