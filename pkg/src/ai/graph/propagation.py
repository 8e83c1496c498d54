"""
Propagation operators of the two component models.

Both operators are sparse and linear in ``h``; each returns what its backward
pass needs (the operator itself is symmetric for GCN, the sampled mean matrix
for SAGE).
"""

from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from src.ai.common import DimensionError, Matrix, ParameterError
from .graph import Graph


def sym_norm_propagate(g: Graph, h: Matrix) -> Matrix:
    """Return D^-1/2 (A + I) D^-1/2 h using the graph's sparse operator."""
    if h.ndim != 2 or h.shape[0] != g.num_nodes:
        raise DimensionError("sym_norm_propagate", (g.num_nodes, g.num_nodes), h.shape)
    return np.asarray(g.normalized_adjacency @ h)


def sample_neighbors(
    g: Graph,
    sample_size: int,
    rng: Optional[np.random.Generator],
) -> sp.csr_matrix:
    """
    Draw, per node, min(deg, sample_size) neighbors uniformly without replacement.

    The result is the row-stochastic n x n matrix S with S[v, u] = 1/k for each
    of the k sampled neighbors u of v; isolated nodes get an empty row. With
    ``rng=None`` every neighbor is used.
    """
    if sample_size < 1:
        raise ParameterError(f"sample_size must be >= 1, got {sample_size}")

    rows, cols, vals = [], [], []
    for v in range(g.num_nodes):
        nbrs = g.neighbors(v)
        if nbrs.size == 0:
            continue
        if rng is not None and nbrs.size > sample_size:
            nbrs = rng.choice(nbrs, size=sample_size, replace=False)
        rows.append(np.full(nbrs.size, v))
        cols.append(nbrs)
        vals.append(np.full(nbrs.size, 1.0 / nbrs.size))

    if not rows:
        return sp.csr_matrix((g.num_nodes, g.num_nodes))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(g.num_nodes, g.num_nodes),
    )


def mean_neighbor_aggregate(
    g: Graph,
    h: Matrix,
    sample_size: int,
    rng: Optional[np.random.Generator],
) -> Tuple[Matrix, sp.csr_matrix]:
    """Mean of sampled neighbor rows of ``h``; returns the output and the sampling matrix for backward."""
    if h.ndim != 2 or h.shape[0] != g.num_nodes:
        raise DimensionError("mean_neighbor_aggregate", (g.num_nodes, g.num_nodes), h.shape)
    sampler = sample_neighbors(g, sample_size, rng)
    return np.asarray(sampler @ h), sampler
