"""
Stochastic-block benchmark graphs whose labels follow the communities.

``homophily`` is ``p_in / (p_in + p_out)``: 0.5 means no community structure,
1.0 means no edges across communities. Edge probabilities are scaled so the
expected average degree is ``avg_degree``.
"""

from typing import Optional, Tuple

import networkx as nx
import numpy as np

from src.ai.common import ParameterError
from src.ai.graph import Graph
from src.utils.logger import logger


def community_sizes(n: int, communities: int, imbalance: float = 1.0) -> np.ndarray:
    """Sizes proportional to ``imbalance ** -c``; they sum to ``n``, largest first."""
    weights = imbalance ** -np.arange(communities, dtype=np.float64)
    sizes = np.floor(n * weights / weights.sum()).astype(np.int64)
    sizes[: n - sizes.sum()] += 1
    return sizes


def block_probabilities(
    sizes: np.ndarray,
    homophily: float,
    avg_degree: float,
) -> np.ndarray:
    """Block edge-probability matrix with ``p_in`` on the diagonal and ``p_out`` elsewhere."""
    n = int(sizes.sum())
    share = sizes / n
    intra = float((share * (sizes - 1)).sum())
    inter = float((share * (n - sizes)).sum())
    scale = avg_degree / (homophily * intra + (1.0 - homophily) * inter)
    p_in, p_out = homophily * scale, (1.0 - homophily) * scale
    if p_in > 1.0 or p_out > 1.0:
        raise ParameterError(f"avg_degree {avg_degree} needs edge probabilities above 1")
    k = sizes.size
    return np.where(np.eye(k, dtype=bool), p_in, p_out)


def synth_homophily(
    n: int,
    C: int,
    communities: Optional[int],
    homophily: float,
    feature_noise: Optional[float],
    rng: np.random.Generator,
    avg_degree: float = 10.0,
    feature_dim: int = 16,
    imbalance: float = 1.0,
) -> Graph:
    """
    Generate a labeled stochastic-block graph.

    Args:
        n: Node count
        C: Class count; community c carries label ``c % C``
        communities: Community count (defaults to ``C``)
        homophily: p_in / (p_in + p_out), in [0.5, 1]
        feature_noise: Standard deviation of Gaussian noise added to the
            class-mean features; None gives pure-noise (uninformative) features
        rng: Random generator
        avg_degree: Expected average degree
        feature_dim: Feature width
        imbalance: Ratio between consecutive community sizes (1 = balanced)

    Returns:
        Graph with every node labeled
    """
    communities = C if communities is None else communities
    if communities < C:
        raise ParameterError(f"need at least {C} communities for {C} classes, got {communities}")
    if not (0.5 <= homophily <= 1.0):
        raise ParameterError(f"homophily must lie in [0.5, 1], got {homophily}")
    if imbalance < 1.0:
        raise ParameterError(f"imbalance must be >= 1, got {imbalance}")

    sizes = community_sizes(n, communities, imbalance)
    probs = block_probabilities(sizes, homophily, avg_degree)
    nx_graph = nx.stochastic_block_model(sizes.tolist(), probs.tolist(), seed=int(rng.integers(2 ** 31)))

    blocks = np.repeat(np.arange(communities), sizes)
    labels = blocks % C
    if feature_noise is None:
        features = rng.standard_normal((n, feature_dim))
    else:
        means = rng.standard_normal((C, feature_dim))
        features = means[labels] + feature_noise * rng.standard_normal((n, feature_dim))

    g = Graph.from_edges(n, nx_graph.edges(), features=features, labels=labels, num_classes=C)
    expected_edges, edge_sd = expected_edge_count(sizes, probs)
    logger.info(
        "Synthetic graph generated",
        num_nodes=n,
        num_edges=g.num_edges,
        expected_edges=round(expected_edges, 1),
        edge_sd=round(edge_sd, 1),
        num_classes=C,
        communities=communities,
        homophily=homophily,
        imbalance=imbalance,
    )
    return g


def expected_edge_count(sizes: np.ndarray, probs: np.ndarray) -> Tuple[float, float]:
    """Mean and standard deviation of the SBM edge count."""
    pairs = np.outer(sizes, sizes).astype(np.float64)
    np.fill_diagonal(pairs, sizes * (sizes - 1) / 2.0)
    pairs = np.triu(pairs)
    mean = float((pairs * probs).sum())
    var = float((pairs * probs * (1.0 - probs)).sum())
    return mean, float(np.sqrt(var))
