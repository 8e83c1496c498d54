"""
Graph data model, propagation operators, sampling and text I/O.
"""

from .graph import Graph, SplitSpec, UNLABELED
from .propagation import sym_norm_propagate, sample_neighbors, mean_neighbor_aggregate
from .neighborhoods import bfs_distances, d_hop_egonet
from .sampling import connected_component_sample, make_split
from .io import load_graph, save_graph, load_cora, save_split, load_split

__all__ = [
    "Graph",
    "SplitSpec",
    "UNLABELED",
    "sym_norm_propagate",
    "sample_neighbors",
    "mean_neighbor_aggregate",
    "bfs_distances",
    "d_hop_egonet",
    "connected_component_sample",
    "make_split",
    "load_graph",
    "save_graph",
    "load_cora",
    "save_split",
    "load_split",
]
