"""
Expressiveness oracle: 1-WL refinement, small-graph isomorphism and certified
counterexample graphs.
"""

from .refinement import (
    Coloring,
    dense_ids,
    initial_colors,
    is_refinement,
    wl_node_equivalence,
    wl_refine,
)
from .isomorphism import MAX_BRUTE_FORCE_NODES, IsomorphismResult, egonets_isomorphic, graphs_isomorphic
from .certificates import SeparationCertificate, make_prop2_graph, make_thm2_graph

__all__ = [
    "Coloring",
    "dense_ids",
    "initial_colors",
    "is_refinement",
    "wl_node_equivalence",
    "wl_refine",
    "MAX_BRUTE_FORCE_NODES",
    "IsomorphismResult",
    "egonets_isomorphic",
    "graphs_isomorphic",
    "SeparationCertificate",
    "make_prop2_graph",
    "make_thm2_graph",
]
