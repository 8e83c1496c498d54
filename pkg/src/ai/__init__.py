"""
Model code: shared numerics, graphs, component GNNs, collective learning and
the 1-WL expressiveness oracle.
"""
