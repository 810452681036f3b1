"""Subcubic graphs without eigenvalues in (-1, 1): constructions, exact gap
checks with certificates, line-graph machinery and exhaustive census."""

from .graph import Graph, GraphError, GraphWithPetals, Involution, Multigraph, RootedMultigraph
from .formats import from_graph6, to_graph6

__all__ = [
    "Graph",
    "GraphError",
    "GraphWithPetals",
    "Involution",
    "Multigraph",
    "RootedMultigraph",
    "from_graph6",
    "to_graph6",
]

__version__ = "0.1.0"
