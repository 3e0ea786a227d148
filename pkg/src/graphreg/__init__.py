"""Regularity of graph C*-algebras decided from the graph.

Condition (K), distinct detours, hereditary/saturated ideal lattices,
a symbolic Leavitt path algebra, in-flow matrix-unit constructions and
Drinen-Tomforde desingularization.
"""

from .errors import GraphFormatError, GraphRegError
from .graph import OMEGA, Edge, Graph, Path, WalkClass, parse_graph
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Edge",
    "Graph",
    "GraphFormatError",
    "GraphRegError",
    "OMEGA",
    "Path",
    "WalkClass",
    "parse_graph",
]
