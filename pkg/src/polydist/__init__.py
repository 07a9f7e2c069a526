"""Exact-arithmetic tools for graphs of simple polytopes: distance gadgets, silos and rock extensions."""

from .errors import BudgetExceeded, InputError, InternalInvariantError, PolytopeError
from .polytope import HPolytope, PolytopeGraph, Vertex, build_graph, cube, diameter, distance

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "HPolytope",
    "InputError",
    "InternalInvariantError",
    "PolytopeError",
    "PolytopeGraph",
    "Vertex",
    "build_graph",
    "cube",
    "diameter",
    "distance",
]
