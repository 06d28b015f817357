"""Exact facet-class enumeration for Bell and cut polytopes."""

from .exact import DimensionError, InvalidInequalityError
from .generators import BellScenario, MultipartiteGraph, bell_polytope, cut_polytope, parse_parts
from .polytope import Face, Inequality, PolytopeError, VPolytope
from .search import ClassStore, SearchConfig, run_search
from .symmetry import PermGroup, canonical_set

__all__ = [
    "BellScenario",
    "ClassStore",
    "DimensionError",
    "Face",
    "Inequality",
    "InvalidInequalityError",
    "MultipartiteGraph",
    "PermGroup",
    "PolytopeError",
    "SearchConfig",
    "VPolytope",
    "bell_polytope",
    "canonical_set",
    "cut_polytope",
    "parse_parts",
    "run_search",
]
