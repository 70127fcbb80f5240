"""Mutual-visibility and general position sets in Sierpiński graphs."""

from .errors import ConstructionError, EnumerationLimitError, ParameterError, SierpinskiError, SizeLimitError
from .graph_core import (
    SierpinskiGraph,
    Vertex,
    VertexSet,
    build_graph,
    complement,
    is_convex,
    simplicial_vertices,
    subgraph_vertices,
)
from .metric import GeodesicOracle, build_oracle
from .solvers import SolverOptions, SolverReport, enumerate_max_sets, greedy_lower_bound, max_set, orbit_count
from .variants import Variant, Witness, check_set, is_positionable_pair, is_visible_pair, witness_failure

__all__ = [
    "ConstructionError", "EnumerationLimitError", "GeodesicOracle", "ParameterError", "SierpinskiError",
    "SierpinskiGraph", "SizeLimitError", "SolverOptions", "SolverReport", "Variant", "Vertex", "VertexSet",
    "Witness", "build_graph", "build_oracle", "check_set", "complement", "enumerate_max_sets",
    "greedy_lower_bound", "is_convex", "is_positionable_pair", "is_visible_pair", "max_set", "orbit_count",
    "simplicial_vertices", "subgraph_vertices", "witness_failure",
]
