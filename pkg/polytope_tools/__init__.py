"""
Polytope tools for Polydist

Exact constructions on simple polytopes: vertex enumeration and graph distances,
the knapsack gadget for Partition, truncations and silos, and rock extensions.
"""

from .config import DEFAULT_BUDGET, Budget, resolve_budget
from .errors import (
    BudgetError,
    InputError,
    InvariantViolation,
    PolytopeError,
)
from .polytope_core import (
    FeasibleBasis,
    HPolytope,
    PathResult,
    PolytopeGraph,
    build_graph,
    diameter,
    distance,
    enumerate_feasible_bases,
    is_simple,
    pivot_distance,
    pivot_neighbors,
    shortest_monotone_path,
    unit_cube,
)
from .knapsack_reduction import (
    PartitionInstance,
    build_Pb,
    brute_force_partition,
    decide_partition_via_distance,
    decide_partition_via_monotone_distance,
    diameter_instance,
)
from .silo_constructions import (
    cyclic_silo,
    diameter_reduction,
    silo,
    silo_graph,
    truncate,
    verify_reduction,
)
from .rock_extension import (
    InteriorBall,
    build_rock_extension,
    greedy_path_to_apex,
    path_between,
)

__all__ = [
    "DEFAULT_BUDGET",
    "Budget",
    "resolve_budget",
    "BudgetError",
    "InputError",
    "InvariantViolation",
    "PolytopeError",
    "FeasibleBasis",
    "HPolytope",
    "PathResult",
    "PolytopeGraph",
    "build_graph",
    "diameter",
    "distance",
    "enumerate_feasible_bases",
    "is_simple",
    "pivot_distance",
    "pivot_neighbors",
    "shortest_monotone_path",
    "unit_cube",
    "PartitionInstance",
    "build_Pb",
    "brute_force_partition",
    "decide_partition_via_distance",
    "decide_partition_via_monotone_distance",
    "diameter_instance",
    "cyclic_silo",
    "diameter_reduction",
    "silo",
    "silo_graph",
    "truncate",
    "verify_reduction",
    "InteriorBall",
    "build_rock_extension",
    "greedy_path_to_apex",
    "path_between",
]
