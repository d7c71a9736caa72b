"""
Knapsack reduction module for Polydist

This module builds the knapsack polytope P_b of a Partition instance b and
provides:
1. A closed-form model of its vertices (cube corners and sliced cube edges)
   and of its edges
2. Decision procedures that answer Partition through a graph distance and
   through a monotone path length on P_b
3. A brute-force subset-sum oracle and seeded instance generators for checks
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .config import Budget, resolve_budget
from .errors import BudgetExceeded, MalformedInput, NonPositiveWeight, OddSum, RecordInconsistent
from .exact_linalg import ONE, ZERO, Fraction, RatVector, dot
from .polytope_core import (
    HPolytope,
    PathResult,
    PolytopeGraph,
    build_graph,
    distance,
    objective_values,
    shortest_monotone_path,
    unit_cube,
)
from .silo_constructions import ReductionOutput, diameter_reduction

logger = logging.getLogger(__name__)

KNAPSACK_LABEL = "ks"


@dataclass(frozen=True)
class PartitionInstance:
    """Positive integer weights b_1..b_d with an even sum"""

    weights: Tuple[int, ...]

    def __post_init__(self):
        if not self.weights:
            raise MalformedInput("a Partition instance needs at least one weight")
        for weight in self.weights:
            if isinstance(weight, bool) or not isinstance(weight, int):
                raise MalformedInput(f"weight {weight!r} is not an integer")
            if weight <= 0:
                raise NonPositiveWeight(f"weight {weight} is not positive", weights=list(self.weights))
        if sum(self.weights) % 2:
            raise OddSum(f"weights sum to {sum(self.weights)}, which is odd", weights=list(self.weights))

    @classmethod
    def from_string(cls, text: str) -> "PartitionInstance":
        """Parse "1,1,4" style input"""
        try:
            weights = tuple(int(part) for part in text.split(",") if part.strip())
        except ValueError:
            raise MalformedInput(f"cannot parse weights {text!r}; expected integers like 1,1,4") from None
        return cls(weights)

    @property
    def d(self) -> int:
        return len(self.weights)

    @property
    def beta(self) -> int:
        return sum(self.weights) // 2

    @property
    def dim(self) -> int:
        return self.d + 2

    @property
    def threshold(self) -> int:
        """A partition exists iff the endpoint distance is at most d+1"""
        return self.d + 1


@dataclass(frozen=True)
class CubeVertex:
    """The cube corner e_S; S uses 1-based coordinates"""

    subset: FrozenSet[int]

    def __str__(self) -> str:
        return "{" + ",".join(map(str, sorted(self.subset))) + "}"


@dataclass(frozen=True)
class SlicedVertex:
    """Where the knapsack hyperplane cuts the cube edge from e_S to e_{S+k}"""

    subset: FrozenSet[int]
    k: int

    def __str__(self) -> str:
        return "({" + ",".join(map(str, sorted(self.subset))) + "}," + str(self.k) + ")"


KnapsackVertex = Union[CubeVertex, SlicedVertex]


@dataclass(frozen=True)
class MonotoneObjective:
    c: RatVector
    epsilon: Fraction


@dataclass(frozen=True)
class PartitionDecision:
    """Outcome of one distance-based or monotone-path-based decision"""

    instance: PartitionInstance
    length: Optional[int]
    path: Optional[PathResult]
    start: int
    target: int
    graph: PolytopeGraph = field(repr=False, compare=False)

    @property
    def threshold(self) -> int:
        return self.instance.threshold

    @property
    def answer(self) -> bool:
        return self.length is not None and self.length <= self.threshold


def knapsack_weights(inst: PartitionInstance) -> RatVector:
    """w = (b_1, ..., b_d, -beta, beta + 1/2)"""
    beta = Fraction(inst.beta)
    return tuple(Fraction(b) for b in inst.weights) + (-beta, beta + Fraction(1, 2))


def knapsack_offset(inst: PartitionInstance) -> Fraction:
    return Fraction(inst.beta) + Fraction(1, 4)


def build_Pb(inst: PartitionInstance) -> HPolytope:
    """
    The unit cube in dimension d+2 cut by w.x <= beta + 1/4

    Rows are lo:1..lo:d+2, hi:1..hi:d+2, then "ks".
    """
    P = unit_cube(inst.dim).add_row(knapsack_weights(inst), knapsack_offset(inst), KNAPSACK_LABEL)
    logger.debug("Built P_b for b=%s: %d rows in dimension %d", inst.weights, P.num_rows, P.dim)
    return P


def _weight_of(w: RatVector, subset: Iterable[int]) -> Fraction:
    return sum((w[i - 1] for i in subset), ZERO)


def combinatorial_vertices(inst: PartitionInstance) -> List[KnapsackVertex]:
    """
    All vertices of P_b from the closed-form description

    Cube(S) is a vertex when w(S) <= beta. Sliced(S, k) is a vertex when
    beta + 1/4 lies strictly between w(S) and w(S + k).
    """
    w = knapsack_weights(inst)
    t = knapsack_offset(inst)
    n = inst.dim
    vertices: List[KnapsackVertex] = []
    for size in range(n + 1):
        for chosen in combinations(range(1, n + 1), size):
            subset = frozenset(chosen)
            total = _weight_of(w, subset)
            if total <= inst.beta:
                vertices.append(CubeVertex(subset))
            for k in range(1, n + 1):
                if k in subset:
                    continue
                extended = total + w[k - 1]
                if total < t < extended or extended < t < total:
                    vertices.append(SlicedVertex(subset, k))
    return vertices


def vertex_point(inst: PartitionInstance, vertex: KnapsackVertex) -> RatVector:
    n = inst.dim
    point = [ONE if i + 1 in vertex.subset else ZERO for i in range(n)]
    if isinstance(vertex, SlicedVertex):
        w = knapsack_weights(inst)
        point[vertex.k - 1] = (knapsack_offset(inst) - _weight_of(w, vertex.subset)) / w[vertex.k - 1]
    return tuple(point)


def vertex_basis_labels(inst: PartitionInstance, vertex: KnapsackVertex) -> FrozenSet[str]:
    """The d+2 rows tight at the vertex"""
    labels = set()
    for i in range(1, inst.dim + 1):
        if i in vertex.subset:
            labels.add(f"hi:{i}")
        elif not (isinstance(vertex, SlicedVertex) and vertex.k == i):
            labels.add(f"lo:{i}")
    if isinstance(vertex, SlicedVertex):
        labels.add(KNAPSACK_LABEL)
    return frozenset(labels)


def classify_basis(labels: Iterable[str]) -> KnapsackVertex:
    """Inverse of vertex_basis_labels"""
    labels = set(labels)
    subset = frozenset(int(label[3:]) for label in labels if label.startswith("hi:"))
    if KNAPSACK_LABEL not in labels:
        return CubeVertex(subset)
    touched = {int(label[3:]) for label in labels if label[:3] in ("lo:", "hi:")}
    free = [i for i in range(1, len(labels) + 1) if i not in touched]
    if len(free) != 1:
        raise MalformedInput(f"{sorted(labels)} is not a knapsack vertex basis")
    return SlicedVertex(subset, free[0])


def _sliced_pair_adjacent(u: SlicedVertex, v: SlicedVertex) -> bool:
    S, i = u.subset, u.k
    T, j = v.subset, v.k
    # (c) two edges leaving the same corner
    if S == T and i != j:
        return True
    # (d) consecutive edges S -> S+i -> S+i+j
    if T == S | {i} and j not in T:
        return True
    # (e) parallel edges in direction i
    if i == j and len(T - S) == 1 and S < T:
        return True
    # (f) two edges entering the same corner
    return i != j and j in S and i in T and S - {j} == T - {i}


def combinatorial_adjacent(u: KnapsackVertex, v: KnapsackVertex) -> bool:
    """
    Closed-form adjacency on P_b for two of its vertices

    Args:
        u, v: Vertices of the same instance

    Returns:
        True iff one of the six edge types connects u and v
    """
    if isinstance(u, CubeVertex) and isinstance(v, CubeVertex):
        return len(u.subset ^ v.subset) == 1
    if isinstance(u, SlicedVertex) and isinstance(v, CubeVertex):
        u, v = v, u
    if isinstance(u, CubeVertex):
        # (b) the cut point on an edge at the corner
        S, T, k = u.subset, v.subset, v.k
        return (T == S and k not in S) or (k in S and T == S - {k})
    return _sliced_pair_adjacent(u, v) or _sliced_pair_adjacent(v, u)


def combinatorial_edges(inst: PartitionInstance, vertices: Optional[List[KnapsackVertex]] = None) -> List[Tuple[KnapsackVertex, KnapsackVertex]]:
    vertices = vertices if vertices is not None else combinatorial_vertices(inst)
    return [(u, v) for u, v in combinations(vertices, 2) if combinatorial_adjacent(u, v)]


@dataclass(frozen=True)
class ModelComparison:
    vertices_match: bool
    edges_match: bool
    missing_vertices: Tuple[str, ...] = ()
    extra_vertices: Tuple[str, ...] = ()
    edge_difference: int = 0

    @property
    def ok(self) -> bool:
        return self.vertices_match and self.edges_match


def compare_with_geometry(inst: PartitionInstance, G: PolytopeGraph) -> ModelComparison:
    """
    Check the closed-form vertices and edges against an enumerated graph of P_b

    Points are compared as well as bases.
    """
    model = combinatorial_vertices(inst)
    expected = {vertex_basis_labels(inst, v): v for v in model}
    found = {basis.label_set for basis in G.bases}
    missing = tuple(sorted(str(expected[key]) for key in expected.keys() - found))
    extra = tuple(sorted(",".join(sorted(key)) for key in found - expected.keys()))
    vertices_match = not missing and not extra
    if vertices_match:
        for key, vertex in expected.items():
            if G.points[G.node_of_basis(key)] != vertex_point(inst, vertex):
                vertices_match = False
                missing += (str(vertex),)
    if not vertices_match:
        return ModelComparison(False, False, missing, extra)
    model_edges = {frozenset((vertex_basis_labels(inst, u), vertex_basis_labels(inst, v)))
                   for u, v in combinatorial_edges(inst, model)}
    graph_edges = {frozenset((G.bases[u].label_set, G.bases[v].label_set)) for u, v in G.graph.edges}
    difference = len(model_edges ^ graph_edges)
    return ModelComparison(True, difference == 0, edge_difference=difference)


def partition_endpoints(inst: PartitionInstance) -> Tuple[SlicedVertex, SlicedVertex]:
    """(empty set, d+2) and ([d+1], d+2)"""
    n = inst.dim
    start = SlicedVertex(frozenset(), n)
    end = SlicedVertex(frozenset(range(1, n)), n)
    vertices = set(combinatorial_vertices(inst))
    if start not in vertices or end not in vertices:
        raise RecordInconsistent("partition endpoints are not vertices of P_b", weights=list(inst.weights))
    return start, end


def monotone_objective(inst: PartitionInstance) -> MonotoneObjective:
    """c = (1, ..., 1, eps) with eps = 1/(5 beta)"""
    epsilon = Fraction(1, 5 * inst.beta)
    return MonotoneObjective(tuple([ONE] * (inst.d + 1)) + (epsilon,), epsilon)


def brute_force_partition(inst: PartitionInstance, budget: Optional[Budget] = None) -> Optional[Tuple[int, ...]]:
    """
    Find S with sum_{i in S} b_i = beta by scanning all 2^d subsets

    Subsets are tried by size, then lexicographically.

    Returns:
        1-based indices of S, or None

    Raises:
        BudgetExceeded: if d exceeds budget.partition_bits
    """
    budget = resolve_budget(budget)
    if inst.d > budget.partition_bits:
        raise BudgetExceeded(f"2^{inst.d} subsets exceed the 2^{budget.partition_bits} scan cap")
    for size in range(inst.d + 1):
        for chosen in combinations(range(inst.d), size):
            if sum(inst.weights[i] for i in chosen) == inst.beta:
                return tuple(i + 1 for i in chosen)
    return None


def knapsack_graph(inst: PartitionInstance, budget: Optional[Budget] = None) -> PolytopeGraph:
    """Graph of P_b; large instances are walked from the origin's basis"""
    P = build_Pb(inst)
    origin = [P.index_of(f"lo:{i}") for i in range(1, inst.dim + 1)]
    return build_graph(P, budget, start=origin)


def _endpoint_nodes(inst: PartitionInstance, G: PolytopeGraph) -> Tuple[int, int]:
    start, end = partition_endpoints(inst)
    return G.node_of_basis(vertex_basis_labels(inst, start)), G.node_of_basis(vertex_basis_labels(inst, end))


def partition_by_distance(inst: PartitionInstance, budget: Optional[Budget] = None,
                          graph: Optional[PolytopeGraph] = None) -> PartitionDecision:
    """Shortest path between the partition endpoints on P_b"""
    G = graph if graph is not None else knapsack_graph(inst, budget)
    u, v = _endpoint_nodes(inst, G)
    path = distance(G, u, v)
    logger.info("b=%s: endpoint distance %d, threshold %d", inst.weights, path.length, inst.threshold)
    return PartitionDecision(inst, path.length, path, u, v, G)


def partition_by_monotone_path(inst: PartitionInstance, budget: Optional[Budget] = None,
                               graph: Optional[PolytopeGraph] = None) -> PartitionDecision:
    """Shortest c-monotone path from (empty set, d+2) to the c-maximiser"""
    G = graph if graph is not None else knapsack_graph(inst, budget)
    u, v = _endpoint_nodes(inst, G)
    objective = monotone_objective(inst)
    path = shortest_monotone_path(G.polytope, objective.c, u, graph=G)
    if path is not None and path.vertices[-1] != v:
        raise RecordInconsistent("monotone path ended away from ([d+1], d+2)", weights=list(inst.weights))
    length = path.length if path is not None else None
    logger.info("b=%s: monotone length %s, threshold %d", inst.weights, length, inst.threshold)
    return PartitionDecision(inst, length, path, u, v, G)


def decide_partition_via_distance(inst: PartitionInstance, budget: Optional[Budget] = None) -> bool:
    return partition_by_distance(inst, budget).answer


def decide_partition_via_monotone_distance(inst: PartitionInstance, budget: Optional[Budget] = None) -> bool:
    return partition_by_monotone_path(inst, budget).answer


def objective_maximizers(G: PolytopeGraph, c: Sequence) -> List[int]:
    values = objective_values(G, c)
    top = max(values)
    return [i for i, value in enumerate(values) if value == top]


def is_support_chain(inst: PartitionInstance, G: PolytopeGraph, path: PathResult) -> bool:
    """
    True when the path only visits (S_j, d+2) vertices with S_j growing by one
    element per step
    """
    previous = None
    for node in path.vertices:
        vertex = classify_basis(G.bases[node].labels)
        if not isinstance(vertex, SlicedVertex) or vertex.k != inst.dim:
            return False
        if previous is not None and not (previous < vertex.subset and len(vertex.subset - previous) == 1):
            return False
        previous = vertex.subset
    return True


def chain_values_increase(inst: PartitionInstance) -> bool:
    """For S strictly inside T within [d+1], c at (S, d+2) is below c at (T, d+2)"""
    c = monotone_objective(inst).c
    chain = [v for v in combinatorial_vertices(inst) if isinstance(v, SlicedVertex) and v.k == inst.dim]
    values = {v.subset: dot(c, vertex_point(inst, v)) for v in chain}
    return all(values[S] < values[T] for S in values for T in values if S < T)


# Instance families

def exhaustive_instances(min_d: int = 2, max_d: int = 4, max_weight: int = 5) -> Iterator[PartitionInstance]:
    """Every weight vector with entries in [1, max_weight] and even sum"""
    for d in range(min_d, max_d + 1):
        for weights in product(range(1, max_weight + 1), repeat=d):
            if sum(weights) % 2 == 0:
                yield PartitionInstance(weights)


def random_instances(seed: int, count: int, max_d: int = 6, max_weight: int = 9,
                     min_d: int = 2) -> List[PartitionInstance]:
    """Seeded random instances; an odd sum is fixed by bumping the last weight"""
    rng = random.Random(seed)
    instances = []
    for _ in range(count):
        d = rng.randint(min_d, max_d)
        weights = [rng.randint(1, max_weight) for _ in range(d)]
        if sum(weights) % 2:
            weights[-1] += 1
        instances.append(PartitionInstance(tuple(weights)))
    return instances


def diameter_instance(inst: PartitionInstance, r: Optional[int] = None,
                      budget: Optional[Budget] = None) -> Tuple[ReductionOutput, int]:
    """
    Turn a Partition instance into a diameter question

    Applies the cyclic-silo diameter reduction to P_b at the partition
    endpoints. The diameter of the result is at most d + 1 + K exactly when
    a partition exists.

    Returns:
        (ReductionOutput, threshold) with threshold = d + 1 + K
    """
    P = build_Pb(inst)
    start, end = partition_endpoints(inst)
    output = diameter_reduction(P, vertex_basis_labels(inst, start), vertex_basis_labels(inst, end),
                                r=r, budget=budget)
    return output, inst.threshold + output.K
