"""
Polytope core module for Polydist

This module provides functionality to:
1. Describe polytopes by labelled inequalities A x <= b (HPolytope)
2. Enumerate feasible bases, by exhaustive scan or by pivoting from a known vertex
3. Check simplicity and classify rows as facet-defining or redundant
4. Build the vertex-edge graph and measure distances, diameters and
   shortest monotone paths on it
"""

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .config import Budget, resolve_budget
from .errors import (
    BudgetExceeded,
    DimensionTooSmall,
    MalformedInput,
    NotAVertex,
    NotSimple,
    TiedObjectiveEdge,
    TimeBudgetExceeded,
    UnboundedEdge,
    Unreachable,
)
from .exact_linalg import (
    ONE,
    ZERO,
    RatMatrix,
    RatVector,
    add,
    dot,
    format_vector,
    inverse,
    rank,
    scale,
    solve_square,
    sub,
    vector,
)

logger = logging.getLogger(__name__)

FACET_DEFINING = "facet-defining"
REDUNDANT = "redundant"


@dataclass(frozen=True)
class HPolytope:
    """The polytope {x : A x <= b}, one stable label per row"""

    A: RatMatrix
    b: RatVector
    labels: Tuple[str, ...]

    def __post_init__(self):
        if not (len(self.A) == len(self.b) == len(self.labels)):
            raise MalformedInput("A, b and labels must have the same number of rows")
        if not self.A:
            raise MalformedInput("a polytope needs at least one row")
        width = len(self.A[0])
        if width == 0 or any(len(row) != width for row in self.A):
            raise MalformedInput("rows of A must be nonempty and of equal length")
        if len(set(self.labels)) != len(self.labels):
            raise MalformedInput("row labels must be pairwise distinct")
        for label, row in zip(self.labels, self.A):
            if all(entry == 0 for entry in row):
                raise MalformedInput(f"row {label!r} has a zero normal")

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[str, Sequence, object]]) -> "HPolytope":
        """Build from (label, normal, offset) triples"""
        labels, normals, offsets = [], [], []
        for label, normal, offset in rows:
            labels.append(str(label))
            normals.append(vector(normal))
            offsets.append(vector([offset])[0])
        return cls(tuple(normals), tuple(offsets), tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.A[0])

    @property
    def num_rows(self) -> int:
        return len(self.A)

    @cached_property
    def _label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise MalformedInput(f"unknown row label {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._label_index

    def slack(self, row: int, point: Sequence) -> object:
        return self.b[row] - dot(self.A[row], point)

    def contains(self, point: Sequence) -> bool:
        return all(self.slack(i, point) >= 0 for i in range(self.num_rows))

    def tight_rows(self, point: Sequence) -> Tuple[int, ...]:
        return tuple(i for i in range(self.num_rows) if self.slack(i, point) == 0)

    def add_row(self, normal: Sequence, offset, label: str) -> "HPolytope":
        if self.has_label(label):
            raise MalformedInput(f"row label {label!r} already in use")
        return HPolytope(self.A + (vector(normal),), self.b + (vector([offset])[0],),
                         self.labels + (label,))


@dataclass(frozen=True, order=True)
class FeasibleBasis:
    """A d-subset of rows, kept sorted by row position"""

    indices: Tuple[int, ...]
    labels: Tuple[str, ...] = field(compare=False)

    @classmethod
    def of(cls, P: HPolytope, indices: Iterable[int]) -> "FeasibleBasis":
        ordered = tuple(sorted(indices))
        return cls(ordered, tuple(P.labels[i] for i in ordered))

    @property
    def label_set(self) -> FrozenSet[str]:
        return frozenset(self.labels)


@dataclass(frozen=True)
class DegenerateVertex:
    point: RatVector
    tight_labels: Tuple[str, ...]

    def as_dict(self) -> dict:
        return {"point": format_vector(self.point), "tight": list(self.tight_labels)}


@dataclass(frozen=True)
class SimplicityReport:
    simple: bool
    witness: Optional[DegenerateVertex] = None

    def __bool__(self) -> bool:
        return self.simple


@dataclass(frozen=True)
class PathResult:
    vertices: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class DiameterResult:
    value: int
    pair: Tuple[int, int]


@dataclass(frozen=True)
class PivotMove:
    """One edge leaving a vertex: which row leaves, which enters, where it ends"""

    leaving: int
    entering: int
    basis: Tuple[int, ...]
    point: RatVector
    direction: RatVector
    step: object


@dataclass(frozen=True)
class PolytopeGraph:
    polytope: HPolytope
    bases: Tuple[FeasibleBasis, ...]
    points: Tuple[RatVector, ...]
    adjacency: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.bases)))
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    g.add_edge(u, v)
        return g

    @cached_property
    def _basis_index(self) -> Dict[FrozenSet[str], int]:
        return {basis.label_set: i for i, basis in enumerate(self.bases)}

    @cached_property
    def _point_index(self) -> Dict[RatVector, int]:
        return {point: i for i, point in enumerate(self.points)}

    def node_of_basis(self, labels: Iterable[str]) -> int:
        key = frozenset(labels)
        if key not in self._basis_index:
            raise NotAVertex(f"no feasible basis {sorted(key)}")
        return self._basis_index[key]

    def node_of_point(self, point: Sequence) -> int:
        key = tuple(point)
        if key not in self._point_index:
            raise NotAVertex(f"no vertex at {format_vector(key)}")
        return self._point_index[key]

    def has_basis(self, labels: Iterable[str]) -> bool:
        return frozenset(labels) in self._basis_index


# Vertices and bases

def basis_point(P: HPolytope, indices: Sequence[int]) -> Optional[RatVector]:
    """Solve A_B x = b_B; None when A_B is singular"""
    return solve_square([P.A[i] for i in indices], [P.b[i] for i in indices])


def feasible_point(P: HPolytope, indices: Sequence[int]) -> Optional[RatVector]:
    """The vertex of a feasible basis, or None if the basis is singular or infeasible"""
    point = basis_point(P, indices)
    if point is None or not P.contains(point):
        return None
    return point


def resolve_basis(P: HPolytope, vertex) -> Tuple[int, ...]:
    """
    Turn a vertex description into the sorted row indices of its basis

    Args:
        P: The polytope
        vertex: A FeasibleBasis, a collection of row labels, or a point

    Returns:
        Sorted row indices of a feasible basis

    Raises:
        NotAVertex: if the description matches no vertex
        NotSimple: if a point lies on more than d rows
    """
    if isinstance(vertex, FeasibleBasis):
        labels = list(vertex.labels)
    elif isinstance(vertex, (set, frozenset)) or (
            isinstance(vertex, (list, tuple)) and vertex and all(isinstance(x, str) for x in vertex)):
        labels = list(vertex)
    else:
        point = vector(vertex)
        if len(point) != P.dim:
            raise NotAVertex(f"point has dimension {len(point)}, polytope has {P.dim}")
        if not P.contains(point):
            raise NotAVertex(f"{format_vector(point)} is not in the polytope")
        tight = P.tight_rows(point)
        if len(tight) > P.dim:
            raise NotSimple("vertex lies on more than d rows",
                            witness=DegenerateVertex(point, tuple(P.labels[i] for i in tight)))
        if len(tight) < P.dim or basis_point(P, tight) is None:
            raise NotAVertex(f"{format_vector(point)} is not a vertex")
        return tight
    if len(labels) != P.dim or len(set(labels)) != P.dim:
        raise NotAVertex(f"a basis needs {P.dim} distinct labels, got {labels}")
    indices = tuple(sorted(P.index_of(label) for label in labels))
    if feasible_point(P, indices) is None:
        raise NotAVertex(f"{sorted(labels)} is not a feasible basis")
    return indices


def _scan_from(P: HPolytope, first: int) -> List[Tuple[Tuple[int, ...], RatVector]]:
    """All feasible bases whose smallest row is `first`"""
    found = []
    rest = range(first + 1, P.num_rows)
    for tail in combinations(rest, P.dim - 1):
        indices = (first,) + tail
        point = feasible_point(P, indices)
        if point is not None:
            found.append((indices, point))
    return found


def enumerate_feasible_bases(P: HPolytope, budget: Optional[Budget] = None) -> List[Tuple[FeasibleBasis, RatVector]]:
    """
    Exhaustive C(m, d) scan for feasible bases

    Args:
        P: A bounded polytope
        budget: Caps; budget.jobs > 1 spreads the scan over processes

    Returns:
        (basis, vertex) pairs in lexicographic order of row positions

    Raises:
        DimensionTooSmall: if m < d
        TimeBudgetExceeded: if C(m, d) exceeds budget.max_bases
    """
    budget = resolve_budget(budget)
    m, d = P.num_rows, P.dim
    if m < d:
        raise DimensionTooSmall(f"{m} rows cannot define a vertex in dimension {d}")
    candidates = comb(m, d)
    if candidates > budget.max_bases:
        raise TimeBudgetExceeded(f"C({m},{d}) = {candidates} exceeds the basis cap {budget.max_bases}",
                                 candidates=candidates)
    firsts = range(m - d + 1)
    if budget.jobs > 1 and candidates > 1000:
        logger.debug("Scanning %d bases with %d workers", candidates, budget.jobs)
        with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
            chunks = list(pool.map(_scan_from, [P] * len(firsts), firsts))
    else:
        chunks = [_scan_from(P, first) for first in firsts]
    found = sorted(item for chunk in chunks for item in chunk)
    return [(FeasibleBasis.of(P, indices), point) for indices, point in found]


def first_feasible_basis(P: HPolytope) -> Tuple[int, ...]:
    """Lexicographically first feasible basis, found lazily"""
    for indices in combinations(range(P.num_rows), P.dim):
        if feasible_point(P, indices) is not None:
            return indices
    raise NotAVertex("polytope has no vertex")


def _degeneracy(P: HPolytope, indices: Sequence[int], point: RatVector) -> Optional[DegenerateVertex]:
    tight = P.tight_rows(point)
    if len(tight) != len(indices):
        return DegenerateVertex(point, tuple(P.labels[i] for i in tight))
    return None


def pivot_neighbors(P: HPolytope, indices: Sequence[int], point: Optional[RatVector] = None) -> List[PivotMove]:
    """
    The d edges leaving a simple vertex, found by ratio tests

    Moving off row B[p] follows direction -A_B^{-1} e_p until another row
    becomes tight. Moves come back in the order of the leaving row.

    Raises:
        NotSimple: if the vertex is degenerate or a ratio test ties
        UnboundedEdge: if an edge never meets another row
    """
    indices = tuple(sorted(indices))
    if point is None:
        point = basis_point(P, indices)
        if point is None:
            raise NotAVertex(f"rows {[P.labels[i] for i in indices]} are linearly dependent")
    witness = _degeneracy(P, indices, point)
    if witness is not None:
        raise NotSimple("degenerate vertex", witness=witness)
    inv = inverse([P.A[i] for i in indices])
    in_basis = set(indices)
    moves = []
    for position, leaving in enumerate(indices):
        direction = tuple(-inv[r][position] for r in range(P.dim))
        best, hits = None, []
        for row in range(P.num_rows):
            if row in in_basis:
                continue
            rate = dot(P.A[row], direction)
            if rate <= 0:
                continue
            step = P.slack(row, point) / rate
            if best is None or step < best:
                best, hits = step, [row]
            elif step == best:
                hits.append(row)
        if best is None:
            raise UnboundedEdge(f"edge leaving row {P.labels[leaving]!r} is unbounded")
        if len(hits) > 1:
            end = add(point, scale(direction, best))
            raise NotSimple("ratio test tie", witness=DegenerateVertex(
                end, tuple(P.labels[i] for i in P.tight_rows(end))))
        entering = hits[0]
        basis = tuple(sorted(in_basis - {leaving} | {entering}))
        moves.append(PivotMove(leaving, entering, basis, add(point, scale(direction, best)), direction, best))
    return moves


def walk_feasible_bases(P: HPolytope, start: Optional[Sequence[int]] = None,
                        budget: Optional[Budget] = None) -> Dict[Tuple[int, ...], Tuple[RatVector, List[PivotMove]]]:
    """
    Enumerate a simple polytope by pivoting outward from one vertex

    Args:
        P: A bounded simple polytope
        start: Row indices of a feasible basis (found by scanning if omitted)
        budget: Caps; the walk stops at budget.max_bases vertices

    Returns:
        basis indices -> (vertex, outgoing moves)
    """
    budget = resolve_budget(budget)
    start = tuple(sorted(start)) if start is not None else first_feasible_basis(P)
    point = feasible_point(P, start)
    if point is None:
        raise NotAVertex("walk start is not a feasible basis")
    seen = {start: point}
    visited: Dict[Tuple[int, ...], Tuple[RatVector, List[PivotMove]]] = {}
    frontier = [start]
    while frontier:
        indices = frontier.pop()
        vertex = seen[indices]
        moves = pivot_neighbors(P, indices, vertex)
        visited[indices] = (vertex, moves)
        for move in moves:
            if move.basis not in seen:
                if len(seen) >= budget.max_bases:
                    raise TimeBudgetExceeded(f"pivot walk passed {budget.max_bases} vertices")
                seen[move.basis] = move.point
                frontier.append(move.basis)
    return visited


def is_simple(P: HPolytope, budget: Optional[Budget] = None,
              vertices: Optional[List[Tuple[FeasibleBasis, RatVector]]] = None) -> SimplicityReport:
    """
    Check that every vertex lies on exactly d rows

    Args:
        P: A bounded polytope
        budget: Enumeration caps
        vertices: Previously enumerated bases, to avoid a second scan

    Returns:
        SimplicityReport, with a degenerate vertex as witness when not simple
    """
    if vertices is None:
        vertices = enumerate_feasible_bases(P, budget)
    checked = set()
    for basis, point in vertices:
        if point in checked:
            return SimplicityReport(False, DegenerateVertex(point, tuple(P.labels[i] for i in P.tight_rows(point))))
        checked.add(point)
        witness = _degeneracy(P, basis.indices, point)
        if witness is not None:
            return SimplicityReport(False, witness)
    return SimplicityReport(True)


def _graph_by_scan(P: HPolytope, budget: Budget) -> PolytopeGraph:
    vertices = enumerate_feasible_bases(P, budget)
    report = is_simple(P, vertices=vertices)
    if not report.simple:
        raise NotSimple("polytope is not simple", witness=report.witness)
    index = {basis.indices: i for i, (basis, _) in enumerate(vertices)}
    adjacency = []
    for basis, point in vertices:
        nbrs = set()
        members = set(basis.indices)
        for leaving in basis.indices:
            rest = members - {leaving}
            for entering in range(P.num_rows):
                if entering in members:
                    continue
                other = index.get(tuple(sorted(rest | {entering})))
                if other is None:
                    continue
                other_point = vertices[other][1]
                # share d-1 tight rows and sit at different points
                if other_point != point and all(P.slack(r, other_point) == 0 for r in rest):
                    nbrs.add(other)
        adjacency.append(tuple(sorted(nbrs)))
    return PolytopeGraph(P, tuple(b for b, _ in vertices), tuple(p for _, p in vertices), tuple(adjacency))


def _graph_by_walk(P: HPolytope, budget: Budget, start: Optional[Sequence[int]]) -> PolytopeGraph:
    visited = walk_feasible_bases(P, start, budget)
    order = sorted(visited)
    index = {indices: i for i, indices in enumerate(order)}
    adjacency = tuple(tuple(sorted(index[move.basis] for move in visited[indices][1])) for indices in order)
    return PolytopeGraph(P, tuple(FeasibleBasis.of(P, indices) for indices in order),
                         tuple(visited[indices][0] for indices in order), adjacency)


def build_graph(P: HPolytope, budget: Optional[Budget] = None, method: str = "auto",
                start: Optional[Sequence[int]] = None) -> PolytopeGraph:
    """
    Build the vertex-edge graph of a simple polytope

    Args:
        P: A bounded polytope
        budget: Caps
        method: "scan" (exhaustive), "walk" (pivoting) or "auto" (scan while
                C(m, d) <= budget.scan_limit)
        start: Optional feasible basis for the walk

    Returns:
        PolytopeGraph with nodes in lexicographic basis order

    Raises:
        NotSimple: on a degenerate vertex
    """
    budget = resolve_budget(budget)
    if method == "auto":
        method = "scan" if comb(P.num_rows, P.dim) <= budget.scan_limit else "walk"
    if method == "scan":
        graph = _graph_by_scan(P, budget)
    elif method == "walk":
        graph = _graph_by_walk(P, budget, start)
    else:
        raise MalformedInput(f"unknown enumeration method {method!r}")
    logger.debug("Built graph by %s: %d vertices, %d edges", method, len(graph), graph.edge_count)
    return graph


# Distances

def distance(G: PolytopeGraph, u: int, v: int) -> PathResult:
    """
    Shortest path between two nodes

    Returns:
        PathResult; its length is the BFS distance

    Raises:
        Unreachable: if the nodes are disconnected (never on a polytope)
    """
    try:
        return PathResult(tuple(nx.shortest_path(G.graph, u, v)))
    except nx.NetworkXNoPath:
        raise Unreachable(f"no path between nodes {u} and {v}") from None


def distances_from(G: PolytopeGraph, source: int) -> Dict[int, int]:
    return dict(nx.single_source_shortest_path_length(G.graph, source))


def _check_relaxations(nodes: int, edges: int, budget: Budget) -> None:
    relaxations = nodes * 2 * edges
    if relaxations > budget.max_relaxations:
        raise BudgetExceeded(f"all-pairs BFS needs {relaxations} relaxations, cap is {budget.max_relaxations}")


def diameter(G: PolytopeGraph, budget: Optional[Budget] = None) -> DiameterResult:
    """
    All-pairs BFS diameter with the first pair attaining it

    Raises:
        BudgetExceeded: if the search would exceed budget.max_relaxations
        Unreachable: if G is disconnected
    """
    budget = resolve_budget(budget)
    _check_relaxations(len(G), G.edge_count, budget)
    best, pair = 0, (0, 0)
    for source in range(len(G)):
        lengths = distances_from(G, source)
        if len(lengths) != len(G):
            raise Unreachable(f"graph is disconnected at node {source}")
        for target in range(source + 1, len(G)):
            if lengths[target] > best:
                best, pair = lengths[target], (source, target)
    return DiameterResult(best, pair)


def objective_values(G: PolytopeGraph, c: Sequence) -> List[object]:
    c = vector(c)
    if len(c) != G.polytope.dim:
        raise MalformedInput(f"objective has length {len(c)}, polytope dimension is {G.polytope.dim}")
    return [dot(c, point) for point in G.points]


def shortest_monotone_path(P: HPolytope, c: Sequence, start: int,
                           graph: Optional[PolytopeGraph] = None,
                           budget: Optional[Budget] = None) -> Optional[PathResult]:
    """
    Shortest strictly c-increasing edge path from start to a c-maximal vertex

    Edges with equal objective at both ends are dropped and reported with a
    TiedObjectiveEdge warning.

    Args:
        P: A simple polytope
        c: Objective vector
        start: Node index in build_graph(P)
        graph: A prebuilt graph of P
        budget: Caps for building the graph

    Returns:
        The path, or None if no monotone path exists
    """
    G = graph if graph is not None else build_graph(P, budget)
    values = objective_values(G, c)
    directed = nx.DiGraph()
    directed.add_nodes_from(range(len(G)))
    tied = []
    for u, nbrs in enumerate(G.adjacency):
        for v in nbrs:
            if values[v] > values[u]:
                directed.add_edge(u, v)
            elif values[v] == values[u] and u < v:
                tied.append((u, v))
    if tied:
        message = f"{len(tied)} edge(s) have equal objective at both ends and were excluded"
        logger.debug(message)
        warnings.warn(message, TiedObjectiveEdge, stacklevel=2)
    top = max(values)
    targets = [i for i, value in enumerate(values) if value == top]
    paths = nx.single_source_shortest_path(directed, start)
    reachable = [t for t in targets if t in paths]
    if not reachable:
        logger.error("No monotone path from node %d to a maximiser", start)
        return None
    best = min(reachable, key=lambda t: (len(paths[t]), t))
    return PathResult(tuple(paths[best]))


def pivot_distance(P: HPolytope, c: Sequence, B: Union[FeasibleBasis, Iterable[str]],
                   graph: Optional[PolytopeGraph] = None, budget: Optional[Budget] = None) -> int:
    """
    Fewest monotone pivots from basis B to an optimal basis (simple P only)

    Raises:
        NotSimple: if P is degenerate
        Unreachable: if no monotone path exists
    """
    G = graph if graph is not None else build_graph(P, budget)
    labels = B.labels if isinstance(B, FeasibleBasis) else B
    start = G.node_of_basis(labels)
    path = shortest_monotone_path(P, c, start, graph=G)
    if path is None:
        raise Unreachable("no monotone path to an optimum")
    return path.length


def facet_status(P: HPolytope, budget: Optional[Budget] = None,
                 vertices: Optional[List[Tuple[FeasibleBasis, RatVector]]] = None) -> Dict[str, str]:
    """
    Classify every row as facet-defining or redundant

    A row defines a facet when it is tight at d affinely independent vertices.
    """
    if vertices is None:
        vertices = enumerate_feasible_bases(P, budget)
    points = sorted({point for _, point in vertices})
    status = {}
    for row, label in enumerate(P.labels):
        tight = [p for p in points if P.slack(row, p) == 0]
        if not tight:
            status[label] = REDUNDANT
            continue
        differences = [sub(p, tight[0]) for p in tight[1:]]
        affine_rank = rank(differences) if differences else 0
        status[label] = FACET_DEFINING if affine_rank >= P.dim - 1 else REDUNDANT
    return status


# Common fixtures

def unit_cube(d: int) -> HPolytope:
    """[0,1]^d with rows lo:1..lo:d then hi:1..hi:d"""
    rows = []
    for i in range(d):
        normal = [ZERO] * d
        normal[i] = -ONE
        rows.append((f"lo:{i + 1}", normal, 0))
    for i in range(d):
        normal = [ZERO] * d
        normal[i] = ONE
        rows.append((f"hi:{i + 1}", normal, 1))
    return HPolytope.from_rows(rows)
