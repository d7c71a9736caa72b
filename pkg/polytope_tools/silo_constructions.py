"""
Silo constructions module for Polydist

This module provides functionality to:
1. Truncate a vertex of a simple polytope through the midpoints of its edges
2. Track feasible bases as generating functions and predict them symbolically
3. Build silos (d ordered truncations) and the silo graph G_d they contain
4. Run r-cyclic siloing with full bookkeeping of peaks, neighbours and layers
5. Reduce a distance question on P to a diameter question on a larger polytope
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .config import Budget, resolve_budget
from .errors import (
    BasisNotPresent,
    DimensionTooSmall,
    FormulaMismatch,
    InvalidOrder,
    MalformedInput,
    RecordInconsistent,
    RTooSmall,
    SameVertex,
)
from .exact_linalg import dot, encoding_length, hyperplane_through_points, midpoint, negate
from .polytope_core import (
    HPolytope,
    PolytopeGraph,
    build_graph,
    diameter,
    distance,
    distances_from,
    feasible_point,
    pivot_neighbors,
    resolve_basis,
)

logger = logging.getLogger(__name__)

LabelSet = FrozenSet[str]
SiloNode = Tuple[int, int]


def _labels_of(P: HPolytope, indices: Iterable[int]) -> LabelSet:
    return frozenset(P.labels[i] for i in indices)


def _indices_of(P: HPolytope, labels: Iterable[str]) -> Tuple[int, ...]:
    return tuple(sorted(P.index_of(label) for label in labels))


def _fresh_label(P: HPolytope, base: str) -> str:
    label, bump = base, 1
    while P.has_label(label):
        label = f"{base}.{bump}"
        bump += 1
    return label


def _max_entry_length(P: HPolytope) -> int:
    longest = max(encoding_length(entry) for row in P.A for entry in row)
    return max(longest, max(encoding_length(entry) for entry in P.b))


# Truncation

def _truncate_at(P: HPolytope, indices: Sequence[int], label: str) -> HPolytope:
    point = feasible_point(P, indices)
    if point is None:
        raise RecordInconsistent(f"rows {sorted(_labels_of(P, indices))} no longer form a vertex")
    moves = pivot_neighbors(P, indices, point)
    midpoints = [midpoint(point, move.point) for move in moves]
    normal, offset = hyperplane_through_points(midpoints)
    # the truncated vertex must violate the new row
    if dot(normal, point) < offset:
        normal, offset = negate(normal), -offset
    logger.debug("Truncating %s with row %s", sorted(_labels_of(P, indices)), label)
    return P.add_row(normal, offset, label)


def truncate(P: HPolytope, v, label: Optional[str] = None) -> HPolytope:
    """
    Cut off vertex v with the hyperplane through the midpoints of its d edges

    Args:
        P: A simple polytope
        v: The vertex, as a FeasibleBasis, a collection of row labels or a point
        label: Label for the new row (default "t:<m+1>")

    Returns:
        A polytope with one more row; v is gone and the d midpoints are new vertices

    Raises:
        NotAVertex: if v is not a vertex of P
        NotSimple: if v is degenerate
    """
    indices = resolve_basis(P, v)
    if label is None:
        label = _fresh_label(P, f"t:{P.num_rows + 1}")
    return _truncate_at(P, indices, label)


# Generating functions

@dataclass(frozen=True)
class GeneratingFunction:
    """Multiset of feasible bases, each a set of row labels"""

    monomials: Counter
    y_labels: LabelSet = field(default=frozenset(), compare=False)

    def __len__(self) -> int:
        return sum(self.monomials.values())

    def __contains__(self, basis: Iterable[str]) -> bool:
        return self.monomials[frozenset(basis)] > 0

    @property
    def multiplicity_free(self) -> bool:
        return all(count == 1 for count in self.monomials.values())

    def sorted_monomials(self) -> List[List[str]]:
        return sorted(sorted(m) for m in self.monomials.elements())

    def difference(self, other: "GeneratingFunction") -> Tuple[List[List[str]], List[List[str]]]:
        """(monomials only in self, monomials only in other)"""
        mine = self.monomials - other.monomials
        theirs = other.monomials - self.monomials
        return sorted(sorted(m) for m in mine.elements()), sorted(sorted(m) for m in theirs.elements())


def generating_function(P: HPolytope, budget: Optional[Budget] = None,
                        graph: Optional[PolytopeGraph] = None,
                        y_labels: Iterable[str] = ()) -> GeneratingFunction:
    """One monomial per feasible basis of a simple polytope"""
    G = graph if graph is not None else build_graph(P, budget)
    return GeneratingFunction(Counter(basis.label_set for basis in G.bases), frozenset(y_labels))


def predict_truncation_gf(f: GeneratingFunction, Bstar: Iterable[str], new_label: str,
                          new_is_y: bool = False) -> GeneratingFunction:
    """
    Bases after truncating the vertex with basis Bstar

    Bstar is removed and each Bstar - {i} + {new_label} is added.

    Raises:
        BasisNotPresent: if Bstar is not a monomial of f
    """
    Bstar = frozenset(Bstar)
    if f.monomials[Bstar] <= 0:
        raise BasisNotPresent(f"{sorted(Bstar)} is not a feasible basis")
    monomials = Counter(f.monomials)
    monomials[Bstar] -= 1
    if monomials[Bstar] == 0:
        del monomials[Bstar]
    for i in Bstar:
        monomials[(Bstar - {i}) | {new_label}] += 1
    y_labels = f.y_labels | {new_label} if new_is_y else f.y_labels
    return GeneratingFunction(monomials, y_labels)


# Silos

@dataclass(frozen=True)
class SiloResult:
    polytope: HPolytope
    order: Tuple[str, ...]
    y_labels: Tuple[str, ...]
    base_basis: LabelSet
    encoding_lengths: Tuple[int, ...]

    @property
    def peak(self) -> LabelSet:
        return frozenset(self.y_labels)


def next_silo_tag(P: HPolytope) -> int:
    """Smallest tag j with no "y:j:*" row yet"""
    used = set()
    for label in P.labels:
        parts = label.split(":")
        if len(parts) == 3 and parts[0] == "y" and parts[1].isdigit():
            used.add(int(parts[1]))
    tag = 1
    while tag in used:
        tag += 1
    return tag


def _check_order(P: HPolytope, basis: LabelSet, order: Optional[Sequence[str]]) -> Tuple[str, ...]:
    if order is None:
        return tuple(P.labels[i] for i in _indices_of(P, basis))
    order = tuple(str(label) for label in order)
    if len(order) != len(basis) or set(order) != basis:
        raise InvalidOrder(f"order {list(order)} is not a permutation of the basis {sorted(basis)}")
    return order


def _require_dimension(P: HPolytope) -> None:
    if P.dim < 3:
        raise DimensionTooSmall(f"silos need dimension at least 3, got {P.dim}")


def silo_with_details(P: HPolytope, v, order: Optional[Sequence[str]] = None,
                      tag: Optional[int] = None) -> SiloResult:
    """
    Silo of P at (v, order)

    Truncates, for k = 0..d-1, the vertex with basis order[k:] + y[:k] using
    the new row y[k]. The last vertex created, with basis y[0..d-1], is the peak.

    Args:
        P: A simple polytope of dimension at least 3
        v: The vertex being siloed
        order: A permutation of v's basis labels (defaults to row order)
        tag: Integer used in the new labels "y:<tag>:<k>"

    Returns:
        SiloResult with the new polytope and the per-step max entry encoding length
    """
    _require_dimension(P)
    basis = _labels_of(P, resolve_basis(P, v))
    order = _check_order(P, basis, order)
    tag = tag if tag is not None else next_silo_tag(P)
    y = tuple(f"y:{tag}:{k + 1}" for k in range(P.dim))
    clash = [label for label in y if P.has_label(label)]
    if clash:
        raise MalformedInput(f"silo labels {clash} are already in use")
    current, lengths = P, []
    for k in range(P.dim):
        target = order[k:] + y[:k]
        current = _truncate_at(current, _indices_of(current, target), y[k])
        lengths.append(_max_entry_length(current))
    logger.info("Built silo %d at %s: %d rows", tag, sorted(basis), current.num_rows)
    return SiloResult(current, order, y, basis, tuple(lengths))


def silo(P: HPolytope, v, order: Optional[Sequence[str]] = None) -> HPolytope:
    return silo_with_details(P, v, order).polytope


def predict_silo_gf(f: GeneratingFunction, order: Sequence[str], y_labels: Sequence[str]) -> GeneratingFunction:
    """
    Closed-form bases of a silo, with x_i = order[i-1] and y_i = y_labels[i-1]

    f - x^[d] + y^[d] + sum over k of the monomials x^([d]-[k]) y^([k+1]-{i})
    for i <= k and x^([d]-[k]-{j}) y^[k+1] for j >= k+2.
    """
    x, y = tuple(order), tuple(y_labels)
    d = len(x)
    base = frozenset(x)
    if f.monomials[base] <= 0:
        raise BasisNotPresent(f"{sorted(base)} is not a feasible basis")
    monomials = Counter(f.monomials)
    monomials[base] -= 1
    if monomials[base] == 0:
        del monomials[base]
    monomials[frozenset(y)] += 1
    for k in range(d):
        tail = frozenset(x[k:])
        lower = frozenset(y[:k + 1])
        for i in range(k):
            monomials[tail | (lower - {y[i]})] += 1
        for j in range(k + 1, d):
            monomials[(tail - {x[j]}) | lower] += 1
    return GeneratingFunction(monomials, f.y_labels | frozenset(y))


# The silo graph G_d

def silo_graph_adjacent(first: SiloNode, second: SiloNode) -> bool:
    (a, b), (a2, b2) = sorted([first, second], key=lambda node: node[1])
    if (a, b) == (a2, b2):
        return False
    if b == b2:
        return True
    if a != a2:
        return False
    return (b2 == b + 1 and b != a - 1) or (b2 == b + 2 and b == a - 1)


def silo_graph(d: int) -> nx.Graph:
    """
    The d-th silo graph on pairs (a, b), a != b, in [d]^2

    Nodes at the same height b form a clique; otherwise (a, b) meets the
    next node above it in column a.
    """
    if d < 3:
        raise DimensionTooSmall(f"G_d needs d >= 3, got {d}")
    G = nx.Graph()
    nodes = [(a, b) for b in range(1, d + 1) for a in range(1, d + 1) if a != b]
    G.add_nodes_from(nodes)
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if silo_graph_adjacent(u, v):
                G.add_edge(u, v)
    return G


def phi(a: int, b: int, order: Sequence[str], y_labels: Sequence[str]) -> LabelSet:
    """Basis of the silo vertex matching node (a, b) of G_d"""
    x, y = tuple(order), tuple(y_labels)
    if a == b:
        raise MalformedInput(f"({a},{b}) is not a node of G_d")
    if a > b:
        return (frozenset(x[b - 1:]) - {x[a - 1]}) | frozenset(y[:b])
    return frozenset(x[b - 1:]) | (frozenset(y[:b]) - {y[a - 1]})


def peak_neighbour_nodes(d: int) -> List[SiloNode]:
    return [(i, d) for i in range(1, d)] + [(d, d - 1)]


def ground_nodes(d: int) -> List[SiloNode]:
    return [(1, 2)] + [(i, 1) for i in range(2, d + 1)]


@dataclass(frozen=True)
class IsomorphismCheck:
    ok: bool
    reason: str = ""
    counterexample: Optional[Tuple] = None


def check_silo_isomorphism(result: SiloResult, graph: Optional[PolytopeGraph] = None,
                           budget: Optional[Budget] = None) -> IsomorphismCheck:
    """Check phi: G_d -> H on an already built silo"""
    S = result.polytope
    d = S.dim
    G = graph if graph is not None else build_graph(S, budget)
    y = frozenset(result.y_labels)
    peak = result.peak
    h_nodes = {G.bases[i].label_set: i for i in range(len(G))
               if G.bases[i].label_set & y and G.bases[i].label_set != peak}
    G_d = silo_graph(d)
    images = {node: phi(*node, result.order, result.y_labels) for node in G_d.nodes}
    if set(images.values()) != set(h_nodes):
        missing = sorted(sorted(m) for m in set(images.values()) - set(h_nodes))
        return IsomorphismCheck(False, "node sets differ", tuple(map(tuple, missing)))
    H = G.graph.subgraph(h_nodes.values())
    if H.number_of_edges() != G_d.number_of_edges():
        return IsomorphismCheck(False, f"H has {H.number_of_edges()} edges, G_d has {G_d.number_of_edges()}")
    nodes = list(G_d.nodes)
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if G_d.has_edge(u, v) != H.has_edge(h_nodes[images[u]], h_nodes[images[v]]):
                return IsomorphismCheck(False, "edge mismatch", (u, v))
    peak_node = G.node_of_basis(peak)
    around_peak = {G.bases[i].label_set for i in G.adjacency[peak_node]}
    expected = {images[node] for node in peak_neighbour_nodes(d)}
    if around_peak != expected:
        return IsomorphismCheck(False, "peak neighbours are not the images of (i,d) and (d,d-1)")
    return IsomorphismCheck(True)


def verify_silo_isomorphism(P: HPolytope, v, order: Optional[Sequence[str]] = None,
                            budget: Optional[Budget] = None) -> IsomorphismCheck:
    """
    Build the silo of P at (v, order) and check that phi is an isomorphism
    from G_d onto the new non-peak vertices
    """
    return check_silo_isomorphism(silo_with_details(P, v, order), budget=budget)


@dataclass(frozen=True)
class SiloGraphBounds:
    d: int
    claims: Dict[str, bool]
    worst: Dict[str, int]

    @property
    def ok(self) -> bool:
        return all(self.claims.values())


def silo_graph_path_bounds(d: int) -> SiloGraphBounds:
    """
    BFS-check the short-path facts of G_d

    (a) (1,2) reaches (i,d) for i in [d-1] - {2}, and (d,d-1), within d-2
    (b) each (i,1) with 2 <= i <= d-1 reaches (i,d), and (d,1) reaches
        (d,d-1), within d-2
    (c) every node is within d-2 of {(1,2)} + {(i,1)}
    (d) the nodes of that set are pairwise within 3
    """
    G = silo_graph(d)
    limit = d - 2
    from_top = nx.single_source_shortest_path_length(G, (1, 2))
    targets_a = [(i, d) for i in range(1, d) if i != 2] + [(d, d - 1)]
    worst_a = max(from_top[t] for t in targets_a)
    pairs_b = [((i, 1), (i, d)) for i in range(2, d)] + [((d, 1), (d, d - 1))]
    worst_b = max(nx.shortest_path_length(G, s, t) for s, t in pairs_b)
    ground = ground_nodes(d)
    lengths = {g: nx.single_source_shortest_path_length(G, g) for g in ground}
    worst_c = max(min(lengths[g][node] for g in ground) for node in G.nodes)
    worst_d = max(lengths[g][h] for g in ground for h in ground)
    worst = {"a": worst_a, "b": worst_b, "c": worst_c, "d": worst_d}
    claims = {"a": worst_a <= limit, "b": worst_b <= limit, "c": worst_c <= limit, "d": worst_d <= 3}
    return SiloGraphBounds(d, claims, worst)


# Cyclic siloing

def _wrap(z: int, d: int) -> int:
    return (z - 1) % d + 1


@dataclass(frozen=True)
class CyclicSiloRecord:
    """
    Bookkeeping of an r-cyclic siloing

    peaks[j] is the peak v_j (peaks[0] is the siloed vertex), neighbours[j]
    lists v_{1,j}..v_{d,j}, layers[j-1] lists u_{1,j}..u_{d,j}, orders[j-1]
    is the order used for the j-th silo.
    """

    r: int
    d: int
    peaks: Tuple[LabelSet, ...]
    neighbours: Tuple[Tuple[LabelSet, ...], ...]
    layers: Tuple[Tuple[LabelSet, ...], ...]
    orders: Tuple[Tuple[str, ...], ...]
    y_labels: Tuple[Tuple[str, ...], ...]
    encoding_lengths: Tuple[int, ...]
    base_length: int
    polytopes: Tuple[HPolytope, ...] = field(default=(), repr=False, compare=False)

    @property
    def ground(self) -> Tuple[LabelSet, ...]:
        return self.layers[0]

    @property
    def final_peak(self) -> LabelSet:
        return self.peaks[-1]

    @property
    def truncations(self) -> int:
        return len(self.encoding_lengths)

    def as_dict(self) -> dict:
        def labels(group):
            return [sorted(basis) for basis in group]
        return {
            "r": self.r,
            "d": self.d,
            "peaks": labels(self.peaks),
            "neighbours": [labels(group) for group in self.neighbours],
            "layers": [labels(group) for group in self.layers],
            "orders": [list(order) for order in self.orders],
            "y_labels": [list(group) for group in self.y_labels],
            "encoding_lengths": list(self.encoding_lengths),
        }


def _adjacent_in(P: HPolytope, first: LabelSet, second: LabelSet) -> bool:
    if len(first ^ second) != 2:
        return False
    a = feasible_point(P, _indices_of(P, first))
    b = feasible_point(P, _indices_of(P, second))
    return a is not None and b is not None and a != b


def cyclic_silo(P: HPolytope, v, r: int, retain: bool = False) -> Tuple[HPolytope, CyclicSiloRecord]:
    """
    r-cyclic siloing of P at v

    Performs r*d silos. Silo j is taken at the previous peak, with its basis
    ordered by rotating the labelling b_1..b_d (b_i is the row the previous
    peak does not share with its i-th neighbour) so that b_j comes first.
    The neighbours of v are numbered in the order of the row that leaves.

    Args:
        P: A simple polytope of dimension at least 3
        v: The vertex to silo
        r: Number of rounds (r >= 1)
        retain: Keep every intermediate polytope in the record

    Returns:
        (final polytope, record)

    Raises:
        RecordInconsistent: if an expected vertex or adjacency is missing
    """
    _require_dimension(P)
    if r < 1:
        raise MalformedInput(f"r must be positive, got {r}")
    d = P.dim
    indices = resolve_basis(P, v)
    peak = _labels_of(P, indices)
    neighbours = tuple(_labels_of(P, move.basis) for move in pivot_neighbors(P, indices))
    peaks, all_neighbours, layers, orders, y_groups, lengths = [peak], [neighbours], [], [], [], []
    polytopes = [P] if retain else []
    current = P
    for j in range(1, r * d + 1):
        b = []
        for nb in neighbours:
            leaving = peak - nb
            if len(leaving) != 1:
                raise RecordInconsistent(f"step {j}: {sorted(nb)} is not a neighbour of the peak")
            b.append(next(iter(leaving)))
        order = tuple(b[_wrap(j + p, d) - 1] for p in range(d))
        result = silo_with_details(current, peak, order)
        current = result.polytope
        y = result.y_labels
        layer = tuple(phi(1, 2, order, y) if i == _wrap(j, d) else phi(_wrap(i - j + 1, d), 1, order, y)
                      for i in range(1, d + 1))
        tops = tuple(phi(d, d - 1, order, y) if i == _wrap(j - 1, d) else phi(_wrap(i - j + 1, d), d, order, y)
                     for i in range(1, d + 1))
        new_peak = result.peak
        for i in range(d):
            if not _adjacent_in(current, neighbours[i], layer[i]):
                raise RecordInconsistent(f"step {j}: v_{i + 1},{j - 1} and u_{i + 1},{j} are not adjacent")
            if not _adjacent_in(current, tops[i], new_peak):
                raise RecordInconsistent(f"step {j}: v_{i + 1},{j} is not a neighbour of the peak")
        peak, neighbours = new_peak, tops
        peaks.append(peak)
        all_neighbours.append(tops)
        layers.append(layer)
        orders.append(order)
        y_groups.append(y)
        lengths.extend(result.encoding_lengths)
        if retain:
            polytopes.append(current)
        logger.debug("Cyclic silo step %d/%d done, %d rows", j, r * d, current.num_rows)
    record = CyclicSiloRecord(r, d, tuple(peaks), tuple(all_neighbours), tuple(layers), tuple(orders),
                              tuple(y_groups), tuple(lengths), _max_entry_length(P), tuple(polytopes))
    logger.info("Cyclic siloing with r=%d finished: %d rows", r, current.num_rows)
    return current, record


@dataclass(frozen=True)
class CyclicSiloDistances:
    peak_to_original: int
    lower_bound: int
    ground_to_silo: int
    upper_bound: int
    ground_pairwise: int

    @property
    def ok(self) -> bool:
        return (self.peak_to_original >= self.lower_bound and self.ground_to_silo <= self.upper_bound
                and self.ground_pairwise <= 3)


def cyclic_silo_distances(P: HPolytope, Q: HPolytope, record: CyclicSiloRecord,
                          budget: Optional[Budget] = None,
                          base_graph: Optional[PolytopeGraph] = None,
                          graph: Optional[PolytopeGraph] = None) -> CyclicSiloDistances:
    """
    Measure the distance facts of a cyclic silo by BFS

    The peak must be at least r d (d-1) + 1 from every vertex of P other than
    the siloed one; inside the cyclic silo every vertex is within r d (d-1)
    of each ground-layer vertex, and the ground layer is pairwise within 3.
    """
    G_P = base_graph if base_graph is not None else build_graph(P, budget)
    G_Q = graph if graph is not None else build_graph(Q, budget)
    original = {basis.label_set for basis in G_P.bases}
    original_nodes = [i for i, basis in enumerate(G_Q.bases) if basis.label_set in original]
    silo_nodes = [i for i, basis in enumerate(G_Q.bases) if basis.label_set not in original]
    from_peak = distances_from(G_Q, G_Q.node_of_basis(record.final_peak))
    peak_to_original = min(from_peak[i] for i in original_nodes)
    inside = G_Q.graph.subgraph(silo_nodes)
    ground = [G_Q.node_of_basis(basis) for basis in record.ground]
    ground_to_silo, ground_pairwise = 0, 0
    for g in ground:
        lengths = nx.single_source_shortest_path_length(inside, g)
        if len(lengths) != len(silo_nodes):
            raise RecordInconsistent("cyclic silo is disconnected")
        ground_to_silo = max(ground_to_silo, max(lengths.values()))
        ground_pairwise = max(ground_pairwise, max(lengths[h] for h in ground))
    rounds = record.r * record.d * (record.d - 1)
    return CyclicSiloDistances(peak_to_original, rounds + 1, ground_to_silo, rounds, ground_pairwise)


@dataclass(frozen=True)
class EncodingGrowth:
    lengths: Tuple[int, ...]
    bound: int
    monotone: bool

    @property
    def within_bound(self) -> bool:
        return max(self.lengths, default=0) <= self.bound


def encoding_growth_report(record: CyclicSiloRecord, constant: int = 64) -> EncodingGrowth:
    """
    Per-truncation max encoding length of the entries of A and b

    The soft bound is constant * L^3 * r, with L the longest entry of the
    input polytope.
    """
    lengths = record.encoding_lengths
    monotone = all(a <= b for a, b in zip(lengths, lengths[1:]))
    return EncodingGrowth(lengths, constant * record.base_length ** 3 * record.r, monotone)


def dyadic_denominators(base_graph: PolytopeGraph, graph: PolytopeGraph, truncations: int) -> bool:
    """
    True when every vertex denominator divides 2^truncations times the lcm of
    the input's vertex denominators
    """
    base = lcm(*(x.denominator for point in base_graph.points for x in point))
    allowed = base * 2 ** truncations
    return all(allowed % x.denominator == 0 for point in graph.points for x in point)


# Distance to diameter

@dataclass(frozen=True)
class ReductionOutput:
    polytope: HPolytope
    K: int
    r: int
    r_min: int
    peak_pair: Tuple[LabelSet, LabelSet]
    endpoints: Tuple[LabelSet, LabelSet]
    base_distance: int
    base_diameter: int
    records: Tuple[CyclicSiloRecord, CyclicSiloRecord] = field(repr=False)

    @property
    def forced(self) -> bool:
        return self.r < self.r_min

    @property
    def predicted_diameter(self) -> int:
        return self.base_distance + self.K


def diameter_reduction(P: HPolytope, u, v, r: Optional[int] = None, force: bool = False,
                       budget: Optional[Budget] = None,
                       graph: Optional[PolytopeGraph] = None) -> ReductionOutput:
    """
    Cyclic-silo P at u and then at v

    The diameter of the result is d_P(u, v) + 2 r d (d-1) whenever
    r >= max(diam(P), 6); the two final peaks attain it.

    Args:
        P: A simple polytope of dimension at least 3
        u, v: Distinct vertices
        r: Rounds per cyclic silo (default max(diam(P), 6))
        force: Allow r below max(diam(P), 6)
        budget: Caps for computing diam(P)
        graph: A prebuilt graph of P

    Raises:
        SameVertex: if u and v coincide
        RTooSmall: if r < max(diam(P), 6) without force
    """
    _require_dimension(P)
    budget = resolve_budget(budget)
    u_basis = _labels_of(P, resolve_basis(P, u))
    v_basis = _labels_of(P, resolve_basis(P, v))
    if u_basis == v_basis:
        raise SameVertex("u and v are the same vertex")
    G = graph if graph is not None else build_graph(P, budget)
    base_diameter = diameter(G, budget).value
    r_min = max(base_diameter, 6)
    if r is None:
        r = r_min
    elif r < 1:
        raise MalformedInput(f"r must be positive, got {r}")
    elif r < r_min and not force:
        raise RTooSmall(f"r={r} is below max(diam(P), 6) = {r_min}", r_min=r_min)
    base_distance = distance(G, G.node_of_basis(u_basis), G.node_of_basis(v_basis)).length
    first, record_u = cyclic_silo(P, u_basis, r)
    Q, record_v = cyclic_silo(first, v_basis, r)
    K = 2 * r * P.dim * (P.dim - 1)
    logger.info("Reduction: r=%d, K=%d, d_P(u,v)=%d, Q has %d rows", r, K, base_distance, Q.num_rows)
    return ReductionOutput(Q, K, r, r_min, (record_u.final_peak, record_v.final_peak), (u_basis, v_basis),
                           base_distance, base_diameter, (record_u, record_v))


@dataclass(frozen=True)
class ReductionCheck:
    diameter: int
    predicted: int
    peak_distance: int
    witness: Tuple[int, int]

    @property
    def holds(self) -> bool:
        return self.diameter == self.predicted and self.peak_distance == self.predicted


def verify_reduction(output: ReductionOutput, budget: Optional[Budget] = None,
                     graph: Optional[PolytopeGraph] = None) -> ReductionCheck:
    """
    All-pairs BFS on Q against d_P(u, v) + K

    Raises:
        FormulaMismatch: if the formula fails for an unforced r (only logged when r was forced)
    """
    G = graph if graph is not None else build_graph(output.polytope, budget)
    result = diameter(G, budget)
    p_u, p_v = (G.node_of_basis(peak) for peak in output.peak_pair)
    peak_distance = distance(G, p_u, p_v).length
    check = ReductionCheck(result.value, output.predicted_diameter, peak_distance, result.pair)
    if not check.holds:
        message = (f"diam(Q)={check.diameter}, peak distance {peak_distance}, "
                   f"predicted {check.predicted} at r={output.r}")
        if output.forced:
            logger.warning("Formula fails under forced r: %s", message)
        else:
            raise FormulaMismatch(message, diameter=check.diameter, predicted=check.predicted)
    elif output.forced:
        logger.info("Formula holds under forced r=%d", output.r)
    return check


@dataclass(frozen=True)
class ReductionDistances:
    max_increase: int
    peak_distance: int
    expected_peak_distance: int

    @property
    def ok(self) -> bool:
        return self.max_increase <= 6 and self.peak_distance == self.expected_peak_distance


def reduction_distance_report(P: HPolytope, output: ReductionOutput, budget: Optional[Budget] = None,
                              base_graph: Optional[PolytopeGraph] = None,
                              graph: Optional[PolytopeGraph] = None) -> ReductionDistances:
    """Compare d_Q with d_P on the vertices of P that were not siloed"""
    G_P = base_graph if base_graph is not None else build_graph(P, budget)
    G_Q = graph if graph is not None else build_graph(output.polytope, budget)
    kept = [basis.label_set for basis in G_P.bases if basis.label_set not in output.endpoints]
    increase = 0
    for s in kept:
        in_p = distances_from(G_P, G_P.node_of_basis(s))
        in_q = distances_from(G_Q, G_Q.node_of_basis(s))
        for t in kept:
            increase = max(increase, in_q[G_Q.node_of_basis(t)] - in_p[G_P.node_of_basis(t)])
    p_u, p_v = (G_Q.node_of_basis(peak) for peak in output.peak_pair)
    return ReductionDistances(increase, distance(G_Q, p_u, p_v).length, output.predicted_diameter)
