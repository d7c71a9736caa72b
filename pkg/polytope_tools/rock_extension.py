"""
Rock extension module for Polydist

This module lifts a simple polytope P = {x : A x <= b} to
Q = {(x, z) : A x + y z <= b, z >= 0} around an interior point o, choosing y
row by row so that the vertices with positive z come in layers of growing
distance from the apex (o, 1). On such a Q, repeatedly stepping to the
neighbour closest to the apex reaches it in at most rows - dim steps.
"""

import logging
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .config import Budget, resolve_budget
from .errors import (
    BallNotInterior,
    GreedyStuck,
    GreedyTie,
    LayeringFailed,
    MalformedInput,
    NonUniqueMax,
    RecordInconsistent,
)
from .exact_linalg import (
    ZERO,
    Fraction,
    RatVector,
    dot,
    format_rational,
    format_vector,
    nullspace,
    squared_distance,
    squared_norm,
    to_rational,
    transpose,
    vector,
)
from .polytope_core import (
    HPolytope,
    PathResult,
    PolytopeGraph,
    build_graph,
    enumerate_feasible_bases,
    first_feasible_basis,
)

logger = logging.getLogger(__name__)

CAP_LABEL = "cap"
Z_LABEL = "z"


@dataclass(frozen=True)
class InteriorBall:
    center: RatVector
    radius2: Fraction

    @classmethod
    def from_radius(cls, center: Sequence, radius) -> "InteriorBall":
        radius = to_rational(radius)
        return cls(vector(center), radius * radius)


def check_interior_ball(P: HPolytope, ball: InteriorBall) -> None:
    """
    Raise BallNotInterior unless the open ball lies inside P

    Row k contains the ball when its slack s_k at the center is positive and
    s_k^2 >= radius2 * |A_k|^2.
    """
    if len(ball.center) != P.dim:
        raise MalformedInput(f"center has dimension {len(ball.center)}, polytope has {P.dim}")
    if ball.radius2 <= 0:
        raise BallNotInterior("ball radius must be positive")
    for k, label in enumerate(P.labels):
        slack = P.slack(k, ball.center)
        if slack <= 0 or slack * slack < ball.radius2 * squared_norm(P.A[k]):
            raise BallNotInterior(f"row {label!r} cuts the ball around {format_vector(ball.center)}",
                                  row=label)


@dataclass(frozen=True)
class RockExtension:
    """
    A lifted polytope with its layering

    layer_index is aligned with the nodes of graph: positive-z vertices carry
    the step k at which they appeared (the apex has d+1), vertices with z = 0
    carry m+1.
    """

    polytope: HPolytope
    base: HPolytope
    center: RatVector
    y: Dict[str, Fraction]
    row_order: Tuple[str, ...]
    layer_index: Tuple[int, ...]
    mu2: Tuple[Fraction, ...]
    apex_node: int
    graph: PolytopeGraph = field(repr=False, compare=False)

    @property
    def apex(self) -> RatVector:
        return self.center + (Fraction(1),)

    @property
    def hop_bound(self) -> int:
        """rows - dim of Q"""
        return self.polytope.num_rows - self.polytope.dim

    def apex_distance2(self, node: int) -> Fraction:
        return squared_distance(self.graph.points[node], self.apex)

    def as_dict(self) -> dict:
        return {
            "center": format_vector(self.center),
            "apex": format_vector(self.apex),
            "apex_node": self.apex_node,
            "row_order": list(self.row_order),
            "y": {label: format_rational(value) for label, value in self.y.items()},
            "layer_index": {str(node): k for node, k in enumerate(self.layer_index)},
            "mu2": [format_rational(value) for value in self.mu2],
        }


def _positively_dependent(normals: Sequence[RatVector]) -> bool:
    """True when the normals have a one-dimensional strictly positive dependence"""
    kernel = nullspace(transpose(normals), len(normals))
    if len(kernel) != 1:
        return False
    weights = kernel[0]
    return all(w > 0 for w in weights) or all(w < 0 for w in weights)


def _with_cap(P: HPolytope) -> HPolytope:
    """Append a strictly redundant row that closes a simplex with the first feasible basis"""
    basis = first_feasible_basis(P)
    normal = tuple(-sum((P.A[i][c] for i in basis), ZERO) for c in range(P.dim))
    vertices = [point for _, point in enumerate_feasible_bases(P)]
    offset = max(dot(normal, point) for point in vertices) + 1
    label = CAP_LABEL
    while P.has_label(label):
        label += "'"
    logger.info("No d+1 rows bound a simplex; adding redundant row %s", label)
    return P.add_row(normal, offset, label)


def _choose_simplex_rows(P: HPolytope, budget: Budget) -> Optional[Tuple[int, ...]]:
    checked = 0
    for rows in combinations(range(P.num_rows), P.dim + 1):
        checked += 1
        if checked > budget.max_bases:
            return None
        if _positively_dependent([P.A[i] for i in rows]):
            return rows
    return None


def _lift(P: HPolytope, rows: Sequence[int], y: Dict[int, Fraction], z_label: str) -> HPolytope:
    lifted = [(P.labels[i], P.A[i] + (y[i],), P.b[i]) for i in rows]
    lifted.append((z_label, (ZERO,) * P.dim + (Fraction(-1),), ZERO))
    return HPolytope.from_rows(lifted)


def _positive_vertices(Q: HPolytope, budget: Budget) -> Optional[Set[RatVector]]:
    """Vertices with z > 0, or None if one of them is degenerate"""
    points = set()
    for _, point in enumerate_feasible_bases(Q, budget):
        if point[-1] <= 0 or point in points:
            continue
        if len(Q.tight_rows(point)) != Q.dim:
            return None
        points.add(point)
    return points


def build_rock_extension(P: HPolytope, ball: InteriorBall, budget: Optional[Budget] = None) -> RockExtension:
    """
    Lift P around the center of an interior ball

    The first d+1 rows bound a simplex (a redundant cap row is appended when
    no such rows exist) and get y_k equal to their slack at the center, so the
    apex is tight on all of them. Every later row tries y_k = s_k - s_k/2^t
    for t from budget.layer_search_depth down to 1 and keeps the first value
    for which the previous positive-z vertices stay strictly feasible, every
    new positive-z vertex is simple and strictly farther from the apex than
    all earlier ones, and all of them stay inside the ball around the apex.

    With a cap row Q has rows(P) + 2 rows instead of rows(P) + 1: the square
    lifts to 6 rows, not 5, and the cube to 8.

    Raises:
        BallNotInterior: if the ball is not inside P
        LayeringFailed: if no candidate y_k validates for some row
        NotSimple: if the final lift is degenerate
    """
    budget = resolve_budget(budget)
    check_interior_ball(P, ball)
    base = P
    simplex = _choose_simplex_rows(base, budget)
    if simplex is None:
        base = _with_cap(P)
        simplex = _choose_simplex_rows(base, budget)
        if simplex is None:
            raise LayeringFailed("no d+1 rows bound a simplex, even with a cap row")
    z_label = Z_LABEL
    while base.has_label(z_label):
        z_label += "'"
    o = ball.center
    apex = o + (Fraction(1),)
    slack = {i: base.slack(i, o) for i in range(base.num_rows)}
    y = {i: slack[i] for i in simplex}
    chosen = list(simplex)
    layer_of: Dict[RatVector, int] = {apex: base.dim + 1}
    previous = {apex}
    watermark = ZERO
    mu2 = [watermark]
    rest = [i for i in range(base.num_rows) if i not in simplex]
    for k, row in enumerate(rest, start=base.dim + 2):
        s = slack[row]
        for t in range(budget.layer_search_depth, 0, -1):
            candidate_y = s - s / 2 ** t
            if any(dot(base.A[row], p[:-1]) + candidate_y * p[-1] >= base.b[row] for p in previous):
                continue
            y[row] = candidate_y
            vertices = _positive_vertices(_lift(base, chosen + [row], y, z_label), budget)
            if vertices is None or not previous <= vertices:
                continue
            distances = {p: squared_distance(p, apex) for p in vertices}
            if any(distances[p] <= watermark for p in vertices - previous):
                continue
            if any(value >= ball.radius2 for value in distances.values()):
                continue
            break
        else:
            y.pop(row, None)
            raise LayeringFailed(f"no y for row {base.labels[row]!r} passed validation", step=k,
                                 row=base.labels[row])
        chosen.append(row)
        for p in vertices - previous:
            layer_of[p] = k
        previous = vertices
        watermark = max(distances.values())
        mu2.append(watermark)
        logger.debug("Row %s: y=%s, %d positive-z vertices", base.labels[row], candidate_y, len(vertices))
    Q = _lift(base, chosen, y, z_label)
    G = build_graph(Q, budget)
    top = base.num_rows + 1
    layers = []
    for point in G.points:
        if point[-1] > 0:
            if point not in layer_of:
                raise RecordInconsistent(f"vertex {format_vector(point)} was never recorded")
            layers.append(layer_of[point])
        else:
            layers.append(top)
    extension = RockExtension(Q, base, o, {base.labels[i]: y[i] for i in chosen},
                              tuple(base.labels[i] for i in chosen), tuple(layers), tuple(mu2),
                              find_apex_by_enumeration(G), G)
    _verify_extension(extension, budget)
    logger.info("Rock extension built: %d rows, %d vertices", Q.num_rows, len(G))
    return extension


def _verify_extension(R: RockExtension, budget: Budget) -> None:
    G = R.graph
    if G.points[R.apex_node] != R.apex:
        raise RecordInconsistent(f"the z-maximiser is {format_vector(G.points[R.apex_node])}, not (o,1)")
    ground = {point[:-1] for point in G.points if point[-1] == 0}
    original = {point for _, point in enumerate_feasible_bases(R.base, budget)}
    if ground != original:
        raise RecordInconsistent("vertices with z = 0 do not project onto the vertices of P")
    for node, k in enumerate(R.layer_index):
        if node != R.apex_node and not any(R.layer_index[n] < k for n in G.adjacency[node]):
            raise LayeringFailed(f"vertex {format_vector(G.points[node])} has no neighbour in a lower layer",
                                 layer=k)
    if not layer_separation(R):
        raise LayeringFailed("layers are not separated by distance to the apex")


def layer_separation(R: RockExtension) -> bool:
    """Each layer lies strictly farther from the apex than all lower layers"""
    by_layer: Dict[int, List[Fraction]] = {}
    for node, k in enumerate(R.layer_index):
        by_layer.setdefault(k, []).append(R.apex_distance2(node))
    farthest_below = None
    for k in sorted(by_layer):
        if farthest_below is not None and min(by_layer[k]) <= farthest_below:
            return False
        farthest_below = max(by_layer[k] + ([farthest_below] if farthest_below is not None else []))
    return True


def greedy_path_to_apex(R: RockExtension, start: int) -> PathResult:
    """
    Walk to the apex, always moving to the neighbour closest to it

    Raises:
        GreedyStuck: if no neighbour is strictly closer than the current vertex
    """
    G = R.graph
    path = [start]
    current = start
    while current != R.apex_node:
        here = R.apex_distance2(current)
        closer = [(R.apex_distance2(n), n) for n in G.adjacency[current] if R.apex_distance2(n) < here]
        if not closer:
            raise GreedyStuck(f"no neighbour of node {current} is closer to the apex", node=current)
        best = min(value for value, _ in closer)
        ties = sorted(n for value, n in closer if value == best)
        if len(ties) > 1:
            message = f"nodes {ties} are equally close to the apex; taking {ties[0]}"
            logger.warning(message)
            warnings.warn(message, GreedyTie, stacklevel=2)
        current = ties[0]
        path.append(current)
    return PathResult(tuple(path))


def path_between(R: RockExtension, u: int, v: int) -> PathResult:
    """Join the two greedy paths at the first vertex they share"""
    if u == v:
        return PathResult((u,))
    up = greedy_path_to_apex(R, u).vertices
    down = greedy_path_to_apex(R, v).vertices
    where = {node: i for i, node in enumerate(down)}
    for i, node in enumerate(up):
        if node in where:
            return PathResult(up[:i + 1] + tuple(reversed(down[:where[node]])))
    raise RecordInconsistent("greedy paths do not meet")


def find_apex_by_enumeration(target: Union[RockExtension, PolytopeGraph, HPolytope],
                             budget: Optional[Budget] = None) -> int:
    """
    Node index of the unique vertex with the largest last coordinate

    Raises:
        NonUniqueMax: if two vertices share the largest value
    """
    if isinstance(target, RockExtension):
        G = target.graph
    elif isinstance(target, PolytopeGraph):
        G = target
    else:
        G = build_graph(target, budget)
    top = max(point[-1] for point in G.points)
    winners = [i for i, point in enumerate(G.points) if point[-1] == top]
    if len(winners) != 1:
        raise NonUniqueMax(f"{len(winners)} vertices maximise z", nodes=winners)
    return winners[0]
