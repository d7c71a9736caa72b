#!/usr/bin/env python3
"""
Test script for polytope core

Covers basis enumeration, simplicity, graph construction by scan and by pivot
walk, distances, diameters, monotone paths and facet classification.
"""

import random
import sys
import warnings
from fractions import Fraction
from itertools import combinations

from colorama import init

from polytope_tools.config import DEFAULT_BUDGET
from polytope_tools.errors import (
    BudgetExceeded,
    DimensionTooSmall,
    MalformedInput,
    NotAVertex,
    NotSimple,
    TiedObjectiveEdge,
    TimeBudgetExceeded,
)
from polytope_tools.polytope_core import (
    FACET_DEFINING,
    REDUNDANT,
    HPolytope,
    build_graph,
    diameter,
    distance,
    distances_from,
    enumerate_feasible_bases,
    facet_status,
    is_simple,
    pivot_distance,
    pivot_neighbors,
    resolve_basis,
    shortest_monotone_path,
)
from polytope_tools.silo_constructions import truncate
from tests.fixtures import cube, cube_with_redundant_row, origin_basis, pb, square, square_pyramid, top_basis, \
    run_test_functions

# Initialize colorama
init(autoreset=True)


def test_rejects_bad_rows():
    for rows in ([("a", (0, 0), 1)], [("a", (1, 0), 1), ("a", (0, 1), 1)]):
        try:
            HPolytope.from_rows(rows)
        except MalformedInput:
            continue
        raise AssertionError(f"{rows} was accepted")


def test_enumerate_square_and_cube():
    assert len(enumerate_feasible_bases(square())) == 4
    found = enumerate_feasible_bases(cube())
    assert len(found) == 8
    assert {point for _, point in found} == {
        tuple(Fraction(x) for x in (a, b, c)) for a in (0, 1) for b in (0, 1) for c in (0, 1)}
    assert [basis.indices for basis, _ in found] == sorted(basis.indices for basis, _ in found)


def test_enumerate_errors():
    tiny = HPolytope.from_rows([("a", (1, 0, 0), 1), ("b", (0, 1, 0), 1)])
    try:
        enumerate_feasible_bases(tiny)
        raise AssertionError("2 rows in dimension 3 were enumerated")
    except DimensionTooSmall:
        pass
    try:
        enumerate_feasible_bases(cube(), DEFAULT_BUDGET.with_overrides(max_bases=10))
        raise AssertionError("C(6,3) = 20 passed a cap of 10")
    except TimeBudgetExceeded:
        pass


def test_simplicity():
    assert is_simple(cube()).simple
    assert is_simple(pb(2, 1, 1)).simple
    report = is_simple(square_pyramid())
    assert not report.simple
    assert report.witness.point == (Fraction(1, 2), Fraction(1, 2), Fraction(1))
    assert len(report.witness.tight_labels) == 4
    try:
        build_graph(square_pyramid(), method="scan")
        raise AssertionError("graph of a pyramid was built")
    except NotSimple:
        pass


def test_cube_graph():
    G = build_graph(cube())
    assert len(G) == 8
    assert G.edge_count == 12
    assert all(len(nbrs) == 3 for nbrs in G.adjacency)
    for u, nbrs in enumerate(G.adjacency):
        for v in nbrs:
            assert len(G.bases[u].label_set ^ G.bases[v].label_set) == 2


def test_square_graph_is_a_cycle():
    G = build_graph(square())
    assert len(G) == 4
    assert sorted(len(nbrs) for nbrs in G.adjacency) == [2, 2, 2, 2]
    assert diameter(G).value == 2


def test_scan_and_walk_agree():
    for P in (cube(), pb(1, 1), pb(1, 1, 4), truncate(cube(), origin_basis(3))):
        scanned = build_graph(P, method="scan")
        walked = build_graph(P, method="walk")
        assert scanned.bases == walked.bases
        assert scanned.points == walked.points
        assert scanned.adjacency == walked.adjacency


def test_truncated_cube_has_a_triangle():
    T = truncate(cube(), origin_basis(3))
    G = build_graph(T)
    assert len(G) == 10
    new = [i for i, basis in enumerate(G.bases) if T.labels[-1] in basis.labels]
    assert len(new) == 3
    for u, v in combinations(new, 2):
        assert v in G.adjacency[u]


def test_pivot_neighbors_of_origin():
    P = cube()
    moves = pivot_neighbors(P, resolve_basis(P, origin_basis(3)))
    assert [P.labels[m.leaving] for m in moves] == ["lo:1", "lo:2", "lo:3"]
    assert [P.labels[m.entering] for m in moves] == ["hi:1", "hi:2", "hi:3"]
    assert all(m.step == 1 for m in moves)


def test_resolve_basis_forms():
    P = cube()
    by_labels = resolve_basis(P, {"lo:1", "hi:2", "lo:3"})
    by_point = resolve_basis(P, (0, 1, 0))
    assert by_labels == by_point
    for bad in ((Fraction(1, 2), 0, 0), ["lo:1", "hi:1", "lo:2"], (2, 0, 0)):
        try:
            resolve_basis(P, bad)
            raise AssertionError(f"{bad} resolved")
        except NotAVertex:
            pass


def test_cube_distances():
    G = build_graph(cube())
    u = G.node_of_point((0, 0, 0))
    v = G.node_of_point((1, 1, 1))
    path = distance(G, u, v)
    assert path.length == 3
    assert len(path.vertices) == 4
    for a, b in zip(path.vertices, path.vertices[1:]):
        assert b in G.adjacency[a]
    assert distance(G, u, u).length == 0
    assert diameter(G).value == 3


def test_distance_is_a_metric():
    for P in (cube(), pb(1, 1), truncate(cube(), origin_basis(3))):
        G = build_graph(P)
        table = [distances_from(G, s) for s in range(len(G))]
        for a in range(len(G)):
            assert table[a][a] == 0
            for b in range(len(G)):
                assert table[a][b] == table[b][a]
                for c in range(len(G)):
                    assert table[a][c] <= table[a][b] + table[b][c]


def test_diameter_matches_random_pairs():
    G = build_graph(pb(1, 1, 4))
    value = diameter(G).value
    rng = random.Random(7)
    sampled = max(distance(G, rng.randrange(len(G)), rng.randrange(len(G))).length for _ in range(100))
    assert sampled <= value
    result = diameter(G)
    assert distance(G, *result.pair).length == value


def test_diameter_budget():
    G = build_graph(cube())
    try:
        diameter(G, DEFAULT_BUDGET.with_overrides(max_relaxations=10))
        raise AssertionError("relaxation cap ignored")
    except BudgetExceeded:
        pass


def test_pb_endpoint_distance():
    P = pb(1, 1)
    G = build_graph(P)
    start = G.node_of_basis(["lo:1", "lo:2", "lo:3", "ks"])
    end = G.node_of_basis(["hi:1", "hi:2", "hi:3", "ks"])
    assert distance(G, start, end).length == 3
    assert diameter(G).value <= 8


def test_monotone_paths_on_cube():
    P = cube()
    G = build_graph(P)
    c = (1, 1, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TiedObjectiveEdge)
        origin = shortest_monotone_path(P, c, G.node_of_point((0, 0, 0)), graph=G)
        top = shortest_monotone_path(P, c, G.node_of_point((1, 1, 1)), graph=G)
    assert origin.length == 3
    assert top.length == 0
    values = [sum(G.points[i]) for i in origin.vertices]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_tied_edges_warn():
    P = cube()
    G = build_graph(P)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        path = shortest_monotone_path(P, (1, 0, 0), G.node_of_point((0, 0, 0)), graph=G)
    assert path.length == 1
    assert any(issubclass(w.category, TiedObjectiveEdge) for w in caught)


def test_pivot_distance():
    P = cube()
    assert pivot_distance(P, (1, 1, 1), origin_basis(3)) == 3
    assert pivot_distance(P, (1, 1, 1), top_basis(3)) == 0


def test_facet_status():
    assert set(facet_status(cube()).values()) == {FACET_DEFINING}
    status = facet_status(cube_with_redundant_row())
    assert status["slack"] == REDUNDANT
    assert sum(kind == FACET_DEFINING for kind in status.values()) == 6
    assert set(facet_status(truncate(cube(), origin_basis(3))).values()) == {FACET_DEFINING}


def main():
    """Run all tests"""
    tests = [
        test_rejects_bad_rows,
        test_enumerate_square_and_cube,
        test_enumerate_errors,
        test_simplicity,
        test_cube_graph,
        test_square_graph_is_a_cycle,
        test_scan_and_walk_agree,
        test_truncated_cube_has_a_triangle,
        test_pivot_neighbors_of_origin,
        test_resolve_basis_forms,
        test_cube_distances,
        test_distance_is_a_metric,
        test_diameter_matches_random_pairs,
        test_diameter_budget,
        test_pb_endpoint_distance,
        test_monotone_paths_on_cube,
        test_tied_edges_warn,
        test_pivot_distance,
        test_facet_status,
    ]
    return run_test_functions("polytope core tests", tests)


if __name__ == "__main__":
    sys.exit(main())
