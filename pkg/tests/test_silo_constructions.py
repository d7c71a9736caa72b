#!/usr/bin/env python3
"""
Test script for truncations, silos and cyclic silos

Checks the generating-function bookkeeping, the silo graph G_d, cyclic silo
distances and the exact diameter of the reduction on the cube.
"""

import sys
from fractions import Fraction

import networkx as nx
from colorama import init

from polytope_tools.errors import BasisNotPresent, DimensionTooSmall, InvalidOrder, RTooSmall, SameVertex
from polytope_tools.polytope_core import build_graph, diameter, unit_cube
from polytope_tools.silo_constructions import (
    check_silo_isomorphism,
    cyclic_silo,
    cyclic_silo_distances,
    diameter_reduction,
    dyadic_denominators,
    encoding_growth_report,
    generating_function,
    next_silo_tag,
    predict_silo_gf,
    predict_truncation_gf,
    reduction_distance_report,
    silo,
    silo_graph,
    silo_graph_path_bounds,
    silo_with_details,
    truncate,
    verify_reduction,
    verify_silo_isomorphism,
)
from tests.fixtures import cube, origin_basis, pb, run_test_functions, square, top_basis

# Initialize colorama
init(autoreset=True)


def test_truncate_origin_of_cube():
    T = truncate(cube(), (0, 0, 0))
    assert T.num_rows == 7
    assert T.labels[-1] == "t:7"
    assert T.A[-1] == (-1, -1, -1)
    assert T.b[-1] == Fraction(-1, 2)
    assert not T.contains((0, 0, 0))
    assert T.contains((Fraction(1, 2), 0, 0))


def test_truncation_gf_on_every_cube_vertex():
    P = cube()
    G = build_graph(P)
    f = generating_function(P, graph=G)
    assert len(f) == 8 and f.multiplicity_free
    for basis in G.bases:
        T = truncate(P, basis.label_set, label="cut")
        assert predict_truncation_gf(f, basis.label_set, "cut") == generating_function(T)


def test_truncation_gf_on_pb():
    P = pb(1, 1)
    G = build_graph(P)
    f = generating_function(P, graph=G)
    for basis in G.bases[:4]:
        T = truncate(P, basis.label_set)
        assert predict_truncation_gf(f, basis.label_set, T.labels[-1]) == generating_function(T)


def test_truncation_gf_missing_basis():
    f = generating_function(cube())
    try:
        predict_truncation_gf(f, ["lo:1", "hi:1", "lo:2"], "cut")
        raise AssertionError("absent basis was accepted")
    except BasisNotPresent:
        pass


def test_silo_closed_form():
    for d in (3, 4):
        P = unit_cube(d)
        result = silo_with_details(P, origin_basis(d))
        assert result.polytope.num_rows == P.num_rows + d
        assert result.y_labels == tuple(f"y:1:{k}" for k in range(1, d + 1))
        predicted = predict_silo_gf(generating_function(P), result.order, result.y_labels)
        assert predicted == generating_function(result.polytope)


def test_silo_isomorphism():
    P = cube()
    result = silo_with_details(P, origin_basis(3))
    assert check_silo_isomorphism(result).ok
    assert verify_silo_isomorphism(P, top_basis(3), ["hi:3", "hi:1", "hi:2"]).ok
    assert verify_silo_isomorphism(unit_cube(4), origin_basis(4)).ok


def test_silo_isomorphism_on_knapsack_gadget():
    P = pb(1, 1)
    assert P.dim == 4
    assert verify_silo_isomorphism(P, origin_basis(4)).ok


def test_double_truncation():
    P = cube()
    f = generating_function(P)
    once = truncate(P, origin_basis(3), label="cut:1")
    twice = truncate(once, top_basis(3), label="cut:2")
    assert twice.num_rows == 8
    G = build_graph(twice)
    assert len(G) == 12
    assert all(len(nbrs) == 3 for nbrs in G.adjacency)
    predicted = predict_truncation_gf(predict_truncation_gf(f, origin_basis(3), "cut:1"), top_basis(3), "cut:2")
    assert predicted == generating_function(twice, graph=G)


def test_silo_errors():
    try:
        silo(cube(), origin_basis(3), ["lo:1", "lo:2", "hi:3"])
        raise AssertionError("order outside the basis was accepted")
    except InvalidOrder:
        pass
    try:
        silo(square(), origin_basis(2))
        raise AssertionError("silo in dimension 2")
    except DimensionTooSmall:
        pass


def test_silo_tags():
    P = cube()
    assert next_silo_tag(P) == 1
    once = silo(P, origin_basis(3))
    assert next_silo_tag(once) == 2
    twice = silo(once, top_basis(3))
    assert {"y:2:1", "y:2:2", "y:2:3"} <= set(twice.labels)


def test_silo_graph_shape():
    for d in range(3, 7):
        G = silo_graph(d)
        assert G.number_of_nodes() == d * (d - 1)
        assert nx.is_connected(G)
    try:
        silo_graph(2)
        raise AssertionError("G_2 was built")
    except DimensionTooSmall:
        pass


def test_silo_graph_path_bounds():
    for d in range(3, 11):
        bounds = silo_graph_path_bounds(d)
        assert bounds.ok, (d, bounds.worst)


def test_cyclic_silo_one_round():
    P = cube()
    Q, record = cyclic_silo(P, origin_basis(3), 1, retain=True)
    assert len(record.peaks) == 4
    assert len(record.layers) == 3
    assert record.truncations == 9
    assert Q.num_rows == P.num_rows + 9
    assert len(record.polytopes) == 4
    base_graph = build_graph(P)
    G = build_graph(Q)
    report = cyclic_silo_distances(P, Q, record, base_graph=base_graph, graph=G)
    assert report.ok, report
    assert report.lower_bound == 7
    assert dyadic_denominators(base_graph, G, record.truncations)
    assert diameter(G).value >= report.peak_to_original


def test_cyclic_silo_two_rounds():
    P = cube()
    Q, record = cyclic_silo(P, origin_basis(3), 2)
    report = cyclic_silo_distances(P, Q, record)
    assert report.ok, report
    assert report.upper_bound == 12
    growth = encoding_growth_report(record)
    assert growth.within_bound
    assert len(growth.lengths) == 18


def test_reduction_refuses_bad_arguments():
    P = cube()
    try:
        diameter_reduction(P, origin_basis(3), (0, 0, 0))
        raise AssertionError("u == v was accepted")
    except SameVertex:
        pass
    try:
        diameter_reduction(P, origin_basis(3), top_basis(3), r=2)
        raise AssertionError("r=2 was accepted without force")
    except RTooSmall:
        pass


def test_reduction_on_cube():
    P = cube()
    base_graph = build_graph(P)
    output = diameter_reduction(P, origin_basis(3), top_basis(3), graph=base_graph)
    assert (output.r, output.K) == (6, 72)
    assert output.predicted_diameter == 75
    assert not output.forced
    G = build_graph(output.polytope)
    check = verify_reduction(output, graph=G)
    assert check.holds
    assert check.diameter == 75
    assert {check.witness[0], check.witness[1]} <= set(range(len(G)))
    spread = reduction_distance_report(P, output, base_graph=base_graph, graph=G)
    assert spread.ok, spread


def test_forced_reduction_does_not_raise():
    output = diameter_reduction(cube(), origin_basis(3), top_basis(3), r=1, force=True)
    assert output.forced
    assert output.K == 12
    check = verify_reduction(output)
    assert check.predicted == 15


def main():
    """Run all tests"""
    tests = [
        test_truncate_origin_of_cube,
        test_truncation_gf_on_every_cube_vertex,
        test_truncation_gf_on_pb,
        test_truncation_gf_missing_basis,
        test_silo_closed_form,
        test_silo_isomorphism,
        test_silo_isomorphism_on_knapsack_gadget,
        test_double_truncation,
        test_silo_errors,
        test_silo_tags,
        test_silo_graph_shape,
        test_silo_graph_path_bounds,
        test_cyclic_silo_one_round,
        test_cyclic_silo_two_rounds,
        test_reduction_refuses_bad_arguments,
        test_reduction_on_cube,
        test_forced_reduction_does_not_raise,
    ]
    return run_test_functions("silo construction tests", tests)


if __name__ == "__main__":
    sys.exit(main())
