#!/usr/bin/env python3
"""
Test script for rock extensions

Builds the lift of the square and the cube around their centers and walks
greedy paths to the apex.
"""

import sys
import warnings
from fractions import Fraction
from itertools import combinations

from colorama import init

from polytope_tools.errors import BallNotInterior, GreedyTie, MalformedInput, NonUniqueMax
from polytope_tools.polytope_core import distance
from polytope_tools.rock_extension import (
    InteriorBall,
    build_rock_extension,
    check_interior_ball,
    find_apex_by_enumeration,
    greedy_path_to_apex,
    layer_separation,
    path_between,
)
from tests.fixtures import HALF, cube, run_test_functions, square

# Initialize colorama
init(autoreset=True)


def centered_ball(d):
    return InteriorBall.from_radius((HALF,) * d, HALF)


def test_interior_ball_checks():
    check_interior_ball(square(), centered_ball(2))
    for center, radius in (((HALF, HALF), 1), ((2, 0), Fraction(1, 10)), ((HALF, HALF), 0)):
        try:
            check_interior_ball(square(), InteriorBall.from_radius(center, radius))
            raise AssertionError(f"ball {center}, {radius} was accepted")
        except BallNotInterior:
            pass
    try:
        check_interior_ball(cube(), centered_ball(2))
        raise AssertionError("2-dimensional center accepted for the cube")
    except MalformedInput:
        pass


def test_square_extension():
    P = square()
    R = build_rock_extension(P, centered_ball(2))
    assert R.polytope.num_rows == P.num_rows + 2
    assert R.hop_bound == 3
    assert R.graph.points[R.apex_node] == (HALF, HALF, 1)
    assert find_apex_by_enumeration(R) == R.apex_node
    assert layer_separation(R)
    ground = [point for point in R.graph.points if point[-1] == 0]
    assert len(ground) == 4


def test_cube_extension():
    P = cube()
    R = build_rock_extension(P, centered_ball(3))
    assert R.polytope.num_rows == P.num_rows + 2
    assert R.hop_bound == 4
    assert R.apex == (HALF, HALF, HALF, 1)
    assert layer_separation(R)
    assert R.as_dict()["apex"] == ["1/2", "1/2", "1/2", "1"]


def test_greedy_paths_reach_the_apex():
    for P, d in ((square(), 2), (cube(), 3)):
        R = build_rock_extension(P, centered_ball(d))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GreedyTie)
            for node in range(len(R.graph)):
                path = greedy_path_to_apex(R, node)
                assert path.vertices[-1] == R.apex_node
                assert path.length <= R.hop_bound
                distances = [R.apex_distance2(n) for n in path.vertices]
                assert all(a > b for a, b in zip(distances, distances[1:]))


def test_paths_between_vertices():
    R = build_rock_extension(square(), centered_ball(2))
    G = R.graph
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GreedyTie)
        for u, v in combinations(range(len(G)), 2):
            path = path_between(R, u, v)
            assert (path.vertices[0], path.vertices[-1]) == (u, v)
            assert path.length <= 2 * R.hop_bound
            for a, b in zip(path.vertices, path.vertices[1:]):
                assert b in G.adjacency[a]
    assert path_between(R, 0, 0).length == 0


def test_greedy_paths_descend_through_layers():
    for P, d in ((square(), 2), (cube(), 3)):
        R = build_rock_extension(P, centered_ball(d))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GreedyTie)
            for node in range(len(R.graph)):
                layers = [R.layer_index[n] for n in greedy_path_to_apex(R, node).vertices]
                assert all(a > b for a, b in zip(layers, layers[1:])), (node, layers)


def test_off_center_apex():
    cases = [
        (square(), (Fraction(1, 3), HALF)),
        (cube(), (Fraction(2, 5), HALF, Fraction(3, 5))),
    ]
    for P, center in cases:
        R = build_rock_extension(P, InteriorBall.from_radius(center, Fraction(1, 3)))
        assert R.apex == center + (1,)
        assert R.graph.points[R.apex_node] == R.apex
        assert find_apex_by_enumeration(R) == R.apex_node
        assert layer_separation(R)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GreedyTie)
            for node in range(len(R.graph)):
                assert greedy_path_to_apex(R, node).length <= R.hop_bound


def test_greedy_is_never_shorter_than_bfs():
    R = build_rock_extension(cube(), centered_ball(3))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GreedyTie)
        for node in range(len(R.graph)):
            greedy = greedy_path_to_apex(R, node)
            assert distance(R.graph, node, R.apex_node).length <= greedy.length


def test_path_from_apex_reverses_greedy_path():
    R = build_rock_extension(square(), centered_ball(2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GreedyTie)
        for node in range(len(R.graph)):
            down = path_between(R, R.apex_node, node).vertices
            assert down == tuple(reversed(greedy_path_to_apex(R, node).vertices))


def test_apex_must_be_unique():
    try:
        find_apex_by_enumeration(cube())
        raise AssertionError("the top face of the cube has a unique maximiser")
    except NonUniqueMax:
        pass


def main():
    """Run all tests"""
    tests = [
        test_interior_ball_checks,
        test_square_extension,
        test_cube_extension,
        test_greedy_paths_reach_the_apex,
        test_paths_between_vertices,
        test_greedy_paths_descend_through_layers,
        test_off_center_apex,
        test_greedy_is_never_shorter_than_bfs,
        test_path_from_apex_reverses_greedy_path,
        test_apex_must_be_unique,
    ]
    return run_test_functions("rock extension tests", tests)


if __name__ == "__main__":
    sys.exit(main())
