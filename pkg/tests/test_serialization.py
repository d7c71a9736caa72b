#!/usr/bin/env python3
"""
Test script for JSON serialization
"""

import json
import os
import sys
import tempfile
from fractions import Fraction

from colorama import init

from polytope_tools.errors import MalformedInput
from polytope_tools.polytope_core import build_graph, distance
from polytope_tools.serialization import (
    edge_list_lines,
    graph_to_dict,
    load_polytope,
    path_to_dict,
    polytope_from_dict,
    polytope_to_dict,
    save_json,
)
from tests.fixtures import cube, pb, run_test_functions

# Initialize colorama
init(autoreset=True)


def test_polytope_document():
    P = pb(1, 1)
    data = polytope_to_dict(P)
    assert data["dim"] == 4
    assert data["b"][-1] == "5/4"
    assert polytope_from_dict(data) == P
    assert polytope_from_dict(json.loads(json.dumps(data))) == P


def test_default_labels_and_integers():
    P = polytope_from_dict({"A": [[1, 0], [0, 1], [-1, -1]], "b": [1, 1, "-1/2"]})
    assert P.labels == ("1", "2", "3")
    assert P.b[2] == Fraction(-1, 2)


def test_rejects_malformed_documents():
    bad = [
        [],
        {"A": [[1, 0]]},
        {"A": [[0.5, 0]], "b": [1]},
        {"A": [[1, 0]], "b": [1.0]},
        {"A": [[1, 0]], "b": [1], "dim": 3},
        {"A": [1, 0], "b": [1]},
    ]
    for data in bad:
        try:
            polytope_from_dict(data)
        except MalformedInput:
            continue
        raise AssertionError(f"{data} was accepted")


def test_load_errors():
    with tempfile.TemporaryDirectory() as tmp:
        missing = os.path.join(tmp, "missing.json")
        broken = os.path.join(tmp, "broken.json")
        with open(broken, "w") as f:
            f.write("{not json")
        for path in (missing, broken):
            try:
                load_polytope(path)
            except MalformedInput:
                continue
            raise AssertionError(f"{path} loaded")


def test_save_and_load():
    P = cube()
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "nested", "cube.json")
        save_json(polytope_to_dict(P), path)
        assert load_polytope(path) == P


def test_graph_and_path_documents():
    G = build_graph(cube())
    data = graph_to_dict(G)
    assert data["edges"] == 12
    assert len(data["nodes"]) == 8
    assert data["nodes"][0]["point"] == ["0", "0", "0"]
    path = distance(G, 0, len(G) - 1)
    document = path_to_dict(G, path)
    assert document["length"] == path.length
    assert len(document["bases"]) == path.length + 1
    assert path_to_dict(G, None) is None


def test_edge_list_lines():
    assert edge_list_lines([(0, 1), (1, 2)]) == ["0 -- 1", "1 -- 2"]
    assert edge_list_lines([((1, 2), (2, 1))], lambda n: f"{n[0]}{n[1]}") == ["12 -- 21"]


def main():
    """Run all tests"""
    tests = [
        test_polytope_document,
        test_default_labels_and_integers,
        test_rejects_malformed_documents,
        test_load_errors,
        test_save_and_load,
        test_graph_and_path_documents,
        test_edge_list_lines,
    ]
    return run_test_functions("serialization tests", tests)


if __name__ == "__main__":
    sys.exit(main())
