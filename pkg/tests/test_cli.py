#!/usr/bin/env python3
"""
Test script for the polydist command line

Runs polydist.main on small inputs, reading the JSON it writes with --out.
"""

import contextlib
import io
import json
import logging
import os
import sys
import tempfile

from colorama import init

import polydist
from polytope_tools.serialization import polytope_to_dict, save_json
from tests.fixtures import cube, run_test_functions, square

# Initialize colorama
init(autoreset=True)


def run(tmp, *argv):
    """Run the CLI with output and log under tmp; returns (exit code, payload or None)"""
    out = os.path.join(tmp, "out.json")
    if os.path.exists(out):
        os.remove(out)
    code = polydist.main([*argv, "--out", out, "--log-file", os.path.join(tmp, "polydist.log")])
    for handler in logging.root.handlers[:]:
        handler.close()
        logging.root.removeHandler(handler)
    if not os.path.exists(out):
        return code, None
    with open(out) as f:
        return code, json.load(f)


def write_cube(tmp):
    path = os.path.join(tmp, "cube.json")
    save_json(polytope_to_dict(cube()), path)
    return path


def test_gen_knapsack():
    with tempfile.TemporaryDirectory() as tmp:
        code, payload = run(tmp, "gen-knapsack", "--weights", "1,1")
        assert code == 0
        assert payload["polytope"]["dim"] == 4
        assert payload["threshold"] == 3
        assert payload["endpoints"]["start"]["point"] == ["0", "0", "0", "5/6"]
        assert payload["objective"]["epsilon"] == "1/5"


def test_odd_sum_is_bad_input():
    with tempfile.TemporaryDirectory() as tmp:
        code, payload = run(tmp, "gen-knapsack", "--weights", "1,2")
        assert code == 2
        assert payload is None


def test_distance_with_mixed_vertex_specs():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, payload = run(tmp, "distance", P, "--from", "lo:1,lo:2,lo:3", "--to", "1,1,1", "--k", "2")
        assert code == 0
        assert payload["distance"] == 3
        assert payload["within_k"] is False
        assert payload["path"]["points"][-1] == ["1", "1", "1"]


def test_unknown_vertex_is_bad_input():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, _ = run(tmp, "distance", P, "--from", "1/2,0,0", "--to", "#0")
        assert code == 2
        code, _ = run(tmp, "diameter", os.path.join(tmp, "missing.json"))
        assert code == 2


def test_diameter_and_manifest():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        manifest = os.path.join(tmp, "manifest.json")
        code, payload = run(tmp, "diameter", P, "--manifest", manifest)
        assert code == 0
        assert (payload["diameter"], payload["hirsch"], payload["edges"]) == (3, 3, 12)
        assert payload["within_hirsch"]
        assert payload["redundant_rows"] == []
        with open(manifest) as f:
            record = json.load(f)
        assert record["command"] == "diameter"
        assert record["outputs"]["diameter"] == 3
        assert len(record["input_digest"]) == 64


def test_silo_graph_formats():
    with tempfile.TemporaryDirectory() as tmp:
        code, payload = run(tmp, "silo-graph", "--d", "4")
        assert code == 0
        assert len(payload["nodes"]) == 12
        code, payload = run(tmp, "silo-graph", "--d", "3", "--format", "edges")
        assert code == 0
        assert all(" -- " in line for line in payload["lines"])


def test_budget_exit_code():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, _ = run(tmp, "diameter", P, "--max-relaxations", "5")
        assert code == 3


def test_quick_rock_verification():
    with tempfile.TemporaryDirectory() as tmp:
        code, payload = run(tmp, "verify", "--scope", "rock", "--quick")
        assert code == 0
        assert payload["passed"]
        assert payload["claims"]


def test_paper_suite_command_name():
    with tempfile.TemporaryDirectory() as tmp:
        code, payload = run(tmp, "verify-paper", "--scope", "rock", "--quick")
        assert code == 0
        assert payload["scope"] == "rock"
        assert payload["passed"]


def test_monotone_distance_on_gadget():
    with tempfile.TemporaryDirectory() as tmp:
        code, generated = run(tmp, "gen-knapsack", "--weights", "1,1")
        assert code == 0
        path = os.path.join(tmp, "pb.json")
        save_json(generated["polytope"], path)
        c = ",".join(generated["objective"]["c"])
        start = ",".join(generated["endpoints"]["start"]["point"])
        stderr = io.StringIO()
        with contextlib.redirect_stderr(stderr):
            code, payload = run(tmp, "monotone-distance", path, "--c", c, "--start", start, "--k", "3")
        assert code == 0
        assert payload["length"] == 3
        assert payload["within_k"] is True
        assert payload["path"]["points"][0] == generated["endpoints"]["start"]["point"]
        assert "equal objective" in stderr.getvalue()


def test_reduce_diameter_on_cube():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, payload = run(tmp, "reduce-diameter", P, "--u", "0,0,0", "--v", "1,1,1", "--r", "2")
        assert code == 2
        assert payload is None
        code, payload = run(tmp, "reduce-diameter", P, "--u", "0,0,0", "--v", "1,1,1", "--r", "2",
                            "--force", "--verify")
        assert code == 0
        assert payload["forced"] is True
        assert (payload["r"], payload["r_min"], payload["K"]) == (2, 6, 24)
        assert payload["predicted_diameter"] == 27
        assert payload["verified"]["diameter"] == 27
        assert payload["verified"]["holds"]


def test_cyclic_silo_check():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, payload = run(tmp, "cyclic-silo", P, "--vertex", "0,0,0", "--r", "1", "--check")
        assert code == 0
        assert payload["distances"]["ok"]
        assert payload["distances"]["lower_bound"] == 7
        assert len(payload["polytope"]["b"]) == 15
        assert payload["encoding"]["within_bound"]


def test_truncate_and_silo_commands():
    with tempfile.TemporaryDirectory() as tmp:
        P = write_cube(tmp)
        code, payload = run(tmp, "truncate", P, "--vertex", "0,0,0")
        assert code == 0
        assert payload["new_row"] == "t:7"
        assert len(payload["polytope"]["A"]) == 7
        code, payload = run(tmp, "silo", P, "--vertex", "lo:1,lo:2,lo:3", "--order", "lo:2,lo:1,lo:3")
        assert code == 0
        assert payload["order"] == ["lo:2", "lo:1", "lo:3"]
        assert payload["y_labels"] == ["y:1:1", "y:1:2", "y:1:3"]
        assert len(payload["polytope"]["A"]) == 9
        code, _ = run(tmp, "silo", P, "--vertex", "0,0,0", "--order", "lo:1,lo:2,hi:3")
        assert code == 2


def test_rock_commands():
    with tempfile.TemporaryDirectory() as tmp:
        P = os.path.join(tmp, "square.json")
        save_json(polytope_to_dict(square()), P)
        ball = ("--center", "1/2,1/2", "--epsilon", "1/2")
        code, payload = run(tmp, "rock-build", P, *ball)
        assert code == 0
        assert payload["hop_bound"] == 3
        assert payload["extension"]["apex"] == ["1/2", "1/2", "1"]
        code, payload = run(tmp, "rock-path", P, *ball, "--from", "#0")
        assert code == 0
        assert payload["bound"] == 3 and payload["within_bound"]
        assert payload["path"]["points"][-1] == ["1/2", "1/2", "1"]
        code, payload = run(tmp, "rock-path", P, *ball, "--from", "#0", "--to", "#1")
        assert code == 0
        assert payload["bound"] == 6 and payload["within_bound"]
        code, _ = run(tmp, "rock-build", P, "--center", "1/2,1/2", "--epsilon", "1")
        assert code == 2


def main():
    """Run all tests"""
    tests = [
        test_gen_knapsack,
        test_odd_sum_is_bad_input,
        test_distance_with_mixed_vertex_specs,
        test_unknown_vertex_is_bad_input,
        test_diameter_and_manifest,
        test_silo_graph_formats,
        test_budget_exit_code,
        test_quick_rock_verification,
        test_paper_suite_command_name,
        test_monotone_distance_on_gadget,
        test_reduce_diameter_on_cube,
        test_cyclic_silo_check,
        test_truncate_and_silo_commands,
        test_rock_commands,
    ]
    return run_test_functions("command line tests", tests)


if __name__ == "__main__":
    sys.exit(main())
