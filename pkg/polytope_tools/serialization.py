"""
Serialization module for Polydist

This module converts polytopes, graphs and paths to and from the JSON
documents the command line reads and writes. Every rational is written as a
"p/q" string; floats are never accepted.
"""

import json
import os
import sys
from typing import Any, Dict, List, Optional

from .errors import MalformedInput
from .exact_linalg import format_vector, vector
from .polytope_core import HPolytope, PathResult, PolytopeGraph


def polytope_to_dict(P: HPolytope) -> Dict[str, Any]:
    return {
        "dim": P.dim,
        "labels": list(P.labels),
        "A": [format_vector(row) for row in P.A],
        "b": format_vector(P.b),
    }


def _reject_floats(values, where: str) -> None:
    for value in values:
        if isinstance(value, float):
            raise MalformedInput(f"{where} contains the float {value!r}; write rationals as \"p/q\" strings")


def polytope_from_dict(data: Dict[str, Any]) -> HPolytope:
    """
    Parse the HPolytope JSON document

    Args:
        data: {"dim": d, "labels": [...], "A": [[...], ...], "b": [...]}

    Returns:
        The polytope

    Raises:
        MalformedInput: on missing keys, floats, or inconsistent sizes
    """
    if not isinstance(data, dict):
        raise MalformedInput("polytope document must be a JSON object")
    missing = [key for key in ("A", "b") if key not in data]
    if missing:
        raise MalformedInput(f"polytope document is missing {missing}")
    rows, rhs = data["A"], data["b"]
    if not isinstance(rows, list) or not isinstance(rhs, list):
        raise MalformedInput("A and b must be lists")
    for row in rows:
        if not isinstance(row, list):
            raise MalformedInput("every row of A must be a list")
        _reject_floats(row, "A")
    _reject_floats(rhs, "b")
    labels = data.get("labels") or [str(i + 1) for i in range(len(rows))]
    P = HPolytope(tuple(vector(row) for row in rows), vector(rhs), tuple(str(label) for label in labels))
    if "dim" in data and data["dim"] != P.dim:
        raise MalformedInput(f"declared dim {data['dim']} does not match {P.dim} columns")
    return P


def graph_to_dict(G: PolytopeGraph) -> Dict[str, Any]:
    """Adjacency lists plus vertex coordinates and bases"""
    return {
        "nodes": [
            {"index": i, "basis": list(basis.labels), "point": format_vector(point)}
            for i, (basis, point) in enumerate(zip(G.bases, G.points))
        ],
        "adjacency": [list(nbrs) for nbrs in G.adjacency],
        "edges": G.edge_count,
    }


def edge_list_lines(edges, name=str) -> List[str]:
    """GraphViz-style "u -- v" lines"""
    return [f"{name(u)} -- {name(v)}" for u, v in edges]


def path_to_dict(G: PolytopeGraph, path: Optional[PathResult]) -> Optional[Dict[str, Any]]:
    if path is None:
        return None
    return {
        "length": path.length,
        "nodes": list(path.vertices),
        "bases": [list(G.bases[i].labels) for i in path.vertices],
        "points": [format_vector(G.points[i]) for i in path.vertices],
    }


def load_json(file_path: str) -> Any:
    """
    Load a JSON document, turning I/O and syntax problems into MalformedInput

    Args:
        file_path: Path to the file, or "-" for stdin
    """
    try:
        if file_path == "-":
            return json.load(sys.stdin)
        with open(file_path, "r") as f:
            return json.load(f)
    except FileNotFoundError:
        raise MalformedInput(f"no such file: {file_path}") from None
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{file_path} is not valid JSON: {e}") from e


def load_polytope(file_path: str) -> HPolytope:
    return polytope_from_dict(load_json(file_path))


def dumps(document: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent"""
    return json.dumps(document, indent=2, sort_keys=True)


def save_json(document: Any, file_path: Optional[str]) -> None:
    """
    Write a JSON document to file_path, or to stdout when file_path is None or "-"
    """
    text = dumps(document)
    if file_path is None or file_path == "-":
        print(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
    with open(file_path, "w") as f:
        f.write(text + "\n")
