#!/usr/bin/env python3
"""
Polydist - exact distances and diameters on simple polytopes

Builds the knapsack gadget for Partition, measures distances, monotone paths
and diameters, performs truncations, silos and cyclic silos, runs the
diameter reduction, builds rock extensions and drives the verification suites.

Usage:
    python polydist.py gen-knapsack --weights 1,1
    python polydist.py distance P.json --from lo:1,lo:2,lo:3 --to 1,1,1 --k 3
    python polydist.py monotone-distance P.json --c 1,1,1 --start 0,0,0 --k 3
    python polydist.py diameter P.json [--graph-out graph.json]
    python polydist.py truncate P.json --vertex 0,0,0
    python polydist.py silo P.json --vertex lo:1,lo:2,lo:3 [--order lo:2,lo:1,lo:3]
    python polydist.py silo-graph --d 4 [--format edges]
    python polydist.py cyclic-silo P.json --vertex 0,0,0 --r 1 [--check]
    python polydist.py reduce-diameter P.json --u 0,0,0 --v 1,1,1 [--r 6] [--force] [--verify]
    python polydist.py rock-build P.json --center 1/2,1/2 --epsilon 1/2
    python polydist.py rock-path P.json --center 1/2,1/2 --epsilon 1/2 --from #0 [--to #3]
    python polydist.py verify-paper [--scope knapsack|silo|rock|all] [--max-d 4] [--quick]

Vertices are given as rational coordinates, as a comma-separated set of row
labels, or as "#i" for node i of the enumerated graph. JSON goes to stdout
unless --out names a file; progress and errors go to stderr.

Exit codes: 0 success, 2 bad input, 3 budget exceeded, 4 internal invariant
violated (including a failed verification claim), 130 interrupted.
"""

import argparse
import logging
import sys
import warnings
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from polytope_tools.config import DEFAULT_BUDGET, Budget
from polytope_tools.errors import InvariantViolation, MalformedInput, NotAVertex, PolytopeError
from polytope_tools.exact_linalg import format_rational, format_vector, parse_vector, to_rational, vector
from polytope_tools.knapsack_reduction import (
    PartitionInstance,
    build_Pb,
    monotone_objective,
    partition_endpoints,
    vertex_basis_labels,
    vertex_point,
)
from polytope_tools.polytope_core import (
    FACET_DEFINING,
    HPolytope,
    PolytopeGraph,
    build_graph,
    diameter,
    distance,
    facet_status,
    resolve_basis,
    shortest_monotone_path,
)
from polytope_tools.rock_extension import (
    InteriorBall,
    RockExtension,
    build_rock_extension,
    greedy_path_to_apex,
    path_between,
)
from polytope_tools.serialization import (
    edge_list_lines,
    graph_to_dict,
    load_polytope,
    path_to_dict,
    polytope_to_dict,
    save_json,
)
from polytope_tools.silo_constructions import (
    cyclic_silo,
    cyclic_silo_distances,
    diameter_reduction,
    encoding_growth_report,
    silo_graph,
    silo_with_details,
    truncate,
    verify_reduction,
)
from run_manifest import RunManifest, save_manifest
from utils import print_error, print_info, print_success, print_warning, render_claims_table, setup_logging
from verification_suites import SuiteOptions, all_passed, get_available_suites, run_suites

logger = logging.getLogger("polydist")

# Arguments that do not change what a run computes
_NOT_DIGESTED = {"out", "manifest", "log_file", "verbose", "graph_out"}


# Vertex specs

def parse_vertex(P: HPolytope, text: str, graph: Optional[PolytopeGraph] = None) -> Tuple[int, ...]:
    """
    Resolve a vertex spec to the row indices of its basis

    Args:
        P: The polytope
        text: "x1,...,xd" coordinates, "label,...,label" basis, or "#i" node index
        graph: Graph used for "#i" (built on demand)

    Returns:
        Sorted row indices

    Raises:
        NotAVertex: if the spec matches no vertex
        MalformedInput: if coordinates and labels name two different vertices
    """
    text = text.strip()
    if text.startswith("#"):
        G = graph if graph is not None else build_graph(P)
        try:
            node = int(text[1:])
        except ValueError:
            raise MalformedInput(f"bad node reference {text!r}") from None
        if not 0 <= node < len(G):
            raise NotAVertex(f"node {node} out of range 0..{len(G) - 1}")
        return G.bases[node].indices
    tokens = [token.strip() for token in text.split(",") if token.strip()]
    candidates = set()
    if len(tokens) == P.dim:
        try:
            point = vector(tokens)
        except MalformedInput:
            point = None
        if point is not None:
            try:
                candidates.add(resolve_basis(P, point))
            except NotAVertex:
                pass
    if tokens and all(P.has_label(token) for token in tokens):
        try:
            candidates.add(resolve_basis(P, frozenset(tokens)))
        except NotAVertex:
            pass
    if not candidates:
        raise NotAVertex(f"{text!r} is neither a vertex point nor a feasible basis")
    if len(candidates) > 1:
        raise MalformedInput(f"{text!r} is ambiguous: it matches a point and a different basis; use #i")
    return candidates.pop()


def vertex_labels(P: HPolytope, text: str, graph: Optional[PolytopeGraph] = None) -> frozenset:
    return frozenset(P.labels[i] for i in parse_vertex(P, text, graph))


def node_of(G: PolytopeGraph, text: str) -> int:
    return G.node_of_basis(vertex_labels(G.polytope, text, G))


def _within(length: Optional[int], k: Optional[int]) -> Optional[bool]:
    if k is None:
        return None
    return length is not None and length <= k


def _ball(P: HPolytope, args) -> InteriorBall:
    center = parse_vector(args.center)
    if len(center) != P.dim:
        raise MalformedInput(f"center has {len(center)} coordinates, polytope dimension is {P.dim}")
    return InteriorBall.from_radius(center, to_rational(args.epsilon))


# Commands

def cmd_gen_knapsack(args, budget: Budget) -> Dict[str, Any]:
    """Emit P_b, the partition endpoints and the monotone objective"""
    inst = PartitionInstance.from_string(args.weights)
    P = build_Pb(inst)
    objective = monotone_objective(inst)
    start, target = partition_endpoints(inst)

    def endpoint(vertex):
        return {"vertex": str(vertex), "basis": sorted(vertex_basis_labels(inst, vertex)),
                "point": format_vector(vertex_point(inst, vertex))}

    print_info(f"P_b for b={list(inst.weights)}: {P.num_rows} rows, dimension {P.dim}")
    return {
        "instance": {"weights": list(inst.weights), "d": inst.d, "beta": inst.beta},
        "polytope": polytope_to_dict(P),
        "endpoints": {"start": endpoint(start), "target": endpoint(target)},
        "objective": {"c": format_vector(objective.c), "epsilon": format_rational(objective.epsilon)},
        "threshold": inst.threshold,
    }


def cmd_distance(args, budget: Budget) -> Dict[str, Any]:
    """Distance between two vertices with a witness path and the <= k bit"""
    P = load_polytope(args.polytope)
    G = build_graph(P, budget)
    path = distance(G, node_of(G, args.source), node_of(G, args.target))
    print_info(f"Distance {path.length}")
    return {"distance": path.length, "path": path_to_dict(G, path), "k": args.k,
            "within_k": _within(path.length, args.k)}


def cmd_monotone_distance(args, budget: Budget) -> Dict[str, Any]:
    """Shortest c-increasing path from a vertex to a c-maximiser"""
    P = load_polytope(args.polytope)
    G = build_graph(P, budget)
    c = parse_vector(args.c)
    path = shortest_monotone_path(P, c, node_of(G, args.start), graph=G)
    if path is None:
        print_warning("no monotone path reaches a maximiser")
    length = path.length if path is not None else None
    return {"length": length, "path": path_to_dict(G, path), "k": args.k, "within_k": _within(length, args.k)}


def cmd_diameter(args, budget: Budget) -> Dict[str, Any]:
    """Diameter with a witness pair, next to the rows - dim value"""
    P = load_polytope(args.polytope)
    G = build_graph(P, budget)
    result = diameter(G, budget)
    hirsch = P.num_rows - P.dim
    if args.graph_out:
        save_json(graph_to_dict(G), args.graph_out)
        print_info(f"Graph written to {args.graph_out}")
    status = facet_status(P, budget, vertices=list(zip(G.bases, G.points)))
    print_info(f"Diameter {result.value}, rows - dim {hirsch}")
    return {
        "diameter": result.value,
        "pair": [sorted(G.bases[i].labels) for i in result.pair],
        "vertices": len(G),
        "edges": G.edge_count,
        "hirsch": hirsch,
        "within_hirsch": result.value <= hirsch,
        "redundant_rows": sorted(label for label, kind in status.items() if kind != FACET_DEFINING),
    }


def cmd_truncate(args, budget: Budget) -> Dict[str, Any]:
    P = load_polytope(args.polytope)
    T = truncate(P, vertex_labels(P, args.vertex), args.label)
    print_info(f"New row {T.labels[-1]}")
    return {"polytope": polytope_to_dict(T), "new_row": T.labels[-1]}


def cmd_silo(args, budget: Budget) -> Dict[str, Any]:
    P = load_polytope(args.polytope)
    order = [label.strip() for label in args.order.split(",")] if args.order else None
    result = silo_with_details(P, vertex_labels(P, args.vertex), order)
    print_info(f"Silo adds rows {', '.join(result.y_labels)}")
    return {
        "polytope": polytope_to_dict(result.polytope),
        "order": list(result.order),
        "y_labels": list(result.y_labels),
        "peak": sorted(result.peak),
        "encoding_lengths": list(result.encoding_lengths),
    }


def cmd_silo_graph(args, budget: Budget) -> Any:
    """G_d as JSON, or as "u -- v" lines"""
    G = silo_graph(args.d)

    def name(node):
        return f"({node[0]},{node[1]})"

    edges = sorted(G.edges)
    if args.format == "edges":
        return {"d": args.d, "lines": edge_list_lines(edges, name)}
    return {"d": args.d, "nodes": [name(node) for node in sorted(G.nodes)],
            "edges": [[name(u), name(v)] for u, v in edges],
            "diameter": nx.diameter(G)}


def cmd_cyclic_silo(args, budget: Budget) -> Dict[str, Any]:
    P = load_polytope(args.polytope)
    Q, record = cyclic_silo(P, vertex_labels(P, args.vertex), args.r)
    growth = encoding_growth_report(record)
    payload = {
        "polytope": polytope_to_dict(Q),
        "record": record.as_dict(),
        "encoding": {"max": max(growth.lengths), "bound": growth.bound, "within_bound": growth.within_bound},
    }
    if args.check:
        report = cyclic_silo_distances(P, Q, record, budget)
        payload["distances"] = {
            "peak_to_original": report.peak_to_original, "lower_bound": report.lower_bound,
            "ground_to_silo": report.ground_to_silo, "upper_bound": report.upper_bound,
            "ground_pairwise": report.ground_pairwise, "ok": report.ok,
        }
        if not report.ok:
            print_warning("cyclic silo distances break the expected bounds")
    print_info(f"{record.truncations} truncations, {Q.num_rows} rows")
    return payload


def cmd_reduce_diameter(args, budget: Budget) -> Dict[str, Any]:
    P = load_polytope(args.polytope)
    G = build_graph(P, budget)
    output = diameter_reduction(P, vertex_labels(P, args.u, G), vertex_labels(P, args.v, G), r=args.r,
                                force=args.force, budget=budget, graph=G)
    if output.forced:
        print_warning(f"r={output.r} is below {output.r_min}; the diameter formula may fail")
    payload = {
        "polytope": polytope_to_dict(output.polytope),
        "K": output.K,
        "r": output.r,
        "r_min": output.r_min,
        "forced": output.forced,
        "peak_pair": [sorted(peak) for peak in output.peak_pair],
        "base_distance": output.base_distance,
        "base_diameter": output.base_diameter,
        "predicted_diameter": output.predicted_diameter,
    }
    if args.verify:
        check = verify_reduction(output, budget)
        payload["verified"] = {"diameter": check.diameter, "peak_distance": check.peak_distance,
                               "holds": check.holds}
        print_info(f"diam(Q) = {check.diameter}, predicted {check.predicted}")
    return payload


def _rock(args, budget: Budget) -> RockExtension:
    P = load_polytope(args.polytope)
    return build_rock_extension(P, _ball(P, args), budget)


def cmd_rock_build(args, budget: Budget) -> Dict[str, Any]:
    R = _rock(args, budget)
    print_info(f"Rock extension with {R.polytope.num_rows} rows and {len(R.graph)} vertices")
    return {"polytope": polytope_to_dict(R.polytope), "extension": R.as_dict(), "hop_bound": R.hop_bound}


def cmd_rock_path(args, budget: Budget) -> Dict[str, Any]:
    """Greedy path to the apex, or between two vertices when --to is given"""
    R = _rock(args, budget)
    G = R.graph
    start = node_of(G, args.source)
    if args.target:
        path = path_between(R, start, node_of(G, args.target))
        bound = 2 * R.hop_bound
    else:
        path = greedy_path_to_apex(R, start)
        bound = R.hop_bound
    return {"length": path.length, "bound": bound, "within_bound": path.length <= bound,
            "path": path_to_dict(G, path),
            "apex_distance2": [format_rational(R.apex_distance2(n)) for n in path.vertices]}


def cmd_verify(args, budget: Budget) -> Dict[str, Any]:
    """Run the verification suites and print the claim table"""
    options = SuiteOptions(max_d=args.max_d, seed=args.seed, quick=args.quick, budget=budget)
    rows = run_suites(args.scope, options)
    render_claims_table(rows, title=f"Verification ({args.scope})")
    passed = all_passed(rows)
    if passed:
        print_success(f"all {len(rows)} claims hold")
    else:
        print_error(f"{sum(row['verdict'] != 'pass' for row in rows)} claim(s) failed")
    return {"scope": args.scope, "claims": rows, "passed": passed}


COMMANDS: Dict[str, Callable[[argparse.Namespace, Budget], Any]] = {
    "gen-knapsack": cmd_gen_knapsack,
    "distance": cmd_distance,
    "monotone-distance": cmd_monotone_distance,
    "diameter": cmd_diameter,
    "truncate": cmd_truncate,
    "silo": cmd_silo,
    "silo-graph": cmd_silo_graph,
    "cyclic-silo": cmd_cyclic_silo,
    "reduce-diameter": cmd_reduce_diameter,
    "rock-build": cmd_rock_build,
    "rock-path": cmd_rock_path,
    "verify-paper": cmd_verify,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized suites (default: 0)")
    common.add_argument("--jobs", type=int, help="Worker processes for the basis scan")
    common.add_argument("--max-bases", type=int, help="Cap on C(m,d) for the exhaustive scan")
    common.add_argument("--max-relaxations", type=int, help="Cap on BFS edge relaxations")
    common.add_argument("--scan-limit", type=int, help="Largest C(m,d) enumerated by scan instead of pivoting")
    common.add_argument("--manifest", help="Write a run manifest to this file")
    common.add_argument("--log-file", help="Log file (default: under the temp directory)")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging, mirrored to stderr")

    parser = argparse.ArgumentParser(description="Exact distances and diameters on simple polytopes")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str, polytope: bool = True, aliases: Sequence[str] = ()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, aliases=list(aliases))
        if polytope:
            p.add_argument("polytope", help='Polytope JSON file, or "-" for stdin')
        return p

    p = command("gen-knapsack", "Build P_b for a Partition instance", polytope=False)
    p.add_argument("--weights", required=True, help="Comma-separated positive integers with even sum")

    p = command("distance", "Graph distance between two vertices")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--k", type=int)

    p = command("monotone-distance", "Shortest monotone path to an optimum")
    p.add_argument("--c", required=True, help="Objective, e.g. 1,1,1/5")
    p.add_argument("--start", required=True)
    p.add_argument("--k", type=int)

    p = command("diameter", "Combinatorial diameter and rows - dim")
    p.add_argument("--graph-out", help="Also write the graph as JSON")

    p = command("truncate", "Cut off one vertex")
    p.add_argument("--vertex", required=True)
    p.add_argument("--label", help="Label of the new row")

    p = command("silo", "Silo at a vertex")
    p.add_argument("--vertex", required=True)
    p.add_argument("--order", help="Permutation of the vertex's basis labels")

    p = command("silo-graph", "Print the silo graph G_d", polytope=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=["json", "edges"], default="json")

    p = command("cyclic-silo", "r-cyclic siloing at a vertex")
    p.add_argument("--vertex", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--check", action="store_true", help="Measure the distance bounds by BFS")

    p = command("reduce-diameter", "Turn a distance question into a diameter question")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--r", type=int, help="Rounds per cyclic silo (default max(diam, 6))")
    p.add_argument("--force", action="store_true", help="Allow r below max(diam, 6)")
    p.add_argument("--verify", action="store_true", help="Check the diameter formula by all-pairs BFS")

    for name, help_text in [("rock-build", "Build a rock extension"),
                            ("rock-path", "Greedy path on a rock extension")]:
        p = command(name, help_text)
        p.add_argument("--center", required=True, help="Center of an interior ball")
        p.add_argument("--epsilon", required=True, help="Radius of the ball")
        if name == "rock-path":
            p.add_argument("--from", dest="source", required=True, help="Vertex of the extension")
            p.add_argument("--to", dest="target", help="Second vertex; omit to walk to the apex")

    p = command("verify-paper", "Run the verification suites", polytope=False, aliases=["verify"])
    p.add_argument("--scope", choices=sorted(get_available_suites()) + ["all"], default="all")
    p.add_argument("--max-d", type=int, help="Largest dimension the suites use")
    p.add_argument("--quick", action="store_true", help="Smaller instance families")
    return parser


def _digest_arguments(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in vars(args).items() if key not in _NOT_DIGESTED}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for polydist.py"""
    parser = build_parser()
    args = parser.parse_args(argv)
    log_path = setup_logging(args.log_file, args.verbose)
    budget = DEFAULT_BUDGET.with_overrides(max_bases=args.max_bases, max_relaxations=args.max_relaxations,
                                           scan_limit=args.scan_limit, jobs=args.jobs)
    files: List[str] = [args.polytope] if getattr(args, "polytope", None) else []
    manifest = RunManifest.start(args.command, _digest_arguments(args), files, args.seed, budget)
    logger.info("Running %s (log %s)", args.command, log_path)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            payload = COMMANDS[args.command](args, budget)
    except PolytopeError as e:
        logger.error("%s failed: %s %s", args.command, e, e.details)
        print_error(str(e))
        return e.exit_code
    except KeyboardInterrupt:
        print_warning("Interrupted")
        return 130
    for warning in caught:
        print_warning(str(warning.message))
    save_json(payload, args.out)
    if args.manifest:
        manifest.record(**(payload if isinstance(payload, dict) else {"result": payload}))
        manifest.finish()
        save_manifest(manifest, args.manifest)
    if COMMANDS[args.command] is cmd_verify and not payload["passed"]:
        return InvariantViolation.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
