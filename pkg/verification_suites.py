"""
Verification suites for Polydist

This module provides functionality to:
1. Check the knapsack gadget against the brute-force Partition oracle
2. Check truncations, silos and cyclic silos against their closed forms and BFS
3. Check greedy paths on rock extensions
4. Collect every check as a claim row for the verification report

Each suite returns a list of rows with the keys claim, instance, expected,
got and verdict ("pass" or "fail").
"""

import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from polytope_tools.config import Budget, resolve_budget
from polytope_tools.errors import TiedObjectiveEdge
from polytope_tools.knapsack_reduction import (
    PartitionInstance,
    brute_force_partition,
    build_Pb,
    compare_with_geometry,
    diameter_instance,
    exhaustive_instances,
    knapsack_graph,
    monotone_objective,
    objective_maximizers,
    partition_by_distance,
    partition_by_monotone_path,
    random_instances,
)
from polytope_tools.polytope_core import build_graph, diameter, unit_cube
from polytope_tools.rock_extension import (
    InteriorBall,
    build_rock_extension,
    greedy_path_to_apex,
    layer_separation,
    path_between,
)
from polytope_tools.silo_constructions import (
    check_silo_isomorphism,
    cyclic_silo,
    cyclic_silo_distances,
    diameter_reduction,
    dyadic_denominators,
    encoding_growth_report,
    generating_function,
    predict_silo_gf,
    predict_truncation_gf,
    reduction_distance_report,
    silo_graph_path_bounds,
    silo_with_details,
    truncate,
    verify_reduction,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


@dataclass
class SuiteOptions:
    """Knobs shared by every suite; max_d None keeps each suite's own range"""

    max_d: Optional[int] = None
    seed: int = 0
    quick: bool = False
    budget: Budget = field(default_factory=lambda: resolve_budget(None))

    def cap(self, default: int) -> int:
        return default if self.max_d is None else min(default, self.max_d)


def claim_row(claim: str, instance: str, expected: Any, got: Any, ok: bool) -> Dict[str, Any]:
    return {"claim": claim, "instance": instance, "expected": expected, "got": got,
            "verdict": PASS if ok else FAIL}


class _Tally:
    """Counts how many instances satisfy one claim and remembers the first failure"""

    def __init__(self, claim: str):
        self.claim = claim
        self.total = 0
        self.failures = 0
        self.first_failure: Optional[str] = None

    def add(self, ok: bool, instance: str):
        self.total += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = instance

    def row(self, family: str) -> Dict[str, Any]:
        got = f"{self.total - self.failures}/{self.total}"
        if self.first_failure:
            got += f" (first failure {self.first_failure})"
        return claim_row(self.claim, family, f"{self.total}/{self.total}", got, self.failures == 0)


# Knapsack gadget

def knapsack_suite(options: SuiteOptions) -> List[Dict[str, Any]]:
    """Partition equivalence, gadget structure and threshold identity on P_b"""
    budget = options.budget
    max_weight = 3 if options.quick else 5
    count = 5 if options.quick else 50
    exhaustive_d = options.cap(4)
    random_d = max(options.cap(6), 2)
    instances: List[PartitionInstance] = list(exhaustive_instances(2, exhaustive_d, max_weight))
    if exhaustive_d >= 2:
        instances += random_instances(options.seed, count, max_d=random_d)
    family = (f"{len(instances)} P_b (exhaustive d<={exhaustive_d}, w<={max_weight}; "
              f"random d<={random_d}, seed {options.seed})")
    tallies = {key: _Tally(text) for key, text in [
        ("distance", "endpoint distance <= d+1 iff a partition exists"),
        ("monotone", "monotone path <= d+1 iff a partition exists"),
        ("maximiser", "([d+1], d+2) is the unique c-maximiser"),
        ("model", "enumerated graph equals the closed-form vertices and edges"),
        ("simple", "P_b is simple (every vertex has d+2 neighbours)"),
        ("diameter", "diam(P_b) <= 2(d+2)"),
        ("threshold", "d+1 = rows - dim - 2"),
    ]}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TiedObjectiveEdge)
        for inst in instances:
            _check_knapsack_instance(inst, budget, tallies)
    _summarize_ties(caught, family)
    return [tally.row(family) for tally in tallies.values()]


def _summarize_ties(caught: List[warnings.WarningMessage], family: str):
    ties = [w for w in caught if issubclass(w.category, TiedObjectiveEdge)]
    if ties:
        logger.info("%d monotone searches on %s skipped tied edges", len(ties), family)
    for w in caught:
        if not issubclass(w.category, TiedObjectiveEdge):
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)


def _check_knapsack_instance(inst: PartitionInstance, budget: Budget, tallies: Dict[str, _Tally]):
    name = "b=(" + ",".join(map(str, inst.weights)) + ")"
    G = knapsack_graph(inst, budget)
    oracle = brute_force_partition(inst, budget) is not None
    by_distance = partition_by_distance(inst, graph=G)
    by_monotone = partition_by_monotone_path(inst, graph=G)
    tallies["distance"].add(by_distance.answer == oracle, name)
    tallies["monotone"].add(by_monotone.answer == oracle, name)
    maximisers = objective_maximizers(G, monotone_objective(inst).c)
    tallies["maximiser"].add(maximisers == [by_distance.target], name)
    tallies["model"].add(compare_with_geometry(inst, G).ok, name)
    tallies["simple"].add(all(len(nbrs) == inst.dim for nbrs in G.adjacency), name)
    tallies["diameter"].add(diameter(G, budget).value <= 2 * inst.dim, name)
    P = G.polytope
    tallies["threshold"].add(inst.threshold == P.num_rows - P.dim - 2, name)
    logger.debug("Checked %s", name)


# Truncations and silos

def _truncation_fixtures(budget: Budget) -> List[tuple]:
    """(name, polytope, graph, bases to truncate), twenty truncations in all"""
    cube = unit_cube(3)
    pb = build_Pb(PartitionInstance((1, 1)))
    siloed = silo_with_details(cube, ["lo:1", "lo:2", "lo:3"]).polytope
    fixtures = []
    for name, P, limit in [("cube", cube, 8), ("P_b(1,1)", pb, 6), ("silo of cube", siloed, 6)]:
        G = build_graph(P, budget)
        fixtures.append((name, P, G, [basis.label_set for basis in G.bases[:limit]]))
    return fixtures


def truncation_gf_rows(options: SuiteOptions) -> List[Dict[str, Any]]:
    tally = _Tally("truncation removes x^B* and adds x^(B*-i) x_new")
    names = []
    for name, P, G, bases in _truncation_fixtures(options.budget):
        names.append(name)
        f = generating_function(P, graph=G)
        for Bstar in bases:
            truncated = truncate(P, Bstar)
            predicted = predict_truncation_gf(f, Bstar, truncated.labels[-1])
            actual = generating_function(truncated, options.budget)
            tally.add(predicted == actual, f"{name} at {sorted(Bstar)}")
    return [tally.row(", ".join(names))]


def silo_rows(options: SuiteOptions) -> List[Dict[str, Any]]:
    rows = []
    for d in range(3, options.cap(5) + 1):
        cube = unit_cube(d)
        origin = [f"lo:{i}" for i in range(1, d + 1)]
        result = silo_with_details(cube, origin)
        G = build_graph(result.polytope, options.budget)
        predicted = predict_silo_gf(generating_function(cube, options.budget), result.order, result.y_labels)
        actual = generating_function(result.polytope, graph=G, y_labels=result.y_labels)
        rows.append(claim_row("silo bases match the closed form", f"cube d={d}",
                              len(predicted), len(actual), predicted == actual))
        iso = check_silo_isomorphism(result, graph=G)
        rows.append(claim_row("new non-peak vertices form G_d", f"cube d={d}",
                              "isomorphic", "isomorphic" if iso.ok else iso.reason, iso.ok))
        rows.append(claim_row("silo adds d rows", f"cube d={d}", cube.num_rows + d,
                              result.polytope.num_rows, result.polytope.num_rows == cube.num_rows + d))
    return rows


def silo_graph_rows(options: SuiteOptions) -> List[Dict[str, Any]]:
    rows = []
    for d in range(3, options.cap(10) + 1):
        bounds = silo_graph_path_bounds(d)
        got = ", ".join(f"{key}={value}" for key, value in sorted(bounds.worst.items()))
        rows.append(claim_row("G_d short paths (a)-(c) <= d-2, (d) <= 3", f"G_{d}",
                              f"<= {d - 2}, <= 3", got, bounds.ok))
    return rows


def cyclic_silo_rows(options: SuiteOptions) -> List[Dict[str, Any]]:
    rows = []
    if options.cap(3) < 3:
        return rows
    cube = unit_cube(3)
    base_graph = build_graph(cube, options.budget)
    origin = ["lo:1", "lo:2", "lo:3"]
    for r in (1, 2):
        Q, record = cyclic_silo(cube, origin, r)
        G = build_graph(Q, options.budget)
        report = cyclic_silo_distances(cube, Q, record, base_graph=base_graph, graph=G)
        instance = f"C^{r}(cube, origin)"
        rows.append(claim_row("peak is at least r d (d-1) + 1 from the rest of P", instance,
                              f">= {report.lower_bound}", report.peak_to_original,
                              report.peak_to_original >= report.lower_bound))
        rows.append(claim_row("cyclic silo within r d (d-1) of each ground vertex", instance,
                              f"<= {report.upper_bound}", report.ground_to_silo,
                              report.ground_to_silo <= report.upper_bound))
        rows.append(claim_row("ground layer pairwise within 3", instance, "<= 3",
                              report.ground_pairwise, report.ground_pairwise <= 3))
        growth = encoding_growth_report(record)
        rows.append(claim_row("encoding length stays below 64 L^3 r", instance, f"<= {growth.bound}",
                              max(growth.lengths), growth.within_bound))
        dyadic = dyadic_denominators(base_graph, G, record.truncations)
        rows.append(claim_row("vertex denominators are powers of two", instance,
                              f"divide 2^{record.truncations}", "yes" if dyadic else "no", dyadic))
    return rows


def reduction_rows(options: SuiteOptions) -> List[Dict[str, Any]]:
    rows = []
    if options.cap(3) < 3:
        return rows
    cube = unit_cube(3)
    base_graph = build_graph(cube, options.budget)
    output = diameter_reduction(cube, ["lo:1", "lo:2", "lo:3"], ["hi:1", "hi:2", "hi:3"], r=6,
                                budget=options.budget, graph=base_graph)
    rows.append(claim_row("K = 2 r d (d-1)", "cube antipodal, r=6", 72, output.K, output.K == 72))
    G = build_graph(output.polytope, options.budget)
    check = verify_reduction(output, options.budget, graph=G)
    rows.append(claim_row("diam(Q) = d_P(u,v) + K, attained by the two peaks", "cube antipodal, r=6",
                          75, f"{check.diameter} (peaks {check.peak_distance})",
                          check.holds and check.diameter == 75))
    spread = reduction_distance_report(cube, output, base_graph=base_graph, graph=G)
    rows.append(claim_row("other distances grow by at most 6", "cube antipodal, r=6", "<= 6",
                          spread.max_increase, spread.ok))
    if not options.quick:
        inst = PartitionInstance((1, 1))
        composite, threshold = diameter_instance(inst, budget=options.budget)
        check = verify_reduction(composite, options.budget)
        rows.append(claim_row("diam(Q) = d_P(u,v) + K on a knapsack gadget",
                              f"P_b(1,1), r={composite.r}", composite.predicted_diameter,
                              check.diameter, check.holds))
        rows.append(claim_row("partition exists iff diam(Q) <= d+1+K", f"P_b(1,1), r={composite.r}",
                              f"<= {threshold}", check.diameter, check.diameter <= threshold))
    return rows


def silo_suite(options: SuiteOptions) -> List[Dict[str, Any]]:
    """Truncation bookkeeping, silos, G_d, cyclic silos and the diameter reduction"""
    rows = []
    for part in (truncation_gf_rows, silo_rows, silo_graph_rows, cyclic_silo_rows, reduction_rows):
        rows.extend(part(options))
    return rows


# Rock extensions

def _rock_fixtures(options: SuiteOptions) -> List[tuple]:
    fixtures = []
    for d in (2, 3):
        if d <= options.cap(3):
            center = tuple(Fraction(1, 2) for _ in range(d))
            fixtures.append((f"[0,1]^{d}", unit_cube(d), InteriorBall.from_radius(center, Fraction(1, 2))))
    return fixtures


def rock_suite(options: SuiteOptions) -> List[Dict[str, Any]]:
    """Layering and greedy paths on rock extensions of the square and the cube"""
    rows = []
    for name, P, ball in _rock_fixtures(options):
        R = build_rock_extension(P, ball, options.budget)
        rows.append(claim_row("layers grow strictly farther from the apex", name, "separated",
                              "separated" if layer_separation(R) else "overlapping", layer_separation(R)))
        longest, decreasing = 0, True
        for node in range(len(R.graph)):
            path = greedy_path_to_apex(R, node)
            longest = max(longest, path.length)
            distances = [R.apex_distance2(n) for n in path.vertices]
            decreasing = decreasing and all(a > b for a, b in zip(distances, distances[1:]))
        rows.append(claim_row("greedy reaches the apex within rows - dim", name, f"<= {R.hop_bound}",
                              longest, longest <= R.hop_bound))
        rows.append(claim_row("greedy distances strictly decrease", name, "yes",
                              "yes" if decreasing else "no", decreasing))
        widest = max(path_between(R, u, v).length
                     for u in range(len(R.graph)) for v in range(u + 1, len(R.graph)))
        rows.append(claim_row("any two vertices within 2 (rows - dim)", name, f"<= {2 * R.hop_bound}",
                              widest, widest <= 2 * R.hop_bound))
    return rows


def get_available_suites() -> Dict[str, Callable[[SuiteOptions], List[Dict[str, Any]]]]:
    """
    Get a dictionary of all verification suites

    Returns:
        Dict mapping scope names to suite functions
    """
    return {
        "knapsack": knapsack_suite,
        "silo": silo_suite,
        "rock": rock_suite,
    }


def run_suites(scope: str, options: SuiteOptions) -> List[Dict[str, Any]]:
    """
    Run one suite, or all of them for scope "all"

    Raises:
        KeyError: for an unknown scope
    """
    suites = get_available_suites()
    names = list(suites) if scope == "all" else [scope]
    rows = []
    for name in names:
        logger.info("Running %s suite", name)
        rows.extend(suites[name](options))
    return rows


def all_passed(rows: List[Dict[str, Any]]) -> bool:
    return all(row["verdict"] == PASS for row in rows)
