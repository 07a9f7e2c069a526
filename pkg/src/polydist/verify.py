"""Claim-by-claim verification suites shared by the CLI and the acceptance tests.

Each suite returns ``Claim`` rows: which acceptance criterion the claim
belongs to, a short name, the instance, expected and observed values and a
verdict. Oracles are independent of the code under test wherever possible:
brute-force subset sums, the closed-form gadget model, exhaustive basis
enumeration and plain BFS.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .graphs import bfs_distances
from .errors import LayeringFailed, TiedObjectiveEdge
from .knapsack import (
    PartitionInstance,
    brute_force_partition,
    build_Pb,
    combinatorial_graph,
    decide_partition_via_distance,
    decide_partition_via_monotone_distance,
    exhaustive_instances,
    monotone_objective,
    partition_endpoints,
    random_instances,
    vertex_basis_labels,
    vertex_point,
)
from .polytope import (
    HPolytope,
    build_graph,
    cube,
    diameter,
    enumerate_feasible_bases,
    is_simple,
)
from .rock import InteriorBall, build_rock_extension, find_apex_by_enumeration, greedy_path_to_apex, path_between
from .silo import (
    cyclic_silo,
    cyclic_silo_distances,
    diameter_reduction,
    encoding_growth_report,
    generating_function,
    predict_truncation_gf,
    silo,
    silo_closed_form,
    silo_graph_path_bounds,
    truncate,
    verify_silo_isomorphism,
)

DEFAULT_SEED = 20240607
RANDOM_INSTANCES = 50


@dataclass(frozen=True)
class Claim:
    criterion: int
    name: str
    instance: str
    expected: str
    got: str
    ok: bool


def summarize(claims) -> dict:
    """criterion -> (passed, total)."""
    out = {}
    for c in claims:
        passed, total = out.get(c.criterion, (0, 0))
        out[c.criterion] = (passed + c.ok, total + 1)
    return out


# -- knapsack gadget ---------------------------------------------------------

def knapsack_family(max_d: int = 4, seed: int = DEFAULT_SEED, random_count: int = RANDOM_INSTANCES) -> list:
    return exhaustive_instances(2, max_d, 5) + random_instances(random_count, seed, 2, 6)


def _gadget_matches_model(inst, G) -> tuple:
    """(vertices equal, edges equal) between the enumerated graph and the closed-form model."""
    P = G.polytope
    verts, adj = combinatorial_graph(inst)
    try:
        idx = [G.index_of_basis(P.basis_from_labels(vertex_basis_labels(inst, v))) for v in verts]
    except Exception:
        return False, False
    same_vertices = (len(set(idx)) == len(verts) == len(G.nodes)
                     and all(vertex_point(inst, v) == G.nodes[i].point for v, i in zip(verts, idx)))
    model_edges = {frozenset((idx[a], idx[c])) for a in range(len(verts)) for c in adj[a]}
    return same_vertices, model_edges == {frozenset(e) for e in G.edges()}


def knapsack_suite(max_d: int = 4, seed: int = DEFAULT_SEED, random_count: int = RANDOM_INSTANCES) -> list:
    claims = []
    for inst in knapsack_family(max_d, seed, random_count):
        name = "b=" + ",".join(map(str, inst.weights))
        P = build_Pb(inst)
        G = build_graph(P)
        truth = brute_force_partition(inst) is not None
        dist = decide_partition_via_distance(inst, G)
        claims.append(Claim(1, "distance <= d+1 iff partition", name, str(truth),
                            f"{dist.answer} (distance {dist.length})", dist.answer == truth))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TiedObjectiveEdge)
            mono = decide_partition_via_monotone_distance(inst, G)
        claims.append(Claim(2, "monotone distance <= d+1 iff partition", name, str(truth),
                            f"{mono.answer} (length {mono.length})", mono.answer == truth))
        c = monotone_objective(inst).c
        values = [exact.dot(c, v.point) for v in G.nodes]
        best = max(values)
        winners = [G.nodes[i].point for i, val in enumerate(values) if val == best]
        _, end = partition_endpoints(inst)
        claims.append(Claim(2, "unique c-maximum is ([d+1], d+2)", name, "1 maximizer at the end vertex",
                            f"{len(winners)} maximizer(s)", winners == [vertex_point(inst, end)]))
        same_v, same_e = _gadget_matches_model(inst, G)
        claims.append(Claim(3, "vertices match closed-form model", name, "equal", str(same_v), same_v))
        claims.append(Claim(3, "edges match closed-form model", name, "equal", str(same_e), same_e))
        simple, _ = is_simple(P, G.nodes)
        claims.append(Claim(3, "gadget is simple", name, "True", str(simple), simple))
        diam, _ = diameter(G)
        claims.append(Claim(3, "diameter <= 2(d+2)", name, f"<= {2 * inst.n}", str(diam), diam <= 2 * inst.n))
        claims.append(Claim(9, "threshold d+1 = rows - dim - 2", name, str(inst.d + 1),
                            str(P.m - P.dim - 2), inst.d + 1 == P.m - P.dim - 2))
    return claims


# -- truncations and silos ---------------------------------------------------

def _gf_claim(P: HPolytope, vertex, name: str) -> tuple:
    """Truncate P at ``vertex`` (row indices) and compare predicted and re-enumerated bases."""
    before = generating_function(HPolytope(P.A, P.b, P.labels))
    T = truncate(P, vertex)
    predicted = predict_truncation_gf(before, P.basis_labels(vertex), T.labels[-1])
    enumerated = generating_function(HPolytope(T.A, T.b, T.labels))
    ok = predicted == enumerated and predicted.is_set()
    return Claim(4, "truncation GF prediction", name, f"{len(predicted)} monomials", f"{len(enumerated)} enumerated", ok), T


def truncation_suite(seed: int = DEFAULT_SEED) -> list:
    rng = random.Random(seed)
    claims = []
    C3 = cube(3)
    for v in enumerate_feasible_bases(C3):
        claims.append(_gf_claim(C3, v.basis, f"cube3 at {C3.basis_labels(v.basis)}")[0])
    for weights in [(1, 1), (2, 1, 1)]:
        Pb = build_Pb(PartitionInstance(weights))
        bases = enumerate_feasible_bases(Pb)
        for v in rng.sample(bases, 3):
            claims.append(_gf_claim(Pb, v.basis, f"P_b b={weights} at {Pb.basis_labels(v.basis)}")[0])
    # random silo fixtures: silo a random cube corner in random order, then truncate random vertices
    for trial in range(3):
        P = cube(3)
        corner = rng.choice(enumerate_feasible_bases(P))
        order = list(P.basis_labels(corner.basis))
        rng.shuffle(order)
        S = silo(P, corner.basis, order).polytope
        for _ in range(2):
            v = rng.choice(sorted(S.known_vertices))
            claim, S = _gf_claim(S, v.basis, f"random silo {trial} at {S.basis_labels(v.basis)}")
            claims.append(claim)
    return claims


def silo_fixtures(max_d: int = 5) -> list:
    """(name, polytope, vertex basis) for d in 3..max_d, including one gadget."""
    out = []
    for d in range(3, min(max_d, 5) + 1):
        P = cube(d)
        out.append((f"cube{d} at origin", P, tuple(range(d))))
        out.append((f"cube{d} at all-ones", P, tuple(range(d, 2 * d))))
    if max_d >= 4:
        inst = PartitionInstance((1, 1))
        Pb = build_Pb(inst)
        start, _ = partition_endpoints(inst)
        out.append(("P_b b=1,1 at start", Pb, Pb.basis_from_labels(vertex_basis_labels(inst, start))))
    return out


def silo_suite(max_d: int = 5) -> list:
    claims = []
    for name, P, basis in silo_fixtures(max_d):
        base_gf = generating_function(P)
        labels = list(P.basis_labels(basis))
        for order in (labels, labels[::-1]):
            res = silo(P, basis, order)
            S = res.polytope
            # independent re-enumeration, not the tracked vertex list
            plain = HPolytope(S.A, S.b, S.labels)
            gf = generating_function(plain)
            closed = silo_closed_form(base_gf, res.order, res.y_labels)
            inst = f"{name}, order {','.join(map(str, order))}"
            claims.append(Claim(5, "silo GF equals closed form", inst, f"{len(closed)} monomials",
                                f"{len(gf)} enumerated", gf == closed))
            claims.append(Claim(5, "silo has m+d facets", inst, str(P.m + P.dim), str(S.m), S.m == P.m + P.dim))
            iso, why = verify_silo_isomorphism(res, build_graph(plain))
            claims.append(Claim(5, "phi is an isomorphism G_d -> H", inst, "True", str(why or iso), iso))
    return claims


SILO_GRAPH_CLAIMS = {
    "a": "(1,2) reaches the top nodes within d-2",
    "b": "(i,1) reaches (i,d) within d-2",
    "c": "every node within d-2 of a hub",
    "d": "hubs pairwise within 3",
}


def silo_graph_suite(max_d: int = 10) -> list:
    claims = []
    for d in range(3, max_d + 1):
        report = silo_graph_path_bounds(d)
        for part, (ok, lengths) in report.items():
            bound = 3 if part == "d" else d - 2
            claims.append(Claim(6, SILO_GRAPH_CLAIMS[part], f"G_{d}", f"<= {bound}",
                                f"max {max(lengths.values())}", ok))
    return claims


def cyclic_silo_suite(rs=(1, 2)) -> tuple:
    claims, records = [], []
    P = cube(3)
    for r in rs:
        Q, rec = cyclic_silo(P, (0, 1, 2), r)
        records.append((f"cube3 r={r}", P, rec, 1))
        d = 3
        name = f"cube3 r={r}"
        exhaustive = enumerate_feasible_bases(HPolytope(Q.A, Q.b, Q.labels))
        claims.append(Claim(7, "tracked vertices equal exhaustive enumeration", name, str(len(exhaustive)),
                            str(len(Q.known_vertices)), exhaustive == sorted(Q.known_vertices)))
        claims.append(Claim(7, "facet and vertex counts", name, f"{P.m + r * d * d} rows, {8 + r * d * d * (d - 1)} vertices",
                            f"{Q.m} rows, {len(exhaustive)} vertices",
                            Q.m == P.m + r * d * d and len(exhaustive) == 8 + r * d * d * (d - 1)))
        facts = cyclic_silo_distances(Q, rec)
        bound = r * d * (d - 1)
        claims.append(Claim(7, "peak to original vertices >= rd(d-1)+1", name, f">= {bound + 1}",
                            str(facts["peak_to_original"]), facts["peak_to_original"] >= bound + 1))
        claims.append(Claim(7, "ground layer to silo vertices <= rd(d-1)", name, f"<= {bound}",
                            str(facts["ground_to_silo"]), facts["ground_to_silo"] <= bound))
        claims.append(Claim(7, "ground layer pairwise <= 3", name, "<= 3", str(facts["ground_pairwise"]),
                            facts["ground_pairwise"] <= 3))
        claims.append(Claim(7, "v_(i,j-1) adjacent to u_(i,j)", name, "True", str(facts["layer_adjacency"]),
                            facts["layer_adjacency"]))
    return claims, records


def reduction_suite(include_gadget: bool = True) -> tuple:
    claims, records = [], []
    zero, one = (Fraction(0),) * 3, (Fraction(1),) * 3
    cases = [("cube3 antipodal", cube(3), zero, one, 6)]
    if include_gadget:
        inst = PartitionInstance((1, 1))
        s, t = partition_endpoints(inst)
        cases.append(("P_b b=1,1 endpoints", build_Pb(inst), vertex_basis_labels(inst, s),
                      vertex_basis_labels(inst, t), None))
    for name, P, u, v, r in cases:
        out = diameter_reduction(P, u, v, r=r)
        records.append((name + " (u side)", P, out.record_u, 1))
        records.append((name + " (v side)", P, out.record_v, len(out.record_u.steps) + 1))
        G = build_graph(out.Q)
        if name.startswith("cube"):
            exhaustive = enumerate_feasible_bases(HPolytope(out.Q.A, out.Q.b, out.Q.labels))
            claims.append(Claim(8, "tracked vertices equal exhaustive enumeration", name, str(len(exhaustive)),
                                str(len(G.nodes)), exhaustive == list(G.nodes)))
        diam, _ = diameter(G)
        pu, pv = (G.index_of_basis(p.basis) for p in out.peaks)
        peak_dist = bfs_distances(G.adjacency, pu)[pv]
        inst = f"{name}, r={out.r}, K={out.K}"
        claims.append(Claim(8, "diam(Q) = d_P(u,v) + K", inst, str(out.predicted_diameter), str(diam),
                            diam == out.predicted_diameter))
        claims.append(Claim(8, "peaks attain the diameter", inst, str(diam), str(peak_dist), peak_dist == diam))
    return claims, records


def encoding_suite(records, constant: int = 64) -> list:
    claims = []
    for name, base, rec, first in records:
        rep = encoding_growth_report(rec, base, constant, first)
        worst = max(max(s["row_bits"], s["coord_bits"]) for s in rep["steps"])
        claims.append(Claim(11, "encoding length below 64 L^3 t", name, f"<= {rep['steps'][-1]['bound']}",
                            f"max {worst} bits", rep["ok"]))
        claims.append(Claim(11, "per-step maxima nondecreasing", name, "True", str(rep["monotone"]), rep["monotone"]))
    return claims


# -- rock extensions ---------------------------------------------------------

def rock_fixtures() -> list:
    half = Fraction(1, 2)
    return [
        ("square, o=center", cube(2), InteriorBall((half, half), Fraction(1, 4))),
        ("cube3, o=center", cube(3), InteriorBall((half, half, half), Fraction(1, 4))),
    ]


def nondegenerate_rock_fixtures() -> list:
    """Bases with no parallel facets, where a unique z-maximum is attainable."""
    pentagon = HPolytope.from_rows([[-1, -3], [3, -1], [1, 2], [-2, 1], [-3, -1]], [0, 6, 9, 4, 3])
    cut_simplex = HPolytope.from_rows(
        [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 1], [3, 1, 0], [0, 2, 3], [1, 0, 4]], [0, 0, 0, 3, 7, 8, 9])
    r2 = Fraction(1, 100)
    return [
        ("pentagon", pentagon, InteriorBall((Fraction(1), Fraction(1)), r2)),
        ("cut simplex", cut_simplex, InteriorBall((Fraction(1, 2),) * 3, r2)),
        ("cut simplex, off-center", cut_simplex, InteriorBall((Fraction(3, 5), Fraction(2, 3), Fraction(1, 2)), r2)),
    ]


def rock_claims(name: str, P: HPolytope, ball: InteriorBall) -> list:
    try:
        R = build_rock_extension(P, ball)
    except LayeringFailed as exc:
        return [Claim(10, "rock extension builds and validates", name, "valid", f"LayeringFailed: {exc}", False)]
    G = R.graph
    limit = R.rows - R.dim
    claims = [Claim(10, "rock extension builds and validates", name, "valid", "valid", True)]
    apex = find_apex_by_enumeration(R).point
    claims.append(Claim(10, "apex is (o,1)", name, str(R.apex), str(apex), apex == R.apex))
    worst, monotone = 0, True
    for i in range(len(G.nodes)):
        path = greedy_path_to_apex(R, i).vertices
        d2 = [R.dist2(G.nodes[j].point) for j in path]
        monotone = monotone and all(a > b for a, b in zip(d2, d2[1:]))
        worst = max(worst, len(path) - 1)
    claims.append(Claim(10, "greedy reaches apex within rows-dim", name, f"<= {limit}", str(worst), worst <= limit))
    claims.append(Claim(10, "greedy distance strictly decreases", name, "True", str(monotone), monotone))
    pair = max(path_between(R, i, j).length for i in range(len(G.nodes)) for j in range(len(G.nodes)))
    claims.append(Claim(10, "all pairs within 2(rows-dim)", name, f"<= {2 * limit}", str(pair), pair <= 2 * limit))
    return claims


def rock_suite(include_nondegenerate: bool = False) -> list:
    claims = []
    fixtures = rock_fixtures() + (nondegenerate_rock_fixtures() if include_nondegenerate else [])
    for name, P, ball in fixtures:
        claims.extend(rock_claims(name, P, ball))
    return claims


# -- driver ------------------------------------------------------------------

SCOPES = ("knapsack", "silo", "rock")


def run_suites(scope: str = "all", max_d: int | None = None, seed: int = DEFAULT_SEED) -> list:
    scopes = SCOPES if scope == "all" else (scope,)
    claims = []
    if "knapsack" in scopes:
        claims += knapsack_suite(max_d=min(max_d or 4, 4), seed=seed)
    if "silo" in scopes:
        limit = max_d or 10
        claims += truncation_suite(seed)
        claims += silo_suite(min(limit, 5))
        claims += silo_graph_suite(limit)
        records = []
        if limit >= 3:
            cyc, recs = cyclic_silo_suite()
            claims += cyc
            records += recs
            red, recs = reduction_suite(include_gadget=limit >= 4)
            claims += red
            records += recs
        claims += encoding_suite(records)
    if "rock" in scopes:
        claims += rock_suite(include_nondegenerate=True)
    return claims
