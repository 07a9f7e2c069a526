"""Command-line entry point: every subcommand reads and writes rational-string JSON.

Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 internal
invariant violation or a failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

from . import io
from .errors import BudgetExceeded, InputError, InternalInvariantError, NotAVertex, PolytopeError
from .exact import rational
from .graphs import DEFAULT_MAX_RELAXATIONS
from .knapsack import (
    PartitionInstance,
    build_Pb,
    decide_partition_via_distance,
    decide_partition_via_monotone_distance,
    monotone_objective,
    partition_endpoints,
    vertex_basis_labels,
    vertex_point,
)
from .polytope import DEFAULT_MAX_BASES, HPolytope, build_graph, cube, diameter, distance, shortest_monotone_path
from .rock import InteriorBall, build_rock_extension, path_between
from .silo import cyclic_silo, diameter_reduction, silo, truncate

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4


# -- input helpers -----------------------------------------------------------

def load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_polytope(spec: str) -> HPolytope:
    """A JSON file (``-`` for stdin), ``cube:D`` or ``knapsack:b1,b2,...``."""
    if spec.startswith("cube:"):
        try:
            d = int(spec[5:])
        except ValueError:
            raise InputError(f"bad cube dimension in {spec!r}") from None
        if d < 1:
            raise InputError("cube dimension must be positive")
        return cube(d)
    if spec.startswith("knapsack:"):
        return build_Pb(PartitionInstance(parse_ints(spec[9:])))
    data = load_json(spec)
    if isinstance(data, dict) and "polytope" in data:
        data = data["polytope"]
    return io.polytope_from_json(data)


def parse_ints(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def parse_vertex_spec(text: str, dim: int):
    """Coordinates if the spec is ``dim`` rationals, else a set of row labels."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == dim:
        try:
            return tuple(rational(p) for p in parts)
        except (ValueError, TypeError):
            pass
    return tuple(parts)


def resolve(G, text: str) -> int:
    spec = parse_vertex_spec(text, G.polytope.dim)
    try:
        return G.node(spec)
    except (NotAVertex, InputError) as exc:
        raise NotAVertex(f"{text!r} does not name a vertex: {exc}") from None
    except KeyError:
        raise NotAVertex(f"{text!r} does not name a vertex") from None


def budgets(args) -> dict:
    return {"max_bases": args.max_bases, "max_relaxations": args.max_relaxations}


def enum_kwargs(args) -> dict:
    return {"max_bases": args.max_bases, "jobs": args.jobs}


def vertex_json(G, i: int) -> dict:
    out = io.vertex_to_json(G.polytope, G.nodes[i])
    out["index"] = i
    return out


# -- subcommands -------------------------------------------------------------

def cmd_gen_knapsack(args) -> tuple:
    inst = PartitionInstance(parse_ints(args.weights))
    P = build_Pb(inst)
    G = build_graph(P, **enum_kwargs(args))
    start, end = partition_endpoints(inst)
    obj = monotone_objective(inst)
    dist = decide_partition_via_distance(inst, G)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        mono = decide_partition_via_monotone_distance(inst, G)
    payload = {
        "weights": list(inst.weights),
        "beta": inst.beta,
        "polytope": io.polytope_to_json(P),
        "endpoints": [
            {"name": str(v), "basis": list(vertex_basis_labels(inst, v)), "point": io.rat_list(vertex_point(inst, v))}
            for v in (start, end)
        ],
        "objective": {"c": io.rat_list(obj.c), "epsilon": io.format_rational(obj.epsilon)},
        "threshold": inst.d + 1,
        "distance": dist.length,
        "partition": dist.answer,
        "witness_path": [str(v) for v in dist.path],
        "monotone_length": mono.length,
        "monotone_partition": mono.answer,
        "monotone_path": [str(v) for v in mono.path],
    }
    return payload, {"weights": list(inst.weights)}


def cmd_distance(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    u, v = resolve(G, args.u), resolve(G, args.v)
    length, path = distance(G, u, v)
    payload = {"u": vertex_json(G, u), "v": vertex_json(G, v), "distance": length,
               "path": io.path_to_json(G, path.vertices)}
    if args.k is not None:
        payload["k"] = args.k
        payload["within_k"] = length <= args.k
    return payload, {"polytope": io.polytope_to_json(P), "u": args.u, "v": args.v, "k": args.k}


def cmd_monotone_distance(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    c = io.parse_rational_list(args.c)
    s = resolve(G, args.start)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        path = shortest_monotone_path(G, c, s)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    payload = {"start": vertex_json(G, s), "c": io.rat_list(c), "tied_edges_dropped": bool(caught)}
    if path is None:
        payload.update({"reachable": False, "length": None, "path": None})
        if args.k is not None:
            payload["within_k"] = False
    else:
        payload.update({"reachable": True, "length": path.length, "path": io.path_to_json(G, path.vertices)})
        if args.k is not None:
            payload["within_k"] = path.length <= args.k
    if args.k is not None:
        payload["k"] = args.k
    return payload, {"polytope": io.polytope_to_json(P), "c": args.c, "start": args.start, "k": args.k}


def cmd_diameter(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    value, (a, b) = diameter(G, args.max_relaxations)
    payload = {"vertices": len(G.nodes), "edges": len(G.edges()), "diameter": value,
               "pair": [vertex_json(G, a), vertex_json(G, b)]}
    if args.graph:
        payload["graph"] = io.graph_to_json(G)
    if args.edge_list:
        payload["edge_list"] = [f"{i} -- {j}" for i, j in G.edges()]
    return payload, {"polytope": io.polytope_to_json(P)}


def cmd_truncate(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    v = G.nodes[resolve(G, args.vertex)]
    T = truncate(HPolytope(P.A, P.b, P.labels, G.nodes), v, label=args.label)
    payload = {"vertex": io.vertex_to_json(P, v), "new_row": T.labels[-1],
               "polytope": io.polytope_to_json(T, include_vertices=True), "vertex_count": len(T.known_vertices)}
    return payload, {"polytope": io.polytope_to_json(P), "vertex": args.vertex, "label": args.label}


def cmd_silo(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    v = G.nodes[resolve(G, args.vertex)]
    order = [p.strip() for p in args.order.split(",")] if args.order else None
    res = silo(HPolytope(P.A, P.b, P.labels, G.nodes), v, order)
    S = res.polytope
    payload = {"vertex": io.vertex_to_json(P, v), "order": list(res.order), "y_labels": list(res.y_labels),
               "peak": io.vertex_to_json(S, res.peak), "polytope": io.polytope_to_json(S, include_vertices=True),
               "vertex_count": len(S.known_vertices)}
    return payload, {"polytope": io.polytope_to_json(P), "vertex": args.vertex, "order": args.order}


def cmd_cyclic_silo(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    v = G.nodes[resolve(G, args.vertex)]
    C, record = cyclic_silo(HPolytope(P.A, P.b, P.labels, G.nodes), v, args.r)
    payload = {"record": io.cyclic_record_to_json(C, record), "peak": io.vertex_to_json(C, record.peak),
               "polytope": io.polytope_to_json(C, include_vertices=True), "vertex_count": len(C.known_vertices)}
    return payload, {"polytope": io.polytope_to_json(P), "vertex": args.vertex, "r": args.r}


def cmd_reduce_diameter(args) -> tuple:
    P = load_polytope(args.polytope)
    G = build_graph(P, **enum_kwargs(args))
    u, v = G.nodes[resolve(G, args.u)], G.nodes[resolve(G, args.v)]
    out = diameter_reduction(HPolytope(P.A, P.b, P.labels, G.nodes), u, v, r=args.r, force=args.force)
    Q = out.Q
    if not out.r_meets_hypothesis:
        print(f"warning: r = {out.r} is below max(diam(P), 6); the diameter formula is not guaranteed",
              file=sys.stderr)
    payload = {
        "r": out.r, "K": out.K, "d_P": out.d_P, "diam_P": out.diam_P,
        "r_meets_hypothesis": out.r_meets_hypothesis,
        "predicted_diameter": out.predicted_diameter,
        "peaks": [io.vertex_to_json(Q, p) for p in out.peaks],
        "records": [io.cyclic_record_to_json(Q, out.record_u), io.cyclic_record_to_json(Q, out.record_v)],
        "polytope": io.polytope_to_json(Q, include_vertices=True),
        "vertex_count": len(Q.known_vertices),
    }
    if args.verify:
        GQ = build_graph(Q, **enum_kwargs(args))
        value, _ = diameter(GQ, args.max_relaxations)
        payload["verified_diameter"] = value
        payload["formula_holds"] = value == out.predicted_diameter
    inputs = {"polytope": io.polytope_to_json(P), "u": args.u, "v": args.v, "r": args.r, "force": args.force}
    return payload, inputs


def _ball(args, dim) -> InteriorBall:
    center = io.parse_rational_list(args.center)
    if len(center) != dim:
        raise InputError(f"center needs {dim} coordinates")
    return InteriorBall(center, rational(args.radius2))


def rock_record(R) -> dict:
    G = R.graph
    return {
        "base": io.polytope_to_json(R.base),
        "ball": {"center": io.rat_list(R.ball.center), "radius2": io.format_rational(R.ball.radius2)},
        "Q": io.polytope_to_json(R.Q),
        "y": io.rat_list(R.y),
        "row_order": [R.base.labels[k] for k in R.row_order],
        "apex": io.rat_list(R.apex),
        "apex_index": R.apex_node(),
        "layers": {str(i): R.layer_index[v.basis] for i, v in enumerate(G.nodes)},
        "graph": io.graph_to_json(G),
    }


def cmd_rock_build(args) -> tuple:
    P = load_polytope(args.polytope)
    ball = _ball(args, P.dim)
    R = build_rock_extension(P, ball, **enum_kwargs(args))
    return rock_record(R), {"polytope": io.polytope_to_json(P), "center": args.center, "radius2": args.radius2}


def cmd_rock_path(args) -> tuple:
    data = load_json(args.record)
    try:
        base, ball_data, q_data = data["base"], data["ball"], data["Q"]
    except (KeyError, TypeError):
        raise InputError("rock record needs 'base', 'ball' and 'Q'") from None
    P = io.polytope_from_json(base)
    ball = InteriorBall(io.parse_rational_list(",".join(ball_data["center"])), rational(ball_data["radius2"]))
    R = build_rock_extension(P, ball, **enum_kwargs(args))
    if io.polytope_to_json(R.Q) != q_data:
        raise InputError("the record's Q does not match the rebuilt extension")
    path = path_between(R, args.u, args.v)
    G = R.graph
    payload = {"u": args.u, "v": args.v, "path": io.path_to_json(G, path.vertices),
               "bound": 2 * (R.rows - R.dim), "within_bound": path.length <= 2 * (R.rows - R.dim),
               "squared_apex_distances": [io.format_rational(R.dist2(G.nodes[i].point)) for i in path.vertices]}
    return payload, {"record": io.digest(data), "u": args.u, "v": args.v}


def cmd_verify_claims(args) -> tuple:
    from .verify import run_suites, summarize

    claims = run_suites(args.scope, args.max_d, args.seed)
    summary = summarize(claims)
    if args.format == "table":
        for c in claims:
            mark = "PASS" if c.ok else "FAIL"
            print(f"[{mark}] criterion {c.criterion:>2} | {c.name} | {c.instance} | expected {c.expected} | got {c.got}")
        for crit, (passed, total) in sorted(summary.items()):
            print(f"criterion {crit}: {passed}/{total} claims hold")
        payload = None
    else:
        payload = {
            "claims": [dict(criterion=c.criterion, claim=c.name, instance=c.instance, expected=c.expected,
                            got=c.got, ok=c.ok) for c in claims],
            "summary": {str(k): {"passed": p, "total": t} for k, (p, t) in sorted(summary.items())},
        }
    failed = any(not c.ok for c in claims)
    return payload, {"scope": args.scope, "max_d": args.max_d}, (EXIT_INTERNAL if failed else EXIT_OK)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=20240607)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for basis enumeration")
    common.add_argument("--max-bases", type=int, default=DEFAULT_MAX_BASES)
    common.add_argument("--max-relaxations", type=int, default=DEFAULT_MAX_RELAXATIONS)
    common.add_argument("--timing", action="store_true", help="record wall time in the manifest")

    parser = argparse.ArgumentParser(prog="polydist", description="Exact simple-polytope distance tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    poly_help = "polytope JSON file, '-', 'cube:D' or 'knapsack:b1,b2,...'"

    p = add("gen-knapsack", cmd_gen_knapsack, "build the knapsack gadget for a Partition instance")
    p.add_argument("--weights", required=True, help="comma-separated positive integers with even sum")

    p = add("distance", cmd_distance, "graph distance between two vertices")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--k", type=int)

    p = add("monotone-distance", cmd_monotone_distance, "shortest c-increasing path to the optimum")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--c", required=True, help="objective as comma-separated rationals")
    p.add_argument("--start", required=True)
    p.add_argument("--k", type=int)

    p = add("diameter", cmd_diameter, "combinatorial diameter by all-pairs BFS")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--graph", action="store_true", help="include the adjacency list")
    p.add_argument("--edge-list", action="store_true", help="include 'i -- j' edge lines")

    p = add("truncate", cmd_truncate, "cut off one vertex")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--vertex", required=True)
    p.add_argument("--label")

    p = add("silo", cmd_silo, "replace a vertex by a silo")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--vertex", required=True)
    p.add_argument("--order", help="comma-separated basis labels, first truncated first")

    p = add("cyclic-silo", cmd_cyclic_silo, "r*d silos with cyclically rotated orders")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--vertex", required=True)
    p.add_argument("--r", type=int, required=True)

    p = add("reduce-diameter", cmd_reduce_diameter, "cyclic silos at u and v so the peaks realise the diameter")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--force", action="store_true", help="allow r below max(diam(P), 6)")
    p.add_argument("--verify", action="store_true", help="check the formula by all-pairs BFS")

    p = add("rock-build", cmd_rock_build, "lift P to a rock extension around an interior ball")
    p.add_argument("--polytope", required=True, help=poly_help)
    p.add_argument("--center", required=True)
    p.add_argument("--radius2", required=True, help="squared radius of the interior ball")

    p = add("rock-path", cmd_rock_path, "greedy path between two vertices of a rock extension")
    p.add_argument("--record", required=True, help="JSON written by rock-build")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)

    p = add("verify-paper", cmd_verify_claims, "run the claim-by-claim verification suites")
    p.add_argument("--scope", choices=("knapsack", "silo", "rock", "all"), default="all")
    p.add_argument("--max-d", type=int)
    p.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def emit(payload, out_path) -> None:
    text = io.canonical_dumps(payload)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InternalInvariantError, PolytopeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    payload, inputs, *rest = result
    code = rest[0] if rest else EXIT_OK
    if payload is not None:
        manifest = io.RunManifest(args.command, inputs, args.seed, budgets(args),
                                  timing=time.perf_counter() - started if args.timing else None)
        manifest.outputs = {k: payload[k] for k in OUTPUT_KEYS if k in payload}
        payload = dict(payload, manifest=manifest.to_json())
        emit(payload, args.out)
        if payload.get("formula_holds") is False:
            code = EXIT_INTERNAL
    return code


# headline values copied into the manifest
OUTPUT_KEYS = ("partition", "monotone_partition", "distance", "within_k", "length", "diameter",
               "predicted_diameter", "verified_diameter", "formula_holds", "K", "vertex_count", "apex_index",
               "within_bound")


if __name__ == "__main__":
    sys.exit(main())
