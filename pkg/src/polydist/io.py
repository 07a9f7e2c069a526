"""JSON serialization with exact rational strings, plus run manifests."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import InputError
from .exact import format_rational, rational
from .polytope import HPolytope, PolytopeGraph, Vertex, basis_point


def rat_list(values) -> list:
    return [format_rational(x) for x in values]


def polytope_to_json(P: HPolytope, include_vertices: bool = False) -> dict:
    """HPolytope JSON; ``include_vertices`` adds tracked bases so large constructions can be reloaded."""
    out = {
        "dim": P.dim,
        "labels": list(P.labels),
        "A": [rat_list(row) for row in P.A],
        "b": rat_list(P.b),
    }
    if include_vertices and P.known_vertices is not None:
        out["vertices"] = [[P.labels[i] for i in v.basis] for v in sorted(P.known_vertices)]
    return out


def polytope_from_json(data: dict) -> HPolytope:
    try:
        A, b, labels = data["A"], data["b"], data.get("labels")
    except (KeyError, TypeError) as exc:
        raise InputError(f"polytope JSON needs 'A' and 'b': {exc}") from None
    for row in A:
        for x in row:
            if isinstance(x, float):
                raise InputError("polytope JSON must use exact rational strings, not floats")
    P = HPolytope.from_rows(A, b, labels)
    if "dim" in data and data["dim"] != P.dim:
        raise InputError(f"declared dim {data['dim']} does not match A ({P.dim} columns)")
    if data.get("vertices") is not None:
        # tracked vertices are only hints: vertices() certifies them before use
        known = []
        for labs in data["vertices"]:
            basis = P.basis_from_labels(labs)
            point = basis_point(P, basis)
            if point is None:
                raise InputError(f"listed vertex {labs} has a singular basis")
            known.append(Vertex(basis, point))
        P = HPolytope(P.A, P.b, P.labels, tuple(sorted(known)))
    return P


def vertex_to_json(P: HPolytope, v: Vertex) -> dict:
    return {"basis": [P.labels[i] for i in v.basis], "point": rat_list(v.point)}


def graph_to_json(G: PolytopeGraph) -> dict:
    P = G.polytope
    return {
        "nodes": [vertex_to_json(P, v) for v in G.nodes],
        "adjacency": [list(nb) for nb in G.adjacency],
    }


def path_to_json(G: PolytopeGraph, vertices) -> dict:
    return {
        "length": len(vertices) - 1,
        "nodes": list(vertices),
        "points": [rat_list(G.nodes[i].point) for i in vertices],
    }


def cyclic_record_to_json(P: HPolytope, record) -> dict:
    """Peaks, per-step neighbours and ground layers, orders and y labels of a cyclic silo."""
    def labs(v):
        return [P.labels[i] for i in v.basis]

    return {
        "r": record.r,
        "d": record.d,
        "base_vertex": labs(record.base_vertex),
        "peaks": [labs(v) for v in record.peaks],
        "neighbours": [[labs(v) for v in step] for step in record.neighbours],
        "layers": [[labs(v) for v in step] for step in record.layers],
        "orders": [list(o) for o in record.orders],
        "y_labels": [list(y) for y in record.y_labels],
    }


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: dict
    seed: int | None = None
    budgets: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "input_digest": digest(self.inputs),
            "seed": self.seed,
            "budgets": self.budgets,
            "outputs": self.outputs,
        }
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out


def parse_rational_list(text: str) -> tuple:
    return tuple(rational(part) for part in text.split(",") if part.strip())
