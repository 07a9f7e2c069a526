from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from polydist import io
from polydist.errors import InputError
from polydist.knapsack import PartitionInstance, build_Pb
from polydist.polytope import HPolytope, build_graph, cube
from polydist.silo import cyclic_silo

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(st.integers(1, 4).flatmap(
    lambda d: st.lists(st.tuples(st.lists(fractions, min_size=d, max_size=d), fractions), min_size=d, max_size=6)))
def test_polytope_json_round_trip(rows):
    assume(all(any(r) for r, _ in rows))
    P = HPolytope.from_rows([r for r, _ in rows], [b for _, b in rows])
    data = json.loads(io.canonical_dumps(io.polytope_to_json(P)))
    assert io.polytope_from_json(data) == P


def test_json_uses_strings_only():
    data = io.polytope_to_json(build_Pb(PartitionInstance((1, 1))))
    assert data["b"][-1] == "5/4"
    assert all(isinstance(x, str) for row in data["A"] for x in row)


def test_floats_and_bad_dims_rejected():
    with pytest.raises(InputError):
        io.polytope_from_json({"A": [[0.5, 1]], "b": ["1"]})
    with pytest.raises(InputError):
        io.polytope_from_json({"dim": 3, "A": [["1", "0"]], "b": ["1"]})
    with pytest.raises(InputError):
        io.polytope_from_json({"b": ["1"]})


def test_tracked_vertices_survive_round_trip():
    Q, rec = cyclic_silo(cube(3), (0, 1, 2), 1)
    data = io.polytope_to_json(Q, include_vertices=True)
    back = io.polytope_from_json(json.loads(json.dumps(data)))
    assert sorted(back.known_vertices) == sorted(Q.known_vertices)
    record = io.cyclic_record_to_json(Q, rec)
    assert record["orders"][0] == ["lo:1", "lo:2", "lo:3"]
    assert len(record["peaks"]) == 4


def test_graph_and_path_json():
    G = build_graph(cube(2))
    data = io.graph_to_json(G)
    assert len(data["nodes"]) == 4 and all(len(nb) == 2 for nb in data["adjacency"])
    assert io.path_to_json(G, (0, 1))["length"] == 1


def test_manifest_digest_is_stable():
    a = io.RunManifest("diameter", {"x": [1, 2]}, 5).to_json()
    b = io.RunManifest("diameter", {"x": [1, 2]}, 5).to_json()
    assert a == b and "timing_seconds" not in a
    assert io.digest({"a": 1, "b": 2}) == io.digest({"b": 2, "a": 1})
    assert io.parse_rational_list("1/2, 3") == (Fraction(1, 2), Fraction(3))
