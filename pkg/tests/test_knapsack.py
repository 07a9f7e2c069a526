from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydist import exact
from polydist.errors import BudgetExceeded, NonPositiveWeight, OddSum, TiedObjectiveEdge
from polydist.knapsack import (
    KnapsackVertex,
    PartitionInstance,
    brute_force_partition,
    build_Pb,
    combinatorial_adjacent,
    combinatorial_graph,
    combinatorial_vertices,
    decide_partition_via_distance,
    decide_partition_via_monotone_distance,
    monotone_objective,
    partition_endpoints,
    random_instances,
    vertex_basis_labels,
    vertex_point,
)
from polydist.polytope import build_graph, diameter


@st.composite
def instances(draw, max_d=4, max_w=8):
    w = draw(st.lists(st.integers(1, max_w), min_size=2, max_size=max_d))
    if sum(w) % 2:
        w[-1] += 1
    return PartitionInstance(tuple(w))


def has_partition(weights):
    half = sum(weights) / 2
    return any(sum(c) == half for r in range(len(weights) + 1) for c in combinations(weights, r))


def test_instance_validation():
    with pytest.raises(OddSum):
        PartitionInstance((1, 2))
    with pytest.raises(NonPositiveWeight):
        PartitionInstance((0, 2))
    with pytest.raises(NonPositiveWeight):
        PartitionInstance((1.0, 1))


def test_small_gadget_shape():
    P = build_Pb(PartitionInstance((1, 1)))
    assert (P.m, P.dim) == (9, 4)
    assert P.labels[-1] == "ks"
    assert P.b[-1] == Fraction(5, 4)


def test_epsilon():
    assert monotone_objective(PartitionInstance((3, 1, 1, 1))).epsilon == Fraction(1, 15)


@given(instances())
def test_brute_force_oracle(inst):
    found = brute_force_partition(inst)
    assert (found is not None) == has_partition(inst.weights)
    if found is not None:
        assert sum(inst.weights[i - 1] for i in found) == inst.beta


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_partition(PartitionInstance((2,) * 12), max_d=10)


@given(instances(max_d=3))
def test_model_matches_enumeration(inst):
    P = build_Pb(inst)
    G = build_graph(P)
    verts, adj = combinatorial_graph(inst)
    assert sorted(vertex_point(inst, v) for v in verts) == sorted(v.point for v in G.nodes)
    idx = [G.index_of_basis(P.basis_from_labels(vertex_basis_labels(inst, v))) for v in verts]
    model = {tuple(sorted((idx[a], idx[c]))) for a in range(len(verts)) for c in adj[a]}
    assert model == set(G.edges())


@given(instances())
def test_decisions_agree_with_oracle(inst):
    truth = has_partition(inst.weights)
    G = build_graph(build_Pb(inst))
    dist = decide_partition_via_distance(inst, G)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TiedObjectiveEdge)
        mono = decide_partition_via_monotone_distance(inst, G)
    assert dist.answer == mono.answer == truth
    assert dist.length >= inst.d + 1  # each pivot swaps one facet; the endpoints differ in d + 1
    assert diameter(G)[0] <= 2 * inst.n


@given(instances())
def test_monotone_witness_increases(inst):
    G = build_graph(build_Pb(inst))
    c = monotone_objective(inst).c
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TiedObjectiveEdge)
        mono = decide_partition_via_monotone_distance(inst, G)
    values = [exact.dot(c, vertex_point(inst, v)) for v in mono.path]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert mono.path[0] == partition_endpoints(inst)[0]
    assert mono.path[-1] == partition_endpoints(inst)[1]


def test_yes_witness_walks_sliced_vertices():
    inst = PartitionInstance((1, 1, 2))
    dist = decide_partition_via_distance(inst)
    assert dist.answer and dist.length == inst.d + 1
    assert all(not v.is_cube and v.k == inst.n for v in dist.path)


def test_no_instance_distance():
    inst = PartitionInstance((1, 1, 4))
    assert decide_partition_via_distance(inst).length == 5


def test_adjacency_is_symmetric():
    inst = PartitionInstance((2, 1, 1))
    verts = combinatorial_vertices(inst)
    for u in verts:
        assert not combinatorial_adjacent(u, u)
        for v in verts:
            assert combinatorial_adjacent(u, v) == combinatorial_adjacent(v, u)


def test_vertex_names():
    assert str(KnapsackVertex.sliced((2, 1), 4)) == "({1,2},4)"
    assert str(KnapsackVertex.cube(())) == "{}"
    with pytest.raises(ValueError):
        KnapsackVertex.sliced((1,), 1)


def test_random_instances_are_seeded():
    a = random_instances(10, seed=7)
    assert a == random_instances(10, seed=7)
    assert all(sum(i.weights) % 2 == 0 and 2 <= i.d <= 6 for i in a)
