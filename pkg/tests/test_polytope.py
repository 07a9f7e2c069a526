from __future__ import annotations

import warnings
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydist import exact
from polydist.errors import BudgetExceeded, InternalInvariantError, NotAVertex, NotSimple, TiedObjectiveEdge
from polydist.polytope import (
    HPolytope,
    Vertex,
    build_graph,
    certify_vertices,
    cube,
    diameter,
    distance,
    enumerate_feasible_bases,
    facet_status,
    find_vertex,
    is_simple,
    pivot_distance,
    shortest_monotone_path,
)


def brute_force_bases(P):
    """Every d-subset of rows, solved and checked directly."""
    out = []
    for basis in combinations(range(P.m), P.dim):
        x = exact.solve_square([P.A[i] for i in basis], [P.b[i] for i in basis])
        if x is not None and P.contains(x):
            out.append(Vertex(basis, x))
    return out


def geometric_edges(P, nodes):
    """u ~ v iff the rows tight at both have rank d-1 (the segment lies on an edge)."""
    edges = set()
    for a, c in combinations(range(len(nodes)), 2):
        common = set(P.tight_rows(nodes[a].point)) & set(P.tight_rows(nodes[c].point))
        if exact.rank([P.A[i] for i in common]) == P.dim - 1:
            edges.add((a, c))
    return edges


@st.composite
def boxed_polytopes(draw):
    """A box [-3,3]^d cut by a few random rows that keep the origin strictly inside."""
    d = draw(st.integers(2, 3))
    A = [tuple(-1 if j == i else 0 for j in range(d)) for i in range(d)]
    A += [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    b = [3] * (2 * d)
    for _ in range(draw(st.integers(1, 3))):
        row = tuple(draw(st.lists(st.integers(-3, 3), min_size=d, max_size=d)))
        if any(row):
            A.append(row)
            b.append(draw(st.integers(1, 6)))
    return HPolytope.from_rows(A, b)


def test_cube_graph_is_hypercube():
    for d in range(1, 6):
        G = build_graph(cube(d))
        assert len(G.nodes) == 2 ** d
        for i, j in G.edges():
            assert sum(x != y for x, y in zip(G.nodes[i].point, G.nodes[j].point)) == 1
        assert len(G.edges()) == d * 2 ** (d - 1)
        assert diameter(G)[0] == d


@given(boxed_polytopes())
def test_enumeration_matches_brute_force(P):
    assert enumerate_feasible_bases(P) == brute_force_bases(P)


@given(boxed_polytopes())
def test_graph_matches_geometric_adjacency(P):
    ok, _ = is_simple(P)
    if not ok:
        with pytest.raises(NotSimple):
            build_graph(P)
        return
    G = build_graph(P)
    assert set(G.edges()) == geometric_edges(P, G.nodes)
    assert all(len(nbrs) == P.dim for nbrs in G.adjacency)


def test_parallel_enumeration_agrees():
    P = cube(4)
    assert enumerate_feasible_bases(P, jobs=2) == enumerate_feasible_bases(P)


def test_square_pyramid_is_not_simple():
    P = HPolytope.from_rows([[0, 0, -1], [1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], [0, 1, 1, 1, 1])
    ok, witness = is_simple(P)
    assert not ok and witness == (0, 0, 1)
    with pytest.raises(NotSimple):
        build_graph(P)


def test_basis_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_feasible_bases(cube(3), max_bases=10)


def test_redundant_row_detected():
    P = HPolytope.from_rows([[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1]], [1, 1, 0, 0, 5])
    assert facet_status(P) == ("facet",) * 4 + ("redundant",)


def test_certification_rejects_incomplete_lists():
    P = cube(3)
    verts = enumerate_feasible_bases(P)
    assert certify_vertices(P, verts) == verts
    with pytest.raises(InternalInvariantError):
        certify_vertices(P, verts[:-1])


def test_distance_and_vertex_specs():
    G = build_graph(cube(3))
    zero, one = (Fraction(0),) * 3, (Fraction(1),) * 3
    length, path = distance(G, zero, ("hi:1", "hi:2", "hi:3"))
    assert length == 3 and path.length == 3
    assert G.nodes[path.vertices[-1]].point == one
    with pytest.raises(NotAVertex):
        G.node((Fraction(2), Fraction(0), Fraction(0)))
    assert find_vertex(cube(3), (0, 1, 2)).point == zero


def test_monotone_paths_on_cube():
    G = build_graph(cube(3))
    path = shortest_monotone_path(G, (1, 1, 1), G.node((Fraction(0),) * 3))
    assert path.length == 3
    assert pivot_distance(G, (1, 2, 3), ("lo:1", "lo:2", "lo:3")) == 3
    with pytest.warns(TiedObjectiveEdge):
        tied = shortest_monotone_path(G, (1, 0, 0), G.node((Fraction(0),) * 3))
    assert tied.length == 1


def test_monotone_path_never_decreases():
    G = build_graph(cube(4))
    c = (Fraction(3), Fraction(-1), Fraction(2), Fraction(1, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for i in range(len(G.nodes)):
            path = shortest_monotone_path(G, c, i)
            values = [exact.dot(c, G.nodes[j].point) for j in path.vertices]
            assert all(a < b for a, b in zip(values, values[1:]))
