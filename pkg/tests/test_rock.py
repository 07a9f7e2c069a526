from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydist.errors import BallNotInterior, LayeringFailed, NotSimple
from polydist.graphs import bfs_distances
from polydist.polytope import HPolytope, cube, enumerate_feasible_bases
from polydist.rock import (
    InteriorBall,
    build_rock_extension,
    find_apex_by_enumeration,
    greedy_path_to_apex,
    path_between,
    verify_rock_extension,
)
from polydist.verify import nondegenerate_rock_fixtures

FIXTURES = {name: (P, ball) for name, P, ball in nondegenerate_rock_fixtures()}


@pytest.fixture(scope="module", params=sorted(FIXTURES))
def rock(request):
    P, ball = FIXTURES[request.param]
    return build_rock_extension(P, ball)


def test_projection_and_apex(rock):
    Q = rock.Q
    assert Q.m == rock.base.m + 1 and Q.dim == rock.base.dim + 1
    assert all(y > 0 for y in rock.y)
    assert find_apex_by_enumeration(rock).point == rock.apex
    floor = {v.point[:-1] for v in rock.graph.nodes if v.point[-1] == 0}
    assert floor == {v.point for v in enumerate_feasible_bases(rock.base)}
    assert verify_rock_extension(rock) == []


def test_layers_are_separated(rock):
    G = rock.graph
    by_layer = {}
    for v in G.nodes:
        if v.point[-1] > 0:
            by_layer.setdefault(rock.layer_index[v.basis], []).append(rock.dist2(v.point))
    layers = sorted(by_layer)
    for a, b in zip(layers, layers[1:]):
        assert max(by_layer[a]) < min(by_layer[b])


def test_greedy_paths(rock):
    G = rock.graph
    limit = rock.rows - rock.dim
    bfs_from_apex = bfs_distances(G.adjacency, rock.apex_node())
    for i in range(len(G.nodes)):
        path = greedy_path_to_apex(rock, i)
        d2 = [rock.dist2(G.nodes[j].point) for j in path.vertices]
        assert all(a > b for a, b in zip(d2, d2[1:]))
        assert bfs_from_apex[i] <= path.length <= limit
    for i in range(len(G.nodes)):
        for j in range(len(G.nodes)):
            assert path_between(rock, i, j).length <= 2 * limit


def test_boxes_have_no_unique_top():
    half = Fraction(1, 2)
    with pytest.raises(LayeringFailed):
        build_rock_extension(cube(2), InteriorBall((half, half), Fraction(1, 4)))


@given(st.integers(2, 3).flatmap(
    lambda d: st.lists(st.fractions(min_value=Fraction(1, 20), max_value=3, max_denominator=20),
                       min_size=2 * d, max_size=2 * d)))
def test_any_lift_of_a_box_has_a_flat_or_degenerate_top(ys):
    """For every positive y the top face of the lifted box is not a simple vertex."""
    d = len(ys) // 2
    P = cube(d)
    Q = HPolytope.from_rows([row + (y,) for row, y in zip(P.A, ys)] + [(0,) * d + (-1,)], list(P.b) + [0])
    bases = enumerate_feasible_bases(Q)
    top = max(v.point[-1] for v in bases)
    points = {v.point for v in bases if v.point[-1] == top}
    assert len(points) > 1 or len(Q.tight_rows(next(iter(points)))) > Q.dim


def test_ball_must_be_interior():
    half = Fraction(1, 2)
    with pytest.raises(BallNotInterior):
        build_rock_extension(cube(2), InteriorBall((half, half), Fraction(1)))
    with pytest.raises(BallNotInterior):
        build_rock_extension(cube(2), InteriorBall((Fraction(2), half), Fraction(1, 100)))


def test_base_must_be_simple():
    pyramid = HPolytope.from_rows([[0, 0, -1], [1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], [0, 1, 1, 1, 1])
    with pytest.raises(NotSimple):
        build_rock_extension(pyramid, InteriorBall((Fraction(0), Fraction(0), Fraction(1, 4)), Fraction(1, 100)))
