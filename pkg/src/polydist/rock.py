"""Rock extensions: a simple lift of P with an apex above an interior point, and greedy paths to it.

The lift is ``Q = {(x, z) : A x + y z <= b, z >= 0}``. Rows are added one at
a time; ``y_k`` is chosen so that the new hyperplane stays farther from the
apex ``(o, 1)`` than every positive-z vertex created so far, which is what
lets a walk that always moves to the neighbour nearest the apex make steady
progress.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import exact
from .errors import BallNotInterior, GreedyStuck, GreedyTie, InputError, LayeringFailed, NonUniqueMax, NotSimple
from .polytope import HPolytope, PathResult, PolytopeGraph, Vertex, build_graph, enumerate_feasible_bases, is_simple

BISECTION_STEPS = 40
CANDIDATE_FACTORS = (Fraction(1), Fraction(3, 4), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))
Z_LABEL = "z"


@dataclass(frozen=True)
class InteriorBall:
    center: tuple
    radius2: Fraction

    def check(self, P: HPolytope):
        """Raise BallNotInterior unless the open ball lies inside every halfspace."""
        if len(self.center) != P.dim:
            raise InputError("ball center has the wrong dimension")
        if self.radius2 <= 0:
            raise BallNotInterior("radius must be positive")
        for label, a, bk in zip(P.labels, P.A, P.b):
            slack = bk - exact.dot(a, self.center)
            if slack <= 0 or slack * slack < self.radius2 * exact.norm2(a):
                raise BallNotInterior(f"ball leaves the halfspace of row {label!r}")


@dataclass(frozen=True)
class RockExtension:
    Q: HPolytope
    base: HPolytope
    ball: InteriorBall
    y: tuple  # per base row, in base row order
    row_order: tuple  # base row indices in the order they were added
    apex: tuple
    layer_index: dict  # Q basis -> k (k = rows added when the vertex appeared; m + 1 for z = 0)
    watermarks: tuple  # max squared apex distance of the positive-z vertices after each step
    graph: PolytopeGraph

    @property
    def rows(self) -> int:
        return self.Q.m

    @property
    def dim(self) -> int:
        return self.Q.dim

    def dist2(self, point) -> Fraction:
        return exact.norm2(exact.sub(point, self.apex))

    def apex_node(self) -> int:
        return self.graph.index_of_point(self.apex)


def _lifted(P: HPolytope, rows, ys) -> HPolytope:
    A = [P.A[k] + (ys[k],) for k in rows]
    b = [P.b[k] for k in rows]
    labels = [P.labels[k] for k in rows]
    d = P.dim
    A.append(tuple([Fraction(0)] * d + [Fraction(-1)]))
    b.append(Fraction(0))
    labels.append(Z_LABEL)
    return HPolytope.from_rows(A, b, labels)


def _positively_spanning(vectors) -> bool:
    """True if d+1 vectors in d-space have a strictly positive combination equal to zero."""
    d = len(vectors[0])
    cols = [[vectors[k][i] for k in range(len(vectors))] for i in range(d)]
    null = exact.nullspace(cols, len(vectors))
    if len(null) != 1:
        return False
    lam = null[0]
    return all(x > 0 for x in lam) or all(x < 0 for x in lam)


def choose_initial_rows(P: HPolytope, center) -> tuple:
    """d+1 rows for the starting simplex: bounded if possible, else any with an invertible lift."""
    d = P.dim
    slack = [bk - exact.dot(a, center) for a, bk in zip(P.A, P.b)]
    fallback = None
    for rows in combinations(range(P.m), d + 1):
        lift = [P.A[k] + (slack[k],) for k in rows]
        if exact.determinant(lift) == 0:
            continue
        if _positively_spanning([P.A[k] for k in rows]):
            return rows
        if fallback is None:
            fallback = rows
    if fallback is None:
        raise LayeringFailed("no d+1 rows make the apex a vertex")
    return fallback


def build_rock_extension(P: HPolytope, ball: InteriorBall, **kwargs) -> RockExtension:
    """Build and fully verify a rock extension of the simple polytope P around ``ball``."""
    ball = InteriorBall(exact.vector(ball.center), exact.rational(ball.radius2))
    ball.check(P)
    base_bases = enumerate_feasible_bases(P, **kwargs)
    ok, witness = is_simple(P, base_bases)
    if not ok:
        raise NotSimple("base polytope is not simple", witness=witness)
    d = P.dim
    o = ball.center
    apex = o + (Fraction(1),)
    slack = [bk - exact.dot(a, o) for a, bk in zip(P.A, P.b)]

    def dist2(p):
        return exact.norm2(exact.sub(p, apex))

    first = choose_initial_rows(P, o)
    ys = {k: slack[k] for k in first}
    rows = list(first)
    Pk = _lifted(P, rows, ys)
    pos = {v.point for v in enumerate_feasible_bases(Pk) if v.point[-1] > 0}
    if pos != {apex}:
        raise LayeringFailed("the starting simplex does not have the apex as its only raised vertex")
    first_seen = {apex: d + 1}
    watermarks = [Fraction(0)]
    for k in [k for k in range(P.m) if k not in first]:
        W = max(dist2(p) for p in pos)
        y = _choose_y(P, rows, ys, k, slack[k], pos, W, dist2)
        if y is None:
            raise LayeringFailed(f"no rational y validates row {P.labels[k]!r}", row=P.labels[k])
        ys[k], new_pos = y
        rows.append(k)
        for p in new_pos - pos:
            first_seen[p] = len(rows)
        pos = new_pos
        watermarks.append(max(dist2(p) for p in pos))
    Q = _lifted(P, range(P.m), ys)
    return _finish(P, ball, Q, ys, tuple(rows), apex, first_seen, tuple(watermarks), base_bases, **kwargs)


def _choose_y(P, rows, ys, k, s, pos, W, dist2):
    """Largest dyadic y just short of tangency, then smaller fallbacks, each validated by enumeration."""
    a2 = exact.norm2(P.A[k])

    def far(y):
        return (s - y) ** 2 > W * (a2 + y * y)

    if not far(Fraction(0)):
        return None
    lo, hi = Fraction(0), s
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if far(mid):
            lo = mid
        else:
            hi = mid
    top = lo if lo > 0 else hi / 2
    candidates = [top * f for f in CANDIDATE_FACTORS if top * f > 0 and far(top * f)]
    for need_neighbour in (True, False):
        for y in candidates:
            trial = dict(ys)
            trial[k] = y
            Pk = _lifted(P, rows + [k], trial)
            bases = enumerate_feasible_bases(Pk)
            ok, _ = is_simple(Pk, bases)
            if not ok:
                continue
            new_pos = {v.point for v in bases if v.point[-1] > 0}
            if not pos <= new_pos:
                continue
            fresh = new_pos - pos
            if any(dist2(p) <= W for p in fresh):
                continue
            if need_neighbour and fresh:
                G = build_graph(Pk, bases)
                old_idx = {G.index_of_point(p) for p in pos}
                if not all(old_idx & set(G.adjacency[G.index_of_point(p)]) for p in fresh):
                    continue
            return y, new_pos
    return None


def _finish(P, ball, Q, ys, row_order, apex, first_seen, watermarks, base_bases, **kwargs):
    G = build_graph(Q, **kwargs)
    m = P.m
    layer = {}
    for v in G.nodes:
        if v.point[-1] > 0:
            if v.point not in first_seen:
                raise LayeringFailed("a raised vertex of Q was not created by any step")
            layer[v.basis] = first_seen[v.point]
        else:
            layer[v.basis] = m + 1
    R = RockExtension(Q, P, ball, tuple(ys[k] for k in range(m)), row_order, apex, layer, watermarks, G)
    problems = verify_rock_extension(R, base_bases)
    if problems:
        raise LayeringFailed("; ".join(problems))
    return R


def verify_rock_extension(R: RockExtension, base_bases=None) -> list:
    """Re-check the structural invariants from the enumerated graph; returns a list of failures."""
    G = R.graph
    problems = []
    if not all(y > 0 for y in R.y):
        problems.append("some y_k is not positive")
    top = max(v.point[-1] for v in G.nodes)
    tops = [v for v in G.nodes if v.point[-1] == top]
    if len(tops) != 1 or tops[0].point != R.apex:
        problems.append("apex is not the unique z-maximum")
    if base_bases is None:
        base_bases = enumerate_feasible_bases(R.base)
    floor = {v.point[:-1] for v in G.nodes if v.point[-1] == 0}
    if floor != {v.point for v in base_bases}:
        problems.append("z = 0 vertices differ from the vertices of P")
    raised = {i for i, v in enumerate(G.nodes) if v.point[-1] > 0}
    for i, v in enumerate(G.nodes):
        if v.point[-1] == 0 and not raised & set(G.adjacency[i]):
            problems.append(f"floor vertex {v.point} has no raised neighbour")
    by_layer = {}
    for v in G.nodes:
        if v.point[-1] > 0:
            by_layer.setdefault(R.layer_index[v.basis], []).append(R.dist2(v.point))
    seen_max = None
    for k in sorted(by_layer):
        if seen_max is not None and min(by_layer[k]) <= seen_max:
            problems.append(f"layer {k} is not separated from earlier layers")
        seen_max = max(by_layer[k]) if seen_max is None else max(seen_max, max(by_layer[k]))
    return problems


def greedy_path_to_apex(R: RockExtension, start) -> PathResult:
    """Repeatedly move to the neighbour nearest the apex; every step must strictly decrease the distance."""
    G = R.graph
    cur = G.node(start)
    target = R.apex_node()
    path = [cur]
    while cur != target:
        here = R.dist2(G.nodes[cur].point)
        scored = sorted((R.dist2(G.nodes[j].point), G.nodes[j].basis, j) for j in G.adjacency[cur])
        best = scored[0]
        if len(scored) > 1 and scored[1][0] == best[0]:
            warnings.warn("two neighbours are equally close to the apex; taking the smaller basis", GreedyTie, stacklevel=2)
        if best[0] >= here:
            raise GreedyStuck(f"no neighbour of node {cur} is closer to the apex")
        cur = best[2]
        path.append(cur)
        if len(path) > len(G.nodes):
            raise GreedyStuck("greedy walk revisits vertices")
    return PathResult(tuple(path))


def path_between(R: RockExtension, u, v) -> PathResult:
    """Greedy walk from u to the apex followed by the reversed walk from v."""
    G = R.graph
    iu, iv = G.node(u), G.node(v)
    if iu == iv:
        return PathResult((iu,))
    up = greedy_path_to_apex(R, iu).vertices
    down = greedy_path_to_apex(R, iv).vertices
    return PathResult(up + tuple(reversed(down[:-1])))


def find_apex_by_enumeration(R_or_Q) -> Vertex:
    """The unique vertex maximizing the last coordinate, found by full enumeration."""
    Q = R_or_Q.Q if isinstance(R_or_Q, RockExtension) else R_or_Q
    bases = enumerate_feasible_bases(Q)
    top = max(v.point[-1] for v in bases)
    winners = {v.point for v in bases if v.point[-1] == top}
    if len(winners) != 1:
        raise NonUniqueMax(f"{len(winners)} vertices attain the maximum height")
    return next(v for v in bases if v.point[-1] == top)
