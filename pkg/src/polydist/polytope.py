"""H-polytopes, feasible bases, polytope graphs and shortest (monotone) paths.

A polytope is ``{x : A x <= b}`` with one stable label per row. Feasible
bases are stored as sorted tuples of row indices; rows are only ever
appended by the constructions in this package, so indices stay valid.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb, lcm
from typing import NamedTuple

from . import exact
from .errors import (
    DimensionTooSmall,
    InputError,
    InternalInvariantError,
    NotAVertex,
    NotSimple,
    TiedObjectiveEdge,
    TimeBudgetExceeded,
    Unreachable,
)
from .graphs import DEFAULT_MAX_RELAXATIONS, all_pairs_eccentricity, bfs_path, is_connected

DEFAULT_MAX_BASES = 5_000_000


class Vertex(NamedTuple):
    basis: tuple  # sorted row indices
    point: tuple  # Fractions


@dataclass(frozen=True)
class PathResult:
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class HPolytope:
    A: tuple
    b: tuple
    labels: tuple
    # (basis, point) pairs supplied by a construction that tracked them; checked before use
    known_vertices: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.A) != len(self.b) or len(self.labels) != len(self.b):
            raise InputError("A, b and labels must have the same number of rows")
        if not self.A:
            raise InputError("a polytope needs at least one inequality")
        d = len(self.A[0])
        if d == 0 or any(len(row) != d for row in self.A):
            raise InputError("all rows of A must have the same positive length")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("row labels must be pairwise distinct")
        for label, row in zip(self.labels, self.A):
            if all(a == 0 for a in row):
                raise InputError(f"row {label!r} of A is zero")

    @classmethod
    def from_rows(cls, A, b, labels=None, known_vertices=None) -> "HPolytope":
        A = exact.matrix(A)
        b = exact.vector(b)
        if labels is None:
            labels = tuple(range(len(b)))
        return cls(A, b, tuple(labels), known_vertices)

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def dim(self) -> int:
        return len(self.A[0])

    @cached_property
    def _label_index(self) -> dict:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def int_rows(self) -> tuple:
        """Each row ``(a, b)`` scaled by a positive integer so every entry is integral."""
        return tuple(exact.integer_row(tuple(a) + (bi,)) for a, bi in zip(self.A, self.b))

    def row_index(self, label) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise InputError(f"unknown row label {label!r}") from None

    def basis_labels(self, basis) -> tuple:
        return tuple(self.labels[i] for i in basis)

    def basis_from_labels(self, labels) -> tuple:
        return tuple(sorted(self.row_index(lab) for lab in labels))

    def with_rows(self, A_rows, b_rows, labels, known_vertices=None) -> "HPolytope":
        return HPolytope(self.A + tuple(A_rows), self.b + tuple(b_rows), self.labels + tuple(labels), known_vertices)

    def slacks(self, point) -> tuple:
        """``b_i - A_i x`` scaled by positive per-row factors (sign and zero pattern are exact)."""
        N, D = _common_denominator(point)
        return tuple(r[-1] * D - sum(a * n for a, n in zip(r, N)) for r in self.int_rows)

    def tight_rows(self, point) -> tuple:
        return tuple(i for i, s in enumerate(self.slacks(point)) if s == 0)

    def contains(self, point) -> bool:
        return all(s >= 0 for s in self.slacks(point))


def _common_denominator(point):
    D = 1
    for x in point:
        D = lcm(D, x.denominator)
    return tuple(int(x * D) for x in point), D


# -- exhaustive enumeration ------------------------------------------------

def _reduce(row, echelon):
    """Reduce an integer augmented row against echelon rows (fraction-free)."""
    r = list(row)
    for pc, prow in echelon:
        f = r[pc]
        if f:
            p = prow[pc]
            r = [p * x - f * y for x, y in zip(r, prow)]
    return r


def _primitive(r):
    from math import gcd

    g = 0
    for x in r:
        g = gcd(g, x)
    return [x // g for x in r] if g > 1 else r


def _solve_echelon(echelon, d):
    x = [Fraction(0)] * d
    for pc, row in reversed(echelon):
        s = Fraction(row[d])
        for c in range(d):
            if c != pc and row[c]:
                s -= row[c] * x[c]
        x[pc] = s / row[pc]
    return tuple(x)


def _scan(int_rows, d, first_rows):
    """Depth-first scan of d-subsets whose smallest index lies in ``first_rows``."""
    m = len(int_rows)
    found = []
    recent = []  # rows that recently rejected a candidate; checked first

    def feasible(basis, x):
        N, D = _common_denominator(x)
        for i in recent:
            r = int_rows[i]
            if r[-1] * D < sum(a * n for a, n in zip(r, N)):
                return False
        bset = set(basis)
        for i, r in enumerate(int_rows):
            if i in bset:
                continue
            if r[-1] * D < sum(a * n for a, n in zip(r, N)):
                if i in recent:
                    recent.remove(i)
                recent.insert(0, i)
                del recent[8:]
                return False
        return True

    def extend(basis, echelon, start):
        if len(basis) == d:
            x = _solve_echelon(echelon, d)
            if feasible(basis, x):
                found.append(Vertex(tuple(basis), x))
            return
        need = d - len(basis)
        for i in range(start, m - need + 1):
            r = _reduce(int_rows[i], echelon)
            pc = next((c for c in range(d) if r[c]), None)
            if pc is None:
                continue  # dependent on the prefix: every superset is singular
            basis.append(i)
            echelon.append((pc, _primitive(r)))
            extend(basis, echelon, i + 1)
            basis.pop()
            echelon.pop()

    for i in first_rows:
        r = list(int_rows[i])
        pc = next(c for c in range(d) if r[c])
        extend([i], [(pc, r)], i + 1)
    return found


def _scan_job(args):
    return _scan(*args)


def enumerate_feasible_bases(P: HPolytope, *, max_bases: int = DEFAULT_MAX_BASES, jobs: int = 1) -> list:
    """All feasible bases of P with their points, in lexicographic order.

    A basis is a d-subset of rows with ``A_B`` invertible whose solution
    satisfies every inequality. Degenerate vertices appear once per basis.
    """
    m, d = P.m, P.dim
    if m < d:
        raise DimensionTooSmall(f"{m} rows cannot define a vertex in dimension {d}")
    total = comb(m, d)
    if total > max_bases:
        raise TimeBudgetExceeded(f"C({m},{d}) = {total} bases exceeds the cap of {max_bases}")
    firsts = list(range(m - d + 1))
    if jobs <= 1:
        found = _scan(P.int_rows, d, firsts)
    else:
        chunks = [firsts[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_scan_job, [(P.int_rows, d, c) for c in chunks if c])
            found = [v for part in parts for v in part]
    return sorted(found)


# -- pivots and certification ---------------------------------------------

def edge_direction(P: HPolytope, basis, leave) -> tuple:
    """Direction leaving row ``leave`` while keeping the other basis rows tight."""
    rows = [P.A[i] for i in basis]
    rhs = [Fraction(-1) if i == leave else Fraction(0) for i in basis]
    direction = exact.solve_square(rows, rhs)
    if direction is None:
        raise InputError(f"rows {P.basis_labels(basis)} are not a basis")
    return direction


def pivot(P: HPolytope, vertex: Vertex, leave: int) -> Vertex:
    """The neighbour reached by dropping row ``leave`` from the basis (ratio test)."""
    if leave not in vertex.basis:
        raise InputError(f"row {leave} is not in the basis")
    delta = edge_direction(P, vertex.basis, leave)
    basis = set(vertex.basis)
    best = None
    tied = False
    for j in range(P.m):
        if j in basis:
            continue
        rate = exact.dot(P.A[j], delta)
        if rate <= 0:
            continue
        t = (P.b[j] - exact.dot(P.A[j], vertex.point)) / rate
        if best is None or t < best[0]:
            best, tied = (t, j), False
        elif t == best[0]:
            tied = True
    if best is None:
        raise InputError("unbounded edge: the polyhedron is not a polytope")
    t, enter = best
    if tied or t == 0:
        raise NotSimple("degenerate pivot", witness=vertex.point)
    new_basis = tuple(sorted((basis - {leave}) | {enter}))
    return Vertex(new_basis, tuple(x + t * dx for x, dx in zip(vertex.point, delta)))


def neighbors(P: HPolytope, vertex: Vertex) -> list:
    """The d neighbours of a simple vertex, ordered by leaving row index."""
    return [pivot(P, vertex, leave) for leave in vertex.basis]


def basis_point(P: HPolytope, basis) -> tuple | None:
    return exact.solve_square([P.A[i] for i in basis], [P.b[i] for i in basis])


def certify_vertices(P: HPolytope, vertices) -> list:
    """Check that ``vertices`` is exactly the vertex set of the simple polytope P.

    Every listed basis must be a simple vertex (exactly its d rows tight,
    the rest strict) and every pivot must land in the list again. A non-empty
    pivot-closed set of vertices is the whole graph, since polytope graphs
    are connected.
    """
    index = {}
    for v in vertices:
        slack = P.slacks(v.point)
        tight = tuple(i for i, s in enumerate(slack) if s == 0)
        if any(s < 0 for s in slack):
            raise InternalInvariantError(f"tracked vertex {v.basis} violates an inequality")
        if tight != tuple(v.basis):
            raise NotSimple(f"vertex {v.basis} has tight rows {tight}", witness=v.point)
        index[tuple(v.basis)] = v
    if not index:
        raise InternalInvariantError("empty vertex list")
    for v in index.values():
        for leave in v.basis:
            w = pivot(P, v, leave)
            known = index.get(w.basis)
            if known is None or known.point != w.point:
                raise InternalInvariantError(f"pivot from {v.basis} reaches untracked vertex {w.basis}")
    return sorted(index.values())


def vertices(P: HPolytope, *, max_bases: int = DEFAULT_MAX_BASES, jobs: int = 1) -> list:
    """Feasible bases of P: certified tracked vertices if present, else an exhaustive scan."""
    if P.known_vertices is not None:
        return certify_vertices(P, P.known_vertices)
    return enumerate_feasible_bases(P, max_bases=max_bases, jobs=jobs)


def is_simple(P: HPolytope, bases=None, **kwargs):
    """``(True, None)`` if every vertex has exactly d tight rows, else ``(False, witness_point)``."""
    if bases is None:
        try:
            bases = vertices(P, **kwargs)
        except NotSimple as exc:
            return False, exc.witness
    seen = set()
    for v in bases:
        if v.point in seen:
            return False, v.point
        seen.add(v.point)
        if len(P.tight_rows(v.point)) != P.dim:
            return False, v.point
    return True, None


def facet_status(P: HPolytope, bases=None, **kwargs) -> tuple:
    """Per row: ``"facet"`` if tight at d affinely independent vertices, else ``"redundant"``."""
    if bases is None:
        bases = vertices(P, **kwargs)
    points = {v.point for v in bases}
    tight_at = {i: [] for i in range(P.m)}
    for p in sorted(points):
        for i in P.tight_rows(p):
            tight_at[i].append(p + (Fraction(1),))
    return tuple("facet" if exact.rank(tight_at[i]) >= P.dim else "redundant" for i in range(P.m))


# -- graph -----------------------------------------------------------------

@dataclass(frozen=True)
class PolytopeGraph:
    polytope: HPolytope
    nodes: tuple  # Vertex, lexicographic by basis
    adjacency: tuple  # sorted neighbour indices per node

    @cached_property
    def _by_basis(self):
        return {v.basis: i for i, v in enumerate(self.nodes)}

    @cached_property
    def _by_point(self):
        return {v.point: i for i, v in enumerate(self.nodes)}

    def __len__(self):
        return len(self.nodes)

    def edges(self) -> list:
        return [(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs if i < j]

    def index_of_basis(self, basis) -> int:
        key = tuple(sorted(basis))
        if key not in self._by_basis:
            raise NotAVertex(f"{key} is not a feasible basis")
        return self._by_basis[key]

    def index_of_point(self, point) -> int:
        key = tuple(exact.rational(x) for x in point)
        if key not in self._by_point:
            raise NotAVertex(f"{key} is not a vertex")
        return self._by_point[key]

    def node(self, spec) -> int:
        """Resolve a node index, a Vertex, a point, or a set of row labels."""
        if isinstance(spec, int) and not isinstance(spec, bool):
            if not 0 <= spec < len(self.nodes):
                raise NotAVertex(f"node index {spec} out of range")
            return spec
        if isinstance(spec, Vertex):
            return self.index_of_basis(spec.basis)
        items = tuple(spec)
        if len(items) == self.polytope.dim and all(isinstance(x, Fraction) for x in items):
            return self.index_of_point(items)
        return self.index_of_basis(self.polytope.basis_from_labels(items))


def build_graph(P: HPolytope, bases=None, **kwargs) -> PolytopeGraph:
    """Vertex-edge graph of a simple polytope (nodes are feasible bases)."""
    if bases is None:
        try:
            bases = vertices(P, **kwargs)
        except NotSimple as exc:
            raise NotSimple(str(exc), exc.witness) from None
    ok, witness = is_simple(P, bases)
    if not ok:
        raise NotSimple("polytope is not simple", witness=witness)
    nodes = tuple(sorted(bases))
    tight = [set(v.basis) for v in nodes]  # simple: the tight rows are the basis
    by_facet_set = {}
    for idx, v in enumerate(nodes):
        for leave in v.basis:
            by_facet_set.setdefault(tuple(r for r in v.basis if r != leave), []).append(idx)
    adj = [set() for _ in nodes]
    for members in by_facet_set.values():
        for a in members:
            for c in members:
                if a < c and nodes[a].point != nodes[c].point and len(tight[a] & tight[c]) >= P.dim - 1:
                    adj[a].add(c)
                    adj[c].add(a)
    adjacency = tuple(tuple(sorted(s)) for s in adj)
    if not is_connected(adjacency):
        raise InternalInvariantError("polytope graph is disconnected")
    return PolytopeGraph(P, nodes, adjacency)


def distance(G: PolytopeGraph, u, v):
    """Exact graph distance and one shortest path."""
    s, t = G.node(u), G.node(v)
    path = bfs_path(G.adjacency, s, [t])
    if path is None:
        raise Unreachable(f"no path from node {s} to node {t}")
    return len(path) - 1, PathResult(tuple(path))


def diameter(G: PolytopeGraph, max_relaxations: int = DEFAULT_MAX_RELAXATIONS):
    """Combinatorial diameter and the first pair (in node order) attaining it."""
    value, pair = all_pairs_eccentricity(G.adjacency, max_relaxations=max_relaxations)
    if value < 0:
        raise Unreachable(f"graph is disconnected at pair {pair}")
    return value, pair


def _objective_values(G, c):
    c = exact.vector(c)
    if len(c) != G.polytope.dim:
        raise InputError("objective has the wrong dimension")
    return [exact.dot(c, v.point) for v in G.nodes]


def monotone_adjacency(G: PolytopeGraph, c) -> tuple:
    """Edges oriented toward strictly larger objective; tied edges are dropped with a warning."""
    values = _objective_values(G, c)
    out = []
    ties = 0
    for i, nbrs in enumerate(G.adjacency):
        row = []
        for j in nbrs:
            if values[j] > values[i]:
                row.append(j)
            elif values[j] == values[i] and i < j:
                ties += 1
        out.append(tuple(row))
    if ties:
        warnings.warn(f"{ties} edge(s) have equal objective at both ends and were excluded", TiedObjectiveEdge, stacklevel=3)
    return tuple(out)


def shortest_monotone_path(P_or_G, c, start):
    """Shortest strictly c-increasing path from ``start`` to a c-maximal vertex, or None."""
    G = P_or_G if isinstance(P_or_G, PolytopeGraph) else build_graph(P_or_G)
    values = _objective_values(G, c)
    best = max(values)
    targets = [i for i, val in enumerate(values) if val == best]
    path = bfs_path(monotone_adjacency(G, c), G.node(start), targets)
    return None if path is None else PathResult(tuple(path))


def pivot_distance(P_or_G, c, basis) -> int:
    """Fewest monotone pivots from ``basis`` to an optimal basis (simple polytopes only)."""
    G = P_or_G if isinstance(P_or_G, PolytopeGraph) else build_graph(P_or_G)
    P = G.polytope
    basis = tuple(basis)
    if basis and not all(isinstance(i, int) for i in basis):
        basis = P.basis_from_labels(basis)
    path = shortest_monotone_path(G, c, G.index_of_basis(basis))
    if path is None:
        raise Unreachable("no monotone path to an optimum")
    return path.length


def cube(d: int, lo=0, hi=1) -> HPolytope:
    """``[lo, hi]^d`` with rows labelled ``lo:i`` and ``hi:i`` (1-based)."""
    A, b, labels = [], [], []
    for i in range(d):
        A.append([-1 if j == i else 0 for j in range(d)])
        b.append(-Fraction(lo))
        labels.append(f"lo:{i + 1}")
    for i in range(d):
        A.append([1 if j == i else 0 for j in range(d)])
        b.append(Fraction(hi))
        labels.append(f"hi:{i + 1}")
    return HPolytope.from_rows(A, b, labels)


def find_vertex(P: HPolytope, spec, bases=None) -> Vertex:
    """Resolve a vertex given a Vertex, a basis of row indices, row labels, or a point."""
    if isinstance(spec, Vertex):
        return spec
    items = tuple(spec)
    if bases is None:
        bases = vertices(P)
    if len(items) == P.dim and all(isinstance(x, Fraction) for x in items):
        for v in bases:
            if v.point == items:
                return v
        raise NotAVertex(f"{items} is not a vertex")
    if all(isinstance(x, int) for x in items) and not any(isinstance(x, bool) for x in items):
        key = tuple(sorted(items))
    else:
        key = P.basis_from_labels(items)
    for v in bases:
        if v.basis == key:
            return v
    raise NotAVertex(f"{P.basis_labels(key)} is not a feasible basis")
