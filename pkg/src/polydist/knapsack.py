"""The knapsack polytope gadget that turns Partition into a distance question.

For weights ``b_1..b_d`` with even sum and ``beta = sum(b) / 2`` the gadget is
the unit cube in dimension ``n = d + 2`` cut by ``w.x <= beta + 1/4`` with
``w = (b_1, ..., b_d, -beta, beta + 1/2)``. Coordinates and subsets are
1-based throughout this module, matching the row labels ``lo:i``/``hi:i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded, InternalInvariantError, NonPositiveWeight, OddSum
from .polytope import HPolytope, build_graph, distance, shortest_monotone_path

QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class PartitionInstance:
    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        if not w:
            raise NonPositiveWeight("a Partition instance needs at least one weight")
        for x in w:
            if isinstance(x, bool) or not isinstance(x, int):
                raise NonPositiveWeight(f"weights must be integers, got {x!r}")
            if x <= 0:
                raise NonPositiveWeight(f"weights must be positive, got {x}")
        if sum(w) % 2:
            raise OddSum(f"weights {w} have odd sum {sum(w)}")
        object.__setattr__(self, "weights", w)

    @property
    def d(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        """Ambient dimension of the gadget."""
        return self.d + 2

    @property
    def beta(self) -> int:
        return sum(self.weights) // 2

    @property
    def rhs(self) -> Fraction:
        return self.beta + QUARTER


def knapsack_weights(inst: PartitionInstance) -> tuple:
    beta = inst.beta
    return tuple(Fraction(x) for x in inst.weights) + (Fraction(-beta), beta + Fraction(1, 2))


@dataclass(frozen=True)
class KnapsackVertex:
    """``Cube(S)`` when ``k`` is None, else ``Sliced(S, k)``: the cut point on the cube edge from S to S+k."""

    S: tuple  # sorted 1-based indices
    k: int | None = None

    @classmethod
    def cube(cls, S) -> "KnapsackVertex":
        return cls(tuple(sorted(S)))

    @classmethod
    def sliced(cls, S, k) -> "KnapsackVertex":
        if k in S:
            raise ValueError("k must lie outside S")
        return cls(tuple(sorted(S)), k)

    @property
    def is_cube(self) -> bool:
        return self.k is None

    def sort_key(self):
        return (self.S, 0 if self.k is None else self.k)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        body = "{" + ",".join(map(str, self.S)) + "}"
        return body if self.k is None else f"({body},{self.k})"


def _wsum(w, S) -> Fraction:
    return sum((w[i - 1] for i in S), Fraction(0))


def vertex_point(inst: PartitionInstance, v: KnapsackVertex) -> tuple:
    w = knapsack_weights(inst)
    x = [Fraction(0)] * inst.n
    for i in v.S:
        x[i - 1] = Fraction(1)
    if v.k is not None:
        x[v.k - 1] = (inst.rhs - _wsum(w, v.S)) / w[v.k - 1]
    return tuple(x)


def is_valid_vertex(inst: PartitionInstance, v: KnapsackVertex) -> bool:
    w = knapsack_weights(inst)
    s = _wsum(w, v.S)
    if v.k is None:
        return s <= inst.beta
    t = s + w[v.k - 1]
    return s < inst.rhs < t or t < inst.rhs < s


def build_Pb(inst: PartitionInstance) -> HPolytope:
    """Rows ``lo:1..lo:n``, ``hi:1..hi:n`` and the knapsack row ``ks``."""
    n = inst.n
    A, b, labels = [], [], []
    for i in range(n):
        A.append([-1 if j == i else 0 for j in range(n)])
        b.append(0)
        labels.append(f"lo:{i + 1}")
    for i in range(n):
        A.append([1 if j == i else 0 for j in range(n)])
        b.append(1)
        labels.append(f"hi:{i + 1}")
    A.append(list(knapsack_weights(inst)))
    b.append(inst.rhs)
    labels.append("ks")
    return HPolytope.from_rows(A, b, labels)


def vertex_basis_labels(inst: PartitionInstance, v: KnapsackVertex) -> tuple:
    """Tight row labels of a gadget vertex: the cube rows fixing 0/1 coordinates, plus ``ks`` if sliced."""
    out = []
    for i in range(1, inst.n + 1):
        if i in v.S:
            out.append(f"hi:{i}")
        elif i != v.k:
            out.append(f"lo:{i}")
    if v.k is not None:
        out.append("ks")
    return tuple(out)


def combinatorial_vertices(inst: PartitionInstance) -> list:
    """Every ``Cube(S)`` and ``Sliced(S, k)`` allowed by the weight conditions."""
    n = inst.n
    out = []
    for size in range(n + 1):
        for S in combinations(range(1, n + 1), size):
            cand = [KnapsackVertex.cube(S)] + [KnapsackVertex.sliced(S, k) for k in range(1, n + 1) if k not in S]
            out.extend(v for v in cand if is_valid_vertex(inst, v))
    return sorted(out)


def _one_sided_adjacent(u: KnapsackVertex, v: KnapsackVertex) -> bool:
    S, T = set(u.S), set(v.S)
    if u.is_cube and v.is_cube:
        return len(S ^ T) == 1  # (a)
    if u.is_cube:
        # (b): v cuts a cube edge at u, either S -> S+i or S-j -> S
        return (T == S and v.k not in S) or (v.k in S and T == S - {v.k})
    if v.is_cube:
        return False
    i, j = u.k, v.k
    if S == T:
        return i != j  # (c)
    if i != j and T == S | {i} and j not in S:
        return True  # (d)
    if i == j and len(T - S) == 1 and not S - T:
        return (T - S) != {i}  # (e)
    if i != j and len(S ^ T) == 2:
        # (f): u = (R+j, i)? and v = (R+i, j) with common R
        R = S & T
        return S == R | {j} and T == R | {i}
    return False


def combinatorial_adjacent(u: KnapsackVertex, v: KnapsackVertex, inst: PartitionInstance | None = None) -> bool:
    """Closed-form adjacency of two gadget vertices (cases (a)-(f))."""
    if u == v:
        return False
    return _one_sided_adjacent(u, v) or _one_sided_adjacent(v, u)


def combinatorial_graph(inst: PartitionInstance):
    """``(vertices, adjacency)`` of the gadget from the closed-form model alone."""
    verts = combinatorial_vertices(inst)
    adj = [[] for _ in verts]
    for a in range(len(verts)):
        for c in range(a + 1, len(verts)):
            if combinatorial_adjacent(verts[a], verts[c]):
                adj[a].append(c)
                adj[c].append(a)
    return verts, adj


def partition_endpoints(inst: PartitionInstance):
    n = inst.n
    start = KnapsackVertex.sliced((), n)
    end = KnapsackVertex.sliced(range(1, n - 1 + 1), n)
    for v in (start, end):
        if not is_valid_vertex(inst, v):
            raise InternalInvariantError(f"{v} is not a gadget vertex")
    return start, end


@dataclass(frozen=True)
class MonotoneObjective:
    c: tuple
    epsilon: Fraction


def monotone_objective(inst: PartitionInstance) -> MonotoneObjective:
    eps = Fraction(1, 5 * inst.beta)
    return MonotoneObjective((Fraction(1),) * (inst.n - 1) + (eps,), eps)


def brute_force_partition(inst: PartitionInstance, max_d: int = 30):
    """Some S (1-based, sorted) with weight sum beta, scanning subsets by bitmask; None if absent."""
    if inst.d > max_d:
        raise BudgetExceeded(f"2^{inst.d} subsets exceed the scan cap 2^{max_d}")
    w = inst.weights
    for mask in range(1 << inst.d):
        if sum(w[i] for i in range(inst.d) if mask >> i & 1) == inst.beta:
            return tuple(i + 1 for i in range(inst.d) if mask >> i & 1)
    return None


@dataclass(frozen=True)
class PartitionDecision:
    answer: bool
    length: int
    threshold: int
    path: tuple  # KnapsackVertex sequence
    graph_path: tuple  # node indices


def _endpoint_nodes(inst, G):
    P = G.polytope
    s, t = partition_endpoints(inst)
    return (G.index_of_basis(P.basis_from_labels(vertex_basis_labels(inst, s))),
            G.index_of_basis(P.basis_from_labels(vertex_basis_labels(inst, t))))


def identify_vertex(inst: PartitionInstance, point) -> KnapsackVertex:
    """Read a gadget point back as ``Cube(S)`` or ``Sliced(S, k)``."""
    S = tuple(i + 1 for i, x in enumerate(point) if x == 1)
    frac = [i + 1 for i, x in enumerate(point) if x not in (0, 1)]
    if not frac:
        return KnapsackVertex.cube(S)
    if len(frac) != 1:
        raise InternalInvariantError(f"{point} is not a gadget vertex")
    return KnapsackVertex.sliced(S, frac[0])


def decide_partition_via_distance(inst: PartitionInstance, G=None, **kwargs) -> PartitionDecision:
    """True iff the gadget endpoints are within distance d + 1."""
    if G is None:
        G = build_graph(build_Pb(inst), **kwargs)
    s, t = _endpoint_nodes(inst, G)
    length, path = distance(G, s, t)
    return PartitionDecision(length <= inst.d + 1, length, inst.d + 1,
                             tuple(identify_vertex(inst, G.nodes[i].point) for i in path.vertices), path.vertices)


def decide_partition_via_monotone_distance(inst: PartitionInstance, G=None, **kwargs) -> PartitionDecision:
    """True iff a c-increasing path of length at most d + 1 joins the start to the c-maximum."""
    if G is None:
        G = build_graph(build_Pb(inst), **kwargs)
    s, _ = _endpoint_nodes(inst, G)
    path = shortest_monotone_path(G, monotone_objective(inst).c, s)
    if path is None:
        raise InternalInvariantError("no monotone path to the optimum")
    return PartitionDecision(path.length <= inst.d + 1, path.length, inst.d + 1,
                             tuple(identify_vertex(inst, G.nodes[i].point) for i in path.vertices), path.vertices)


def random_instances(count: int, seed: int, min_d: int = 2, max_d: int = 6, lo: int = 1, hi: int = 12) -> list:
    """Seeded random instances; an odd total is fixed by nudging the last weight."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        d = rng.randint(min_d, max_d)
        w = [rng.randint(lo, hi) for _ in range(d)]
        if sum(w) % 2:
            w[-1] += 1 if w[-1] < hi else -1
            if w[-1] < 1:
                w[-1] += 2
        out.append(PartitionInstance(tuple(w)))
    return out


def exhaustive_instances(min_d: int = 2, max_d: int = 4, max_entry: int = 5) -> list:
    """Every weight vector with entries in ``[1, max_entry]`` and even sum."""
    from itertools import product

    out = []
    for d in range(min_d, max_d + 1):
        for w in product(range(1, max_entry + 1), repeat=d):
            if sum(w) % 2 == 0:
                out.append(PartitionInstance(w))
    return out
