"""Truncation, basis generating functions, silos, cyclic silos and the diameter reduction.

A truncation cuts one vertex off a simple polytope with the hyperplane
through the midpoints of its incident edges. Every construction here keeps
track of the vertex set of its output (``HPolytope.known_vertices``), which
is what makes the larger towers affordable; ``polytope.certify_vertices``
re-checks that bookkeeping from scratch whenever a graph is built.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import exact
from .errors import (
    BasisNotPresent,
    DimensionTooSmall,
    InputError,
    InternalInvariantError,
    NotAVertex,
    NotSimple,
    RecordInconsistent,
    RTooSmall,
)
from .graphs import bfs_distances, bfs_path
from .polytope import (
    HPolytope,
    Vertex,
    build_graph,
    diameter,
    enumerate_feasible_bases,
    find_vertex,
    is_simple,
    pivot,
)


# -- truncation --------------------------------------------------------------

def _fresh_label(P: HPolytope, base: str) -> str:
    label, n = base, 1
    while label in P._label_index:
        n += 1
        label = f"{base}.{n}"
    return label


def current_vertices(P: HPolytope, **kwargs) -> list:
    """Tracked vertices if the polytope carries them, otherwise an exhaustive scan checked for simplicity."""
    if P.known_vertices is not None:
        return list(P.known_vertices)
    bases = enumerate_feasible_bases(P, **kwargs)
    ok, witness = is_simple(P, bases)
    if not ok:
        raise NotSimple("polytope is not simple", witness=witness)
    return bases


def truncate(P: HPolytope, v, label=None, **kwargs) -> HPolytope:
    """Cut vertex ``v`` off P through the midpoints of its d incident edges.

    The new row is appended last and oriented so that ``v`` violates it.
    """
    bases = current_vertices(P, **kwargs)
    vert = find_vertex(P, v, bases)
    by_basis = {u.basis: u for u in bases}
    if by_basis.get(vert.basis) != vert:
        raise NotAVertex(f"{P.basis_labels(vert.basis)} is not a vertex")
    nbrs = [pivot(P, vert, leave) for leave in vert.basis]
    for w in nbrs:
        if by_basis.get(w.basis) != w:
            raise InternalInvariantError(f"neighbour {P.basis_labels(w.basis)} missing from the vertex list")
    mids = [exact.midpoint(vert.point, w.point) for w in nbrs]
    normal, alpha = exact.hyperplane_through_points(mids)
    if exact.dot(normal, vert.point) < alpha:
        normal, alpha = tuple(-a for a in normal), -alpha
    new_index = P.m
    kept = [u for u in bases if u.basis != vert.basis]
    for u in kept:
        if exact.dot(normal, u.point) >= alpha:
            raise InternalInvariantError(f"truncation hyperplane cuts vertex {P.basis_labels(u.basis)}")
    created = [Vertex(tuple(sorted(set(vert.basis) - {leave} | {new_index})), mid)
               for leave, mid in zip(vert.basis, mids)]
    label = _fresh_label(P, f"t:{P.m}") if label is None else label
    return P.with_rows([normal], [alpha], [label], tuple(sorted(kept + created)))


# -- generating functions ----------------------------------------------------

@dataclass(frozen=True)
class GeneratingFunction:
    """Multiset of feasible bases, each a frozenset of row labels."""

    terms: Counter = field(compare=False)

    def __eq__(self, other):
        return isinstance(other, GeneratingFunction) and +self.terms == +other.terms

    def __len__(self):
        return sum(self.terms.values())

    def __contains__(self, monomial):
        return self.terms[frozenset(monomial)] > 0

    def monomials(self) -> list:
        return sorted((sorted(map(str, m)) for m in +self.terms), key=lambda x: x)

    def is_set(self) -> bool:
        return all(c == 1 for c in (+self.terms).values())

    def difference(self, other) -> tuple:
        """``(only_here, only_there)`` as Counters."""
        return self.terms - other.terms, other.terms - self.terms


def generating_function(P: HPolytope, **kwargs) -> GeneratingFunction:
    from .polytope import vertices

    return GeneratingFunction(Counter(frozenset(P.basis_labels(v.basis)) for v in vertices(P, **kwargs)))


def predict_truncation_gf(f: GeneratingFunction, Bstar, new_label) -> GeneratingFunction:
    """Remove ``Bstar`` and add ``Bstar - i + new`` for each of its elements."""
    Bstar = frozenset(Bstar)
    if f.terms[Bstar] <= 0:
        raise BasisNotPresent(f"{sorted(map(str, Bstar))} is not a monomial")
    out = Counter(f.terms)
    out[Bstar] -= 1
    for i in Bstar:
        out[(Bstar - {i}) | {new_label}] += 1
    return GeneratingFunction(+out)


# -- the silo graph ----------------------------------------------------------

def _silo_edge(p, q) -> bool:
    (a, b), (a2, b2) = sorted([p, q], key=lambda t: t[1])
    if p == q:
        return False
    if b == b2:
        return True
    if b2 == b + 1:
        return a == a2 and b != a - 1
    if b2 == b + 2:
        return a == a2 and b == a - 1
    return False


@dataclass(frozen=True)
class SiloGraph:
    d: int
    nodes: tuple  # (a, b) with a != b, lexicographic
    adjacency: tuple

    def index(self, node) -> int:
        return self.nodes.index(tuple(node))

    def edges(self) -> list:
        return [(self.nodes[i], self.nodes[j]) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    def distance(self, p, q) -> int:
        return bfs_distances(self.adjacency, self.index(p))[self.index(q)]


def silo_graph(d: int) -> SiloGraph:
    if d < 3:
        raise DimensionTooSmall("silo graphs are defined for d >= 3")
    nodes = tuple((a, b) for a in range(1, d + 1) for b in range(1, d + 1) if a != b)
    adj = tuple(tuple(j for j, q in enumerate(nodes) if _silo_edge(p, q)) for p in nodes)
    return SiloGraph(d, nodes, adj)


def silo_graph_path_bounds(d: int) -> dict:
    """BFS check of the four short-path claims on ``G_d``; each entry is ``(holds, detail)``."""
    G = silo_graph(d)
    dist = {p: bfs_distances(G.adjacency, G.index(p)) for p in G.nodes}

    def dd(p, q):
        return dist[p][G.index(q)]

    limit = d - 2
    a_targets = [(i, d) for i in range(1, d) if i != 2] + [(d, d - 1)]
    a_lengths = {t: dd((1, 2), t) for t in a_targets}
    b_pairs = [((i, 1), (i, d)) for i in range(2, d)] + [((d, 1), (d, d - 1))]
    b_lengths = {pair: dd(*pair) for pair in b_pairs}
    hubs = [(1, 2)] + [(i, 1) for i in range(2, d + 1)]
    c_lengths = {p: min(dd(p, h) for h in hubs) for p in G.nodes}
    d_lengths = {(p, q): dd(p, q) for p in hubs for q in hubs if p < q}
    return {
        "a": (all(x <= limit for x in a_lengths.values()), a_lengths),
        "b": (all(x <= limit for x in b_lengths.values()), b_lengths),
        "c": (all(x <= limit for x in c_lengths.values()), c_lengths),
        "d": (all(x <= 3 for x in d_lengths.values()), d_lengths),
    }


# -- silos -------------------------------------------------------------------

def _next_y_index(P: HPolytope) -> int:
    used = [int(str(lab).split(":")[1]) for lab in P.labels if str(lab).startswith("y:")]
    return max(used, default=0) + 1


@dataclass(frozen=True)
class SiloResult:
    polytope: HPolytope
    order: tuple  # basis labels b_1..b_d of the siloed vertex
    y_labels: tuple  # labels of the d added rows, in order
    vertex: Vertex  # the siloed vertex (in the input polytope)
    peak: Vertex
    steps: tuple  # (max row-entry bits, max new-coordinate bits) after each truncation

    def monomial(self, xs, ys) -> frozenset:
        """Label set of ``x^{xs} y^{ys}`` with 1-based positions into order / y_labels."""
        return frozenset([self.order[i - 1] for i in xs] + [self.y_labels[i - 1] for i in ys])

    def phi(self, node) -> frozenset:
        """Image of a silo-graph node as a basis label set."""
        a, b = node
        d = len(self.order)
        if a > b:
            return self.monomial([j for j in range(b, d + 1) if j != a], range(1, b + 1))
        return self.monomial(range(b, d + 1), [j for j in range(1, b + 1) if j != a])

    def vertex_by_labels(self, labels) -> Vertex:
        P = self.polytope
        key = P.basis_from_labels(labels)
        for v in P.known_vertices:
            if v.basis == key:
                return v
        raise NotAVertex(f"{sorted(map(str, labels))} is not a vertex of the silo")


def silo(P: HPolytope, v, order=None, y_index=None, **kwargs) -> SiloResult:
    """d successive truncations replacing ``v`` by a tower ending in a peak.

    ``order`` lists the basis labels of ``v`` as ``b_1, ..., b_d``; it
    defaults to row order. Step k cuts the vertex with basis
    ``{b_{k+1}, ..., b_d} + {y_1, ..., y_k}`` and adds row ``y_{k+1}``.
    """
    d = P.dim
    if d < 3:
        raise DimensionTooSmall("siloing needs dimension at least 3")
    bases = current_vertices(P, **kwargs)
    vert = find_vertex(P, v, bases)
    if order is None:
        order = P.basis_labels(vert.basis)
    order = tuple(order)
    if sorted(P.basis_from_labels(order)) != list(vert.basis) or len(set(order)) != d:
        raise InputError("order must be a permutation of the vertex's basis labels")
    j = _next_y_index(P) if y_index is None else y_index
    ys = tuple(f"y:{j}:{k}" for k in range(1, d + 1))
    cur = HPolytope(P.A, P.b, P.labels, tuple(bases))
    steps = []
    row_bits = max(exact.encoding_length(x) for row in P.A for x in row)
    row_bits = max(row_bits, max(exact.encoding_length(x) for x in P.b))
    coord_bits = max(exact.encoding_length(x) for u in bases for x in u.point)
    for k in range(d):
        target = cur.basis_from_labels(order[k:] + ys[:k])
        cur = truncate(cur, target, label=ys[k])
        row_bits = max(row_bits, max(exact.encoding_length(x) for x in cur.A[-1] + (cur.b[-1],)))
        new = [u for u in cur.known_vertices if cur.m - 1 in u.basis]
        coord_bits = max(coord_bits, max(exact.encoding_length(x) for u in new for x in u.point))
        steps.append((row_bits, coord_bits))
    peak_basis = cur.basis_from_labels(ys)
    peak = next(u for u in cur.known_vertices if u.basis == peak_basis)
    return SiloResult(cur, order, ys, vert, peak, tuple(steps))


def silo_closed_form(f: GeneratingFunction, order, ys) -> GeneratingFunction:
    """Generating function of a silo predicted from that of the input polytope."""
    d = len(order)

    def mono(xs, yy):
        return frozenset([order[i - 1] for i in xs] + [ys[i - 1] for i in yy])

    out = Counter(f.terms)
    full = mono(range(1, d + 1), [])
    if out[full] <= 0:
        raise BasisNotPresent("the siloed basis is not a monomial")
    out[full] -= 1
    out[mono([], range(1, d + 1))] += 1
    for k in range(d):
        xs_k = range(k + 1, d + 1)
        for i in range(1, k + 1):
            out[mono(xs_k, [t for t in range(1, k + 2) if t != i])] += 1
        for jj in range(k + 2, d + 1):
            out[mono([t for t in xs_k if t != jj], range(1, k + 2))] += 1
    return GeneratingFunction(+out)


def verify_silo_isomorphism(result: SiloResult, graph=None):
    """Check that ``phi`` maps ``G_d`` isomorphically onto the new non-peak vertices.

    Returns ``(True, None)`` or ``(False, reason)``; also checks that the
    peak's neighbours are the images of ``(i, d)`` and ``(d, d-1)``.
    """
    S = result.polytope
    d = S.dim
    G = build_graph(S) if graph is None else graph
    new_labels = set(result.y_labels)
    peak = G.index_of_basis(result.peak.basis)
    H = [i for i, v in enumerate(G.nodes) if i != peak and new_labels & set(S.basis_labels(v.basis))]
    Gd = silo_graph(d)
    if len(Gd.edges()) != sum(1 for i in H for j in G.adjacency[i] if j in set(H) and i < j):
        return False, "edge counts differ"
    image = {}
    for node in Gd.nodes:
        try:
            image[node] = G.index_of_basis(S.basis_from_labels(result.phi(node)))
        except NotAVertex:
            return False, f"{node} has no image"
    if sorted(image.values()) != sorted(H):
        return False, "phi is not a bijection onto the new vertices"
    for p in Gd.nodes:
        for q in Gd.nodes:
            if p < q and _silo_edge(p, q) != (image[q] in G.adjacency[image[p]]):
                return False, (p, q)
    tops = [(i, d) for i in range(1, d)] + [(d, d - 1)]
    if sorted(image[t] for t in tops) != sorted(G.adjacency[peak]):
        return False, "peak neighbourhood mismatch"
    return True, None


# -- cyclic siloing ----------------------------------------------------------

@dataclass(frozen=True)
class CyclicSiloRecord:
    r: int
    d: int
    base_vertex: Vertex
    peaks: tuple  # v_0 .. v_{rd}
    neighbours: tuple  # neighbours[j][i-1] = v_{i,j}
    layers: tuple  # layers[j-1][i-1] = u_{i,j} for j = 1..rd
    orders: tuple  # orders[j-1] = labels of prec_{j-1}
    y_labels: tuple  # per siloing step
    steps: tuple  # (max row-entry bits, max coordinate bits) per truncation
    base_rows: int
    polytopes: tuple = ()  # C_0 .. C_{rd} when retained

    @property
    def peak(self) -> Vertex:
        return self.peaks[-1]

    @property
    def ground_layer(self) -> tuple:
        return self.layers[0]

    def new_labels(self) -> set:
        return {lab for ys in self.y_labels for lab in ys}


def _bar(z: int, d: int) -> int:
    return (z - 1) % d + 1


def _adjacent_bases(b1, b2) -> bool:
    return len(set(b1) ^ set(b2)) == 2


def cyclic_silo(P: HPolytope, v, r: int, keep_polytopes: bool = False, **kwargs):
    """Apply r*d silos at successive peaks with cyclically rotated orders.

    Returns ``(polytope, record)``. Every step checks that ``v_{i,j-1}`` is
    adjacent to ``u_{i,j}`` and that the ``v_{i,j}`` surround the new peak.
    """
    d = P.dim
    if d < 3:
        raise DimensionTooSmall("cyclic siloing needs dimension at least 3")
    if r < 1:
        raise InputError("r must be a positive integer")
    bases = current_vertices(P, **kwargs)
    C = HPolytope(P.A, P.b, P.labels, tuple(bases))
    vj = find_vertex(P, v, bases)
    peaks = [vj]
    nbrs = [pivot(C, vj, leave) for leave in vj.basis]  # ordered by leaving row
    neighbours = [tuple(nbrs)]
    layers, orders, ylabs, steps = [], [], [], []
    polys = [C] if keep_polytopes else []
    for j in range(1, r * d + 1):
        prev_peak, prev_nbrs = peaks[-1], neighbours[-1]
        bvec = []
        for w in prev_nbrs:
            left = set(prev_peak.basis) - set(w.basis)
            if len(left) != 1:
                raise RecordInconsistent(f"v_(i,{j - 1}) is not a neighbour of the peak")
            bvec.append(left.pop())
        order = tuple(C.labels[bvec[_bar(j + t, d) - 1]] for t in range(d))
        res = silo(C, prev_peak, order)
        C = res.polytope

        def at(node):
            return res.vertex_by_labels(res.phi(node))

        u = tuple(at((1, 2)) if i == _bar(j, d) else at((_bar(i - j + 1, d), 1)) for i in range(1, d + 1))
        vv = tuple(at((d, d - 1)) if i == _bar(j - 1, d) else at((_bar(i - j + 1, d), d)) for i in range(1, d + 1))
        for i in range(d):
            if not _adjacent_bases(prev_nbrs[i].basis, u[i].basis):
                raise RecordInconsistent(f"v_({i + 1},{j - 1}) is not adjacent to u_({i + 1},{j})")
            if not _adjacent_bases(vv[i].basis, res.peak.basis):
                raise RecordInconsistent(f"v_({i + 1},{j}) is not adjacent to the peak")
        peaks.append(res.peak)
        neighbours.append(vv)
        layers.append(u)
        orders.append(order)
        ylabs.append(res.y_labels)
        steps.extend(res.steps)
        if keep_polytopes:
            polys.append(C)
    record = CyclicSiloRecord(r, d, peaks[0], tuple(peaks), tuple(neighbours), tuple(layers), tuple(orders),
                              tuple(ylabs), tuple(steps), P.m, tuple(polys))
    return C, record


def cyclic_silo_distances(Q: HPolytope, record: CyclicSiloRecord, graph=None) -> dict:
    """BFS facts about a cyclic silo inside ``Q`` (which may contain further constructions).

    Keys: ``peak_to_original`` (min distance from the final peak to original
    vertices other than the siloed one), ``ground_to_silo`` (max in-silo
    distance from a ground-layer vertex to any silo vertex), ``ground_pairwise``
    (max in-silo distance within the ground layer) and ``layer_adjacency``.
    """
    G = build_graph(Q) if graph is None else graph
    new = record.new_labels()
    silo_nodes = {i for i, v in enumerate(G.nodes) if new & set(Q.basis_labels(v.basis))}
    original = [i for i, v in enumerate(G.nodes) if all(r < record.base_rows for r in v.basis)]
    peak = G.index_of_basis(record.peak.basis)
    dist_peak = bfs_distances(G.adjacency, peak)
    ground = [G.index_of_basis(u.basis) for u in record.ground_layer]
    ground_dist = [bfs_distances(G.adjacency, g, silo_nodes) for g in ground]
    ground_to_silo = max(dd[t] if dd[t] >= 0 else float("inf") for dd in ground_dist for t in silo_nodes)
    ground_pairwise = max(dd[t] for dd in ground_dist for t in ground)
    linked = True
    for j in range(1, len(record.layers) + 1):
        for i in range(record.d):
            a = G.index_of_basis(record.neighbours[j - 1][i].basis)
            b = G.index_of_basis(record.layers[j - 1][i].basis)
            linked = linked and b in G.adjacency[a]
    return {
        "peak_to_original": min(dist_peak[i] for i in original),
        "ground_to_silo": ground_to_silo,
        "ground_pairwise": ground_pairwise,
        "layer_adjacency": linked,
        "silo_size": len(silo_nodes),
    }


# -- diameter reduction ------------------------------------------------------

@dataclass(frozen=True)
class ReductionOutput:
    Q: HPolytope
    K: int
    r: int
    peaks: tuple  # (p_u, p_v) as Vertex
    d_P: int  # distance of u and v in P
    diam_P: int
    r_meets_hypothesis: bool
    record_u: CyclicSiloRecord
    record_v: CyclicSiloRecord

    @property
    def predicted_diameter(self) -> int:
        return self.d_P + self.K


def diameter_reduction(P: HPolytope, u, v, r: int | None = None, force: bool = False, **kwargs) -> ReductionOutput:
    """Cyclically silo at u, then at v; the peaks should realise the diameter ``d_P(u, v) + K``.

    ``r`` defaults to ``max(diam(P), 6)``. A smaller ``r`` raises RTooSmall
    unless ``force`` is set, in which case ``r_meets_hypothesis`` is False.
    """
    G = build_graph(P, **kwargs)
    d = P.dim
    if d < 3:
        raise DimensionTooSmall("the reduction needs dimension at least 3")
    uu, vv = G.nodes[G.node(_as_spec(u))], G.nodes[G.node(_as_spec(v))]
    if uu == vv:
        raise InputError("u and v must be distinct vertices")
    diam_P, _ = diameter(G)
    path = bfs_path(G.adjacency, G.index_of_basis(uu.basis), [G.index_of_basis(vv.basis)])
    d_P = len(path) - 1
    r_min = max(diam_P, 6)
    if r is None:
        r = r_min
    elif r < r_min and not force:
        raise RTooSmall(f"r = {r} is below max(diam(P), 6) = {r_min}; pass force to override")
    base = HPolytope(P.A, P.b, P.labels, G.nodes)
    Q1, rec_u = cyclic_silo(base, uu, r)
    Q, rec_v = cyclic_silo(Q1, vv.basis, r)
    K = 2 * r * d * (d - 1)
    return ReductionOutput(Q, K, r, (rec_u.peak, rec_v.peak), d_P, diam_P, r >= r_min, rec_u, rec_v)


def _as_spec(x):
    return x.point if isinstance(x, Vertex) else x


def encoding_growth_report(record: CyclicSiloRecord, base: HPolytope, constant: int = 64, first_step: int = 1) -> dict:
    """Per-truncation maximum encoding lengths against ``constant * L^3 * t`` (t = truncations so far).

    ``first_step`` counts truncations made before this record, e.g. the
    first cyclic silo of a reduction when checking the second.
    """
    L = exact.encoding_length(base.A) + exact.encoding_length(base.b)
    rows = []
    for t, (row_bits, coord_bits) in enumerate(record.steps, start=first_step):
        bound = constant * L ** 3 * t
        rows.append({"step": t, "row_bits": row_bits, "coord_bits": coord_bits, "bound": bound,
                     "ok": row_bits <= bound and coord_bits <= bound})
    monotone = all(a["row_bits"] <= b["row_bits"] and a["coord_bits"] <= b["coord_bits"] for a, b in zip(rows, rows[1:]))
    return {"L": L, "steps": rows, "monotone": monotone, "ok": all(x["ok"] for x in rows)}


def denominators_dyadic(P: HPolytope, base_lcm: int = 1) -> bool:
    """True if every vertex coordinate denominator is a power of two times a divisor of ``base_lcm``."""
    from .polytope import vertices

    for v in vertices(P):
        for x in v.point:
            q = x.denominator
            while q % 2 == 0:
                q //= 2
            if base_lcm % q:
                return False
    return True

