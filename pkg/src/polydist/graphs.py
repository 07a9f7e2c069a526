"""Breadth-first search on adjacency lists indexed 0..n-1."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .errors import BudgetExceeded

DEFAULT_MAX_RELAXATIONS = 10_000_000


def bfs_distances(adj: Sequence[Sequence[int]], source: int, allowed=None) -> list[int]:
    """Distances from ``source``; -1 marks unreachable nodes.

    ``allowed`` optionally restricts the search to an induced subgraph.
    """
    dist = [-1] * len(adj)
    if allowed is not None and source not in allowed:
        return dist
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0 and (allowed is None or w in allowed):
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def bfs_path(adj: Sequence[Sequence[int]], source: int, targets: Iterable[int], allowed=None):
    """Shortest path from ``source`` to the nearest target, or None.

    Neighbours are expanded in the order stored in ``adj`` so ties resolve
    deterministically.
    """
    targets = set(targets)
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if u in targets:
            path = []
            while u is not None:
                path.append(u)
                u = parent[u]
            return path[::-1]
        for w in adj[u]:
            if w not in parent and (allowed is None or w in allowed):
                parent[w] = u
                queue.append(w)
    return None


def all_pairs_eccentricity(adj, nodes=None, max_relaxations=DEFAULT_MAX_RELAXATIONS):
    """Maximum BFS distance and the first pair ``(i, j)`` (i < j) attaining it.

    Returns ``(-1, None)`` if some pair is disconnected.
    """
    n = len(adj)
    nodes = range(n) if nodes is None else sorted(nodes)
    allowed = None if len(nodes) == n else set(nodes)
    edges = sum(len(adj[u]) for u in nodes)
    if edges * len(nodes) > max_relaxations:
        raise BudgetExceeded(f"all-pairs BFS needs ~{edges * len(nodes)} relaxations (cap {max_relaxations})")
    best, pair = 0, (nodes[0], nodes[0]) if nodes else None
    for s in nodes:
        dist = bfs_distances(adj, s, allowed)
        for t in nodes:
            if t <= s:
                continue
            if dist[t] < 0:
                return -1, (s, t)
            if dist[t] > best:
                best, pair = dist[t], (s, t)
    return best, pair


def is_connected(adj) -> bool:
    if not adj:
        return True
    return all(d >= 0 for d in bfs_distances(adj, 0))
