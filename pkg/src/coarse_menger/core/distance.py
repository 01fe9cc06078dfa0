"""Hop distances, balls and scatteredness."""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

from coarse_menger.core.graph import Graph

INF = math.inf


def bfs(g: Graph, sources: Iterable[int], within: Iterable[int] | None = None) -> list[float]:
    """Multi-source BFS; ``within`` restricts the walk to an induced subgraph."""
    dist = [INF] * g.n
    allowed = None if within is None else set(within)
    q = deque()
    for v in sorted(set(sources)):
        if allowed is None or v in allowed:
            dist[v] = 0
            q.append(v)
    adj = g.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] == INF and (allowed is None or w in allowed):
                dist[w] = du
                q.append(w)
    return dist


def shortest_dist(g: Graph, sources: Iterable[int]) -> dict[int, float]:
    """Distance from the nearest source for every vertex (``math.inf`` if unreachable)."""
    src = g.check_vertices(sources, "sources")
    d = bfs(g, src)
    return {v: (int(x) if x != INF else INF) for v, x in enumerate(d)}


def ball(g: Graph, x: Iterable[int], d: int, within: Iterable[int] | None = None) -> frozenset[int]:
    """``{v : dist(v, x) <= d}``; with ``within`` the distance is taken in ``g[within]``."""
    xs = g.check_vertices(x)
    if d < 0:
        raise ValueError("radius must be non-negative")
    if d == 0:
        return xs if within is None else xs & frozenset(within)
    dist = [INF] * g.n
    allowed = None if within is None else set(within)
    frontier = [v for v in sorted(xs) if allowed is None or v in allowed]
    for v in frontier:
        dist[v] = 0
    out = set(frontier)
    for r in range(1, d + 1):
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if dist[w] == INF and (allowed is None or w in allowed):
                    dist[w] = r
                    nxt.append(w)
        out.update(nxt)
        frontier = nxt
        if not frontier:
            break
    return frozenset(out)


def set_distance(g: Graph, a: Iterable[int], b: Iterable[int]) -> float:
    bs = set(b)
    if not bs:
        return INF
    dist = bfs(g, a)
    return min(dist[v] for v in bs)


def is_scattered(g: Graph, family: Sequence[Iterable[int]], d: int) -> bool:
    """True iff every two distinct members are at distance strictly greater than ``d``."""
    sets = [g.check_vertices(m, "family member") for m in family]
    for i, a in enumerate(sets):
        if i + 1 == len(sets):
            break
        reach = ball(g, a, d)
        for b in sets[i + 1:]:
            if reach & b:
                return False
    return True


def ball_masks(g: Graph, d: int) -> list[int]:
    """Bitmask of the radius-``d`` ball around every vertex."""
    nbr = g.nbr_masks
    out = []
    for v in range(g.n):
        seen = 1 << v
        frontier = seen
        for _ in range(d):
            new = 0
            f = frontier
            while f:
                low = f & -f
                new |= nbr[low.bit_length() - 1]
                f ^= low
            frontier = new & ~seen
            if not frontier:
                break
            seen |= frontier
        out.append(seen)
    return out
