"""Vertex-disjoint S-T paths via unit vertex-capacity max flow.

Every vertex ``v`` is split into ``2v`` (in) and ``2v + 1`` (out) joined by a
capacity-1 arc; graph edges become uncapacitated arcs out -> in in both
directions, so minimum cuts consist of split arcs only.  Augmentation is BFS (Edmonds-Karp) with neighbours visited in
increasing id order, so the returned linkage is deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from coarse_menger.core.graph import Graph, Path
from coarse_menger.errors import ContractError, InputError


class FlowNetwork:
    def __init__(self, size: int):
        self.cap: list[dict[int, int]] = [dict() for _ in range(size)]
        self.orig: list[dict[int, int]] = [dict() for _ in range(size)]

    def add_arc(self, u: int, v: int, c: int = 1) -> None:
        self.cap[u][v] = self.cap[u].get(v, 0) + c
        self.orig[u][v] = self.orig[u].get(v, 0) + c
        self.cap[v].setdefault(u, 0)
        self.orig[v].setdefault(u, 0)

    def max_flow(self, src: int, dst: int, limit: int | None = None) -> int:
        flow = 0
        while limit is None or flow < limit:
            parent = {src: src}
            q = deque([src])
            while q and dst not in parent:
                u = q.popleft()
                for v in sorted(self.cap[u]):
                    if self.cap[u][v] > 0 and v not in parent:
                        parent[v] = u
                        q.append(v)
            if dst not in parent:
                break
            v = dst
            while v != src:
                u = parent[v]
                self.cap[u][v] -= 1
                self.cap[v][u] += 1
                v = u
            flow += 1
        return flow

    def flow_on(self, u: int, v: int) -> int:
        return self.orig[u].get(v, 0) - self.cap[u].get(v, 0)

    def residual_reach(self, src: int) -> set[int]:
        seen = {src}
        stack = [src]
        while stack:
            u = stack.pop()
            for v, c in self.cap[u].items():
                if c > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def _split_network(g: Graph, allowed: set[int], vertex_cap=None) -> FlowNetwork:
    net = FlowNetwork(2 * g.n + 4)
    for v in sorted(allowed):
        net.add_arc(2 * v, 2 * v + 1, 1 if vertex_cap is None else vertex_cap.get(v, 1))
    for u, v in sorted(g.edges):
        if u in allowed and v in allowed:
            net.add_arc(2 * u + 1, 2 * v, g.n + 1)
            net.add_arc(2 * v + 1, 2 * u, g.n + 1)
    return net


def _walk_flow(net: FlowNetwork, start: int, sink: int) -> list[int]:
    """Follow one unit of flow from ``start``; returns visited split-node ids."""
    walk = [start]
    u = start
    while u != sink:
        nxt = None
        for v in sorted(net.orig[u]):
            if net.orig[u][v] > 0 and net.flow_on(u, v) > 0:
                nxt = v
                break
        if nxt is None:
            break
        # consume so a second walk through a capacity-2 node takes the other branch
        net.orig[u][nxt] -= 1
        walk.append(nxt)
        u = nxt
    return walk


def _trim(path: list[int], s: frozenset[int], t: frozenset[int]) -> Path:
    j = next(i for i, v in enumerate(path) if v in t)
    i = max(i for i in range(j + 1) if path[i] in s)
    return tuple(path[i:j + 1])


def menger(
    g: Graph,
    s: Iterable[int],
    t: Iterable[int],
    within: Iterable[int] | None = None,
    internally_disjoint: bool = False,
) -> tuple[list[Path], frozenset[int]]:
    """Maximum S-T linkage and a minimum S-T separator of equal size.

    By default paths are fully vertex-disjoint and a vertex of ``S ∩ T`` is a
    length-0 S-T path, so it always lies on the separator.  With
    ``internally_disjoint`` the terminals are uncapacitated (paths may share
    endpoints) and the separator avoids ``S ∪ T``; this needs ``S`` and ``T``
    disjoint and non-adjacent.  ``within`` restricts to an induced subgraph.
    """
    s = g.check_vertices(s, "S")
    t = g.check_vertices(t, "T")
    allowed = set(range(g.n)) if within is None else set(within)
    s &= allowed
    t &= allowed
    if not s or not t:
        return [], frozenset()
    big = g.n + 1
    caps = None
    if internally_disjoint:
        if s & t or any(g.has_edge(u, v) for u in s for v in t):
            raise InputError("internally disjoint mode needs S and T disjoint and non-adjacent")
        caps = {v: big for v in s | t}
    net = _split_network(g, allowed, caps)
    src, dst = 2 * g.n, 2 * g.n + 1
    for v in sorted(s):
        net.add_arc(src, 2 * v, big)
    for v in sorted(t):
        net.add_arc(2 * v + 1, dst, big)
    value = net.max_flow(src, dst)
    reach = net.residual_reach(src)
    separator = frozenset(v for v in allowed if 2 * v in reach and 2 * v + 1 not in reach)
    paths = []
    for v in sorted(s):
        for _ in range(net.flow_on(src, 2 * v)):
            walk = _walk_flow(net, 2 * v, dst)
            verts = [x // 2 for x in walk[::2] if x != dst]
            paths.append(verts if internally_disjoint else _trim(verts, s, t))
    if internally_disjoint:
        paths = [_trim(p, s, t) for p in paths]
    if not (len(paths) == value == len(separator)):
        raise ContractError("flow decomposition disagrees with cut value")
    return sorted(paths, key=lambda p: (len(p), p)), separator


def disjoint_path_count(g: Graph, s: Iterable[int], t: Iterable[int],
                        within: Iterable[int] | None = None, limit: int | None = None) -> int:
    s, t = set(s), set(t)
    allowed = set(range(g.n)) if within is None else set(within)
    s &= allowed
    t &= allowed
    if not s or not t:
        return 0
    net = _split_network(g, allowed)
    src, dst = 2 * g.n, 2 * g.n + 1
    big = g.n + 1
    for v in sorted(s):
        net.add_arc(src, 2 * v, big)
    for v in sorted(t):
        net.add_arc(2 * v + 1, dst, big)
    return net.max_flow(src, dst, limit)


def st_path_through(g: Graph, s: Iterable[int], t: Iterable[int], y: int,
                    within: Iterable[int] | None = None) -> Path | None:
    """Some S-T path in ``g[within]`` that contains ``y``, or ``None``.

    Two internally disjoint routes from ``y`` are requested, one ending in S
    and one in T; their union is the path.
    """
    s, t = set(s), set(t)
    allowed = set(range(g.n)) if within is None else set(within)
    if y not in allowed:
        return None
    if y in s and y in t:
        return (y,)
    if y in s or y in t:
        target = t if y in s else s
        from coarse_menger.core.distance import bfs

        dist = bfs(g, [y], allowed)
        ends = [v for v in sorted(target & allowed) if dist[v] != float("inf")]
        if not ends:
            return None
        # walk back along decreasing distance
        v = min(ends, key=lambda x: (dist[x], x))
        path = [v]
        while v != y:
            v = min(w for w in g.adj[v] if dist[w] == dist[v] - 1)
            path.append(v)
        path.reverse()
        return tuple(path) if y in s else tuple(reversed(path))
    net = _split_network(g, allowed, vertex_cap={y: 2})
    src, dst = 2 * g.n, 2 * g.n + 1
    sink_s, sink_t = 2 * g.n + 2, 2 * g.n + 3
    net.add_arc(src, 2 * y, 2)
    for v in sorted(s & allowed):
        net.add_arc(2 * v + 1, sink_s)
    for v in sorted(t & allowed):
        net.add_arc(2 * v + 1, sink_t)
    net.add_arc(sink_s, dst)
    net.add_arc(sink_t, dst)
    if net.max_flow(src, dst, 2) < 2:
        return None
    halves = []
    for _ in range(2):
        walk = _walk_flow(net, 2 * y + 1, dst)
        verts = [x // 2 for x in walk if x < 2 * g.n and x % 2 == 1]
        halves.append((walk[-2], verts))
    (end_a, a), (_, b) = halves
    if end_a == sink_t:
        a, b = b, a
    # a runs y .. s, b runs y .. t
    return tuple(list(reversed(a)) + b[1:])
