"""Undirected simple graphs on dense integer ids, plus path/linkage checks and JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from coarse_menger.errors import InputError

Path = tuple[int, ...]


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with vertex set ``range(n)``.

    ``edges`` is normalized to a frozenset of ``(u, v)`` pairs with ``u < v``.
    """

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {self.n!r}")
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise InputError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def nbr_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in ws) for ws in self.adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges if u < v else (v, u) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def check_vertices(self, vs: Iterable[int], what: str = "vertex set") -> frozenset[int]:
        out = frozenset(int(v) for v in vs)
        bad = [v for v in out if not 0 <= v < self.n]
        if bad:
            raise InputError(f"{what} contains ids out of range [0, {self.n}): {sorted(bad)}")
        return out

    def induced(self, vs: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph relabelled to ``0..|vs|-1`` in increasing id order."""
        order = sorted(self.check_vertices(vs))
        idx = {v: i for i, v in enumerate(order)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(order), frozenset(es)), idx

    def with_pendants(self, anchors: Sequence[int]) -> tuple["Graph", list[int]]:
        """Append one new degree-1 vertex per anchor; returns the new ids."""
        new_ids = list(range(self.n, self.n + len(anchors)))
        es = set(self.edges) | {(a, p) for a, p in zip(anchors, new_ids)}
        return Graph(self.n + len(anchors), frozenset(es)), new_ids

    def components(self, within: Iterable[int] | None = None) -> list[frozenset[int]]:
        allowed = set(range(self.n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for r in sorted(allowed):
            if r in seen:
                continue
            comp = {r}
            stack = [r]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if w in allowed and w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


def grid_graph_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    es = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                es.append((v, v + 1))
            if i + 1 < rows:
                es.append((v, v + cols))
    return es


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)))


# -- paths, linkages, separations ------------------------------------------------


def is_path(g: Graph, seq: Sequence[int]) -> bool:
    if len(seq) == 0 or len(set(seq)) != len(seq):
        return False
    if any(not 0 <= v < g.n for v in seq):
        return False
    return all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def is_cycle(g: Graph, seq: Sequence[int]) -> bool:
    return len(seq) >= 3 and is_path(g, seq) and g.has_edge(seq[-1], seq[0])


def is_st_path(g: Graph, seq: Sequence[int], s: Iterable[int], t: Iterable[int]) -> bool:
    """True iff ``seq`` is a path with one endpoint in ``s`` and the other in ``t``."""
    if not is_path(g, seq):
        return False
    s, t = set(s), set(t)
    a, b = seq[0], seq[-1]
    return (a in s and b in t) or (a in t and b in s)


def is_linkage(g: Graph, paths: Iterable[Sequence[int]]) -> bool:
    used: set[int] = set()
    for p in paths:
        if not is_path(g, p) or used.intersection(p):
            return False
        used.update(p)
    return True


@dataclass(frozen=True)
class Separation:
    a: frozenset
    b: frozenset

    @property
    def order(self) -> int:
        return len(self.a & self.b)

    def is_valid(self, g: Graph) -> bool:
        if self.a | self.b != frozenset(range(g.n)):
            return False
        only_a, only_b = self.a - self.b, self.b - self.a
        return not any(
            (u in only_a and v in only_b) or (u in only_b and v in only_a) for u, v in g.edges
        )


# -- JSON interchange -------------------------------------------------------------


def graph_to_doc(g: Graph, s: Iterable[int] = (), t: Iterable[int] = ()) -> dict:
    return {
        "n": g.n,
        "edges": [list(e) for e in g.sorted_edges()],
        "S": sorted(set(s)),
        "T": sorted(set(t)),
    }


def graph_from_doc(doc: dict) -> tuple[Graph, frozenset[int], frozenset[int]]:
    try:
        n = doc["n"]
        raw = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"graph document missing field: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError("'n' must be an integer")
    edges = []
    for e in raw:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise InputError(f"malformed edge {e!r}")
        edges.append((e[0], e[1]))
    if len(set((min(u, v), max(u, v)) for u, v in edges)) != len(edges):
        raise InputError("duplicate edges in graph document")
    g = Graph(n, frozenset(edges))
    s = g.check_vertices(doc.get("S", []), "S")
    t = g.check_vertices(doc.get("T", []), "T")
    return g, s, t


def dumps(doc) -> str:
    """Canonical serialization used for every file the package writes."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
