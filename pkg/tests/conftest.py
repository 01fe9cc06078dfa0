"""Brute-force oracles shared by the test modules.

Nothing here calls the package's search or flow code: paths are enumerated
with networkx and optimal values are found by exhaustive subset search.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from coarse_menger.core.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def nx_dist(g: Graph, a, b=None):
    """Hop distance between vertex sets via networkx (inf if disconnected)."""
    h = to_nx(g)
    lengths = nx.multi_source_dijkstra_path_length(h, set(a)) if a else {}
    if b is None:
        return {v: lengths.get(v, float("inf")) for v in range(g.n)}
    return min((lengths.get(v, float("inf")) for v in b), default=float("inf"))


def nx_ball(g: Graph, x, d: int) -> set[int]:
    return {v for v, dv in nx_dist(g, x).items() if dv <= d}


def all_st_paths(g: Graph, s, t, within=None) -> list[tuple[int, ...]]:
    """Every simple S-T path (both orientations collapsed to S first), length 0 included."""
    h = to_nx(g)
    if within is not None:
        h = h.subgraph(within)
    s = [v for v in s if v in h]
    t = [v for v in t if v in h]
    out = set()
    for a in s:
        for b in t:
            if a == b:
                out.add((a,))
                continue
            for p in nx.all_simple_paths(h, a, b):
                out.add(tuple(p))
    return sorted(out, key=lambda p: (len(p), p))


def separates(g: Graph, s, t, removed) -> bool:
    h = to_nx(g)
    h.remove_nodes_from(removed)
    for a in s:
        if a not in h:
            continue
        reach = nx.node_connected_component(h, a)
        if reach & set(t):
            return False
    return True


def brute_pack(g: Graph, s, t, d: int) -> int:
    """Largest d-scattered family of S-T paths (exhaustive)."""
    paths = all_st_paths(g, s, t)
    balls = [nx_ball(g, p, d) for p in paths]
    vs = [set(p) for p in paths]
    best = 0

    def grow(start, chosen):
        nonlocal best
        best = max(best, len(chosen))
        for i in range(start, len(paths)):
            if all(not (balls[i] & vs[j]) for j in chosen):
                grow(i + 1, chosen + [i])

    grow(0, [])
    return best


def brute_cover(g: Graph, s, t, d: int) -> int:
    """Smallest X with ``g - Ball(X, d)`` separating S from T."""
    for size in range(g.n + 1):
        for xs in itertools.combinations(range(g.n), size):
            if separates(g, s, t, nx_ball(g, xs, d) if xs else set()):
                return size
    raise AssertionError("unreachable")


def brute_menger(g: Graph, s, t) -> int:
    """Maximum number of pairwise vertex-disjoint S-T paths (exhaustive)."""
    paths = [set(p) for p in all_st_paths(g, s, t)]
    best = 0

    def grow(start, used, cnt):
        nonlocal best
        best = max(best, cnt)
        for i in range(start, len(paths)):
            if not paths[i] & used:
                grow(i + 1, used | paths[i], cnt + 1)

    grow(0, set(), 0)
    return best


def ball_in(g, within, x, r):
    """Radius-r ball around x measured inside g[within]."""
    h = to_nx(g).subgraph(within)
    x = [v for v in x if v in within]
    if not x:
        return set()
    return set(nx.multi_source_dijkstra_path_length(h, x, cutoff=r))


def dist_in(g, within, a, b):
    h = to_nx(g).subgraph(within)
    best = float("inf")
    for u in a:
        lengths = nx.single_source_shortest_path_length(h, u)
        best = min([best] + [lengths[v] for v in b if v in lengths])
    return best


def dormant_oracle(path, decomp):
    # with contiguous bags, "private to bag i" is the same as "in bag i and in no other bag"
    homes = []
    for v in path:
        where = [i for i, b in enumerate(decomp.bags) if v in b]
        if len(where) != 1:
            return False
        homes.append(where[0])
    return len(set(homes)) == 1


def has_path(g, within, xs, ys):
    h = to_nx(g).subgraph(within)
    for x in xs:
        if x in h:
            if set(nx.node_connected_component(h, x)) & set(ys):
                return True
    return False


def random_graph(seed: int, n: int, p: float) -> Graph:
    rng = np.random.Generator(np.random.PCG64(seed))
    es = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, frozenset(es))


@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 8):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, frozenset(e for e, keep in zip(pairs, mask) if keep))


@st.composite
def graphs_with_terminals(draw, min_n: int = 2, max_n: int = 7):
    g = draw(small_graphs(min_n, max_n))
    s = draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=max(1, g.n // 2)))
    t = draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=max(1, g.n // 2)))
    return g, frozenset(s), frozenset(t)


@pytest.fixture
def p3() -> Graph:
    return Graph(3, frozenset({(0, 1), (1, 2)}))
