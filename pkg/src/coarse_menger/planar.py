"""Seeded random planar graphs from subsampled Delaunay triangulations."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from coarse_menger.core.graph import Graph
from coarse_menger.errors import InputError


def random_planar(seed: int, n: int, density: float = 0.7) -> Graph:
    """Connected planar graph on ``n`` vertices.

    Points are drawn with ``numpy.random.PCG64(seed)`` and triangulated; a
    random spanning tree of the triangulation is always kept and every other
    edge survives with probability ``density``.  Vertex ids follow the
    x-coordinate order of the points.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    if not 0.0 <= density <= 1.0:
        raise InputError("density must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.random((n, 2))
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, frozenset({(0, 1)}))
    if n == 3:
        return Graph(3, frozenset({(0, 1), (1, 2), (0, 2)}))
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        a, b, c = sorted(int(x) for x in simplex)
        edges |= {(a, b), (b, c), (a, c)}
    edges = sorted(edges)
    # random spanning tree: Kruskal over a random edge permutation
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    keep = set()
    perm = rng.permutation(len(edges))
    for i in perm:
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            keep.add((u, v))
    coins = rng.random(len(edges))
    for (u, v), x in zip(edges, coins):
        if x < density:
            keep.add((u, v))
    return Graph(n, frozenset(keep))
