"""Small graphs with ready-made linear and guarded tree decompositions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from coarse_menger.core.graph import Graph, path_graph
from coarse_menger.errors import InputError
from coarse_menger.fixtures.walls import gen_grid
from coarse_menger.harvest import LinearDecomposition
from coarse_menger.treewrap import GTDNode, GuardedTreeDecomposition


@dataclass(frozen=True)
class HarvestFixture:
    graph: Graph
    h_vertices: frozenset[int]
    decomp: LinearDecomposition
    s: frozenset[int]
    t: frozenset[int]
    f: frozenset[int] = frozenset()
    name: str = ""


def comb(n: int, s_at=(), t_at=(), tooth: int = 1, f=()) -> HarvestFixture:
    """Periphery path ``x_1..x_n`` (ids ``0..n-1``) with a tooth of ``tooth`` vertices
    hanging off ``x_i`` for every listed position; the tooth tips are the terminals.

    Bag ``i`` holds ``x_i``, ``x_{i+1}`` and the teeth at ``x_i``, so the adhesion is 1.
    """
    if n < 1 or tooth < 1:
        raise InputError("comb needs n >= 1 and tooth >= 1")
    edges = [(i, i + 1) for i in range(n - 1)]
    bags = [{i, i + 1} if i + 1 < n else {i} for i in range(n)]
    nxt = n
    tips: dict[str, set[int]] = {"S": set(), "T": set()}
    for color, where in (("S", s_at), ("T", t_at)):
        for pos in where:
            if not 1 <= pos <= n:
                raise InputError(f"tooth position {pos} outside 1..{n}")
            prev = pos - 1
            for _ in range(tooth):
                edges.append((prev, nxt))
                bags[pos - 1].add(nxt)
                prev = nxt
                nxt += 1
            tips[color].add(prev)
    g = Graph(nxt, frozenset(edges))
    decomp = LinearDecomposition(tuple(frozenset(b) for b in bags), tuple(range(n)))
    return HarvestFixture(g, frozenset(range(nxt)), decomp, frozenset(tips["S"]), frozenset(tips["T"]),
                          frozenset(f), f"comb({n})")


def ladder(cols: int, rows: int = 2, s_cells=(), t_cells=(), f=()) -> HarvestFixture:
    """``rows x cols`` grid whose periphery is the top row; bag ``i`` is columns
    ``i`` and ``i+1``, so the adhesion equals ``rows``.  Terminals are given as
    ``(row, col)`` cells, 0-indexed."""
    if cols < 1 or rows < 1:
        raise InputError("ladder needs positive dimensions")
    g = gen_grid(rows, cols)

    def col(j):
        return {i * cols + j for i in range(rows)}

    bags = [col(j) | col(j + 1) if j + 1 < cols else col(j) for j in range(cols)]
    decomp = LinearDecomposition(tuple(frozenset(b) for b in bags), tuple(range(cols)))
    cell = lambda rc: rc[0] * cols + rc[1]  # noqa: E731
    return HarvestFixture(g, frozenset(range(g.n)), decomp, frozenset(map(cell, s_cells)),
                          frozenset(map(cell, t_cells)), frozenset(f), f"ladder({rows}x{cols})")


def random_harvest_fixture(seed: int, max_vertices: int = 18) -> HarvestFixture:
    """A seeded comb or ladder with random terminals and occasionally a forbidden vertex."""
    rng = np.random.Generator(np.random.PCG64(seed))
    if rng.random() < 0.5:
        tooth = int(rng.integers(1, 3))
        n = int(rng.integers(4, 9))
        room = max(0, (max_vertices - n) // tooth)
        pos = rng.permutation(np.arange(1, n + 1))[:min(n, room)]
        cut = int(rng.integers(0, len(pos) + 1))
        fix = comb(n, [int(x) for x in sorted(pos[:cut])], [int(x) for x in sorted(pos[cut:])], tooth)
    else:
        rows = int(rng.integers(1, 4))
        cols = int(rng.integers(2, max_vertices // rows + 1))
        cells = [(i, j) for i in range(rows) for j in range(cols)]
        picks = rng.permutation(len(cells))[:int(rng.integers(1, min(7, len(cells)) + 1))]
        half = int(rng.integers(0, len(picks) + 1))
        fix = ladder(cols, rows, [cells[i] for i in sorted(picks[:half])],
                     [cells[i] for i in sorted(picks[half:])])
    if rng.random() < 0.3:
        fix = HarvestFixture(fix.graph, fix.h_vertices, fix.decomp, fix.s, fix.t,
                             frozenset({int(rng.integers(0, fix.graph.n))}), fix.name + "+F")
    return fix


def chain_gtd(bags) -> GuardedTreeDecomposition:
    """Path-shaped decomposition: node ``i`` has parent ``i-1`` and guard equal to its bag."""
    return GuardedTreeDecomposition(tuple(
        GTDNode(i, None if i == 0 else i - 1, frozenset(b), frozenset(b)) for i, b in enumerate(bags)))


def path_gtd(n: int) -> tuple[Graph, GuardedTreeDecomposition]:
    """Path on ``n >= 2`` vertices with bags ``{i, i+1}``."""
    if n < 2:
        raise InputError("path decomposition fixture needs n >= 2")
    return path_graph(n), chain_gtd([{i, i + 1} for i in range(n - 1)])


def grid_gtd(rows: int, cols: int) -> tuple[Graph, GuardedTreeDecomposition]:
    """Grid with bags made of two consecutive columns (one bag if ``cols == 1``)."""
    g = gen_grid(rows, cols)

    def col(j):
        return {i * cols + j for i in range(rows)}

    bags = [col(j) | col(j + 1) for j in range(cols - 1)] or [col(0)]
    return g, chain_gtd(bags)


def spider_gtd(legs: int, length: int) -> tuple[Graph, GuardedTreeDecomposition]:
    """Subdivided star: centre 0 and ``legs`` paths of ``length`` edges.

    The root bag is ``{0}``; every edge is a bag whose parent is the edge one
    step closer to the centre, so the root has ``legs`` children.
    """
    if legs < 1 or length < 1:
        raise InputError("spider needs legs >= 1 and length >= 1")
    edges = []
    nodes = [GTDNode(0, None, frozenset({0}), frozenset({0}))]
    nid = 1
    for leg in range(legs):
        prev, parent = 0, 0
        for step in range(length):
            v = 1 + leg * length + step
            edges.append((prev, v))
            nodes.append(GTDNode(nid, parent, frozenset({prev, v}), frozenset({prev, v})))
            parent, prev, nid = nid, v, nid + 1
    return Graph(1 + legs * length, frozenset(edges)), GuardedTreeDecomposition(tuple(nodes))
