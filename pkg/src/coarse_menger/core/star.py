"""Star replacement: collapse an apex set to a single vertex seen from one component."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from coarse_menger.core.graph import Graph
from coarse_menger.errors import InputError


@dataclass(frozen=True)
class StarReplacement:
    """``hstar`` is the component relabelled ``0..m-1`` (increasing original id) plus stars.

    ``mapping[i]`` is the original id of hstar vertex ``i`` for ``i < m``.
    """

    hstar: Graph
    astar: frozenset
    mapping: tuple

    def to_original(self, vs: Iterable[int]) -> frozenset[int]:
        return frozenset(self.mapping[v] for v in vs if v not in self.astar)

    def to_hstar(self, vs: Iterable[int]) -> frozenset[int]:
        inv = {o: i for i, o in enumerate(self.mapping)}
        return frozenset(inv[v] for v in vs)


def star_replace(g: Graph, apexes: Iterable[int], component: Iterable[int]) -> StarReplacement:
    a = g.check_vertices(apexes, "apexes")
    comp = g.check_vertices(component, "component")
    rest = frozenset(range(g.n)) - a
    if not comp or comp & a or comp not in g.components(rest):
        raise InputError("component is not a connected component of g - apexes")
    h, idx = g.induced(comp)
    star = h.n
    attach = sorted(idx[v] for v in comp if any(w in a for w in g.adj[v]))
    hstar = Graph(h.n + 1, h.edges | {(u, star) for u in attach})
    return StarReplacement(hstar, frozenset({star}), tuple(sorted(comp)))
