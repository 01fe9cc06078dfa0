"""Shafts, vortex nests and terminal planting on walloid fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from coarse_menger.core.distance import is_scattered
from coarse_menger.core.graph import Graph
from coarse_menger.errors import ContractError, InputError, PreconditionError
from coarse_menger.fixtures.nests import Nest, RailedNest
from coarse_menger.fixtures.walls import WalloidFixture, with_graph


def shaft_indices(r: int, d: int, s: int) -> tuple[int, ...]:
    """1-based base-cycle indices 1, (d+1)+1, ..., (s-1)(d+1)+1; needs r >= s(d+1)."""
    if d < 0:
        raise InputError("d must be non-negative")
    if s < 2:
        raise InputError("a shaft has order at least 2")
    if r < s * (d + 1):
        raise PreconditionError(f"shaft of order {s} at distance {d} needs r >= {s * (d + 1)}, got r={r}")
    return tuple(i * (d + 1) + 1 for i in range(s))


def extract_shaft(w: WalloidFixture, d: int, s: int) -> Nest:
    """A d-scattered sub-nest of the base cycles that stays clear of the d outermost ones."""
    if not w.base_cycles:
        raise InputError("fixture has no base cycles")
    idx = shaft_indices(len(w.base_cycles), d, s)
    nest = Nest(tuple(w.base_cycles[i - 1] for i in idx))
    if not is_scattered(w.graph, [set(c) for c in nest.cycles], d):
        raise ContractError("shaft cycles are not d-scattered")
    return nest


def vortex_nest(w: WalloidFixture, j: int) -> RailedNest:
    """The labelled railed nest of the j-th vortex segment (1-based)."""
    vs = w.vortices
    if not 1 <= j <= len(vs):
        raise InputError(f"vortex index {j} out of range 1..{len(vs)}")
    nest = vs[j - 1].nest
    bad = nest.problems(w.graph)
    if bad:
        raise ContractError(f"vortex nest {j} is malformed: {bad[0]}")
    return nest


@dataclass(frozen=True)
class Site:
    kind: str
    index: int

    @classmethod
    def parse(cls, text: str) -> "Site":
        """``pocket(i)`` or ``vortex_interior(j)``."""
        text = text.strip()
        for kind in ("pocket", "vortex_interior"):
            if text.startswith(kind + "(") and text.endswith(")"):
                try:
                    return cls(kind, int(text[len(kind) + 1:-1]))
                except ValueError:
                    break
        raise InputError(f"bad site {text!r}; expected pocket(i) or vortex_interior(j)")

    def __str__(self) -> str:
        return f"{self.kind}({self.index})"


@dataclass(frozen=True)
class PlantedFixture:
    graph: Graph
    s: frozenset
    t: frozenset
    fixture: WalloidFixture
    pendants: tuple = field(default_factory=tuple)

    def to_doc(self) -> dict:
        return {
            "pendants": [
                {"vertex": p, "anchor": a, "color": c, "site": str(site)} for p, a, c, site in self.pendants
            ],
        }


def site_anchors(w: WalloidFixture, site: Site) -> list[int]:
    if site.kind == "pocket":
        flaps = w.flaps
        if not 1 <= site.index <= len(flaps):
            raise InputError(f"no flap segment {site.index} (fixture has {len(flaps)})")
        return sorted(flaps[site.index - 1].pocket_cycle)
    vs = w.vortices
    if not 1 <= site.index <= len(vs):
        raise InputError(f"no vortex segment {site.index} (fixture has {len(vs)})")
    return sorted(vs[site.index - 1].nest.nest.cycles[0])


def plant_terminals(w: WalloidFixture, spec: Sequence[tuple[str, Site | str, int]]) -> PlantedFixture:
    """Attach pendant terminals; each site hands out its anchors lowest id first."""
    used: dict[Site, int] = {}
    anchors: list[int] = []
    colors: list[tuple[str, Site]] = []
    for color, site, count in spec:
        if color not in ("S", "T"):
            raise InputError(f"terminal color must be S or T, got {color!r}")
        site = Site.parse(site) if isinstance(site, str) else site
        if count < 0:
            raise InputError("count must be non-negative")
        avail = site_anchors(w, site)
        start = used.get(site, 0)
        if start + count > len(avail):
            raise InputError(f"{site} has {len(avail)} anchors, {start + count} requested")
        anchors.extend(avail[start:start + count])
        colors.extend([(color, site)] * count)
        used[site] = start + count
    g, new = w.graph.with_pendants(anchors)
    s = frozenset(p for p, (c, _) in zip(new, colors) if c == "S")
    t = frozenset(p for p, (c, _) in zip(new, colors) if c == "T")
    pend = tuple((p, a, c, site) for p, a, (c, site) in zip(new, anchors, colors))
    return PlantedFixture(g, s, t, with_graph(w, g), pend)
