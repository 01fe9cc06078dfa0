"""Fixture serialization: graph JSON with a labels block, and Graphviz DOT."""

from __future__ import annotations

from typing import Iterable

from coarse_menger.core.graph import Graph, graph_to_doc
from coarse_menger.fixtures.planting import PlantedFixture
from coarse_menger.fixtures.walls import WalloidFixture

PALETTE = ("lightblue", "palegreen", "khaki", "salmon", "plum", "lightgray", "orange", "pink")
KIND_SHAPE = {"wall": "circle", "flap": "box", "vortex": "diamond", "handle": "hexagon", "crosscap": "octagon"}


def fixture_doc(fix: WalloidFixture | PlantedFixture) -> dict:
    """Graph interchange document plus a ``labels`` block."""
    if isinstance(fix, PlantedFixture):
        doc = graph_to_doc(fix.graph, fix.s, fix.t)
        labels = fix.fixture.labels_doc()
        labels.update(fix.to_doc())
    else:
        doc = graph_to_doc(fix.graph)
        labels = fix.labels_doc()
    doc["labels"] = labels
    return doc


def segment_of(w: WalloidFixture) -> dict[int, int]:
    out = {}
    for i, seg in enumerate(w.segments):
        for v in range(seg.offset, seg.offset + seg.size):
            out[v] = i
    return out


def to_dot(g: Graph, w: WalloidFixture | None = None, s: Iterable[int] = (), t: Iterable[int] = (),
           name: str = "G") -> str:
    """Undirected DOT text; vertices are coloured by segment, terminals are outlined."""
    s, t = set(s), set(t)
    seg = segment_of(w) if w is not None else {}
    lines = [f"graph {name} {{", "  node [style=filled, fontsize=8];"]
    for v in range(g.n):
        attrs = []
        if v in seg:
            i = seg[v]
            attrs.append(f'fillcolor="{PALETTE[i % len(PALETTE)]}"')
            attrs.append(f'shape={KIND_SHAPE[w.segments[i].kind]}')
        else:
            attrs.append('fillcolor="white"')
        if v in s or v in t:
            attrs.append(f'color="{"red" if v in s else "blue"}", penwidth=2')
            attrs.append(f'xlabel="{"S" if v in s else ""}{"T" if v in t else ""}"')
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.sorted_edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
