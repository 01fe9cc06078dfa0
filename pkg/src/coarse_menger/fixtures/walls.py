"""Elementary wall, flap, vortex, handle and crosscap segments and their concatenations.

Coordinates inside a segment base are 1-indexed ``(row, col)`` on an
``rows x 2*width`` grid.  Vertex ids are segment-major and row-major inside a
segment; a vortex segment numbers its base first and its annulus second.
Row 1 is the top row of every base, and becomes the innermost base cycle of
a walloid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

from coarse_menger.core.graph import Graph, Path
from coarse_menger.errors import InputError
from coarse_menger.fixtures.nests import Nest, RailedNest

KINDS = ("wall", "flap", "vortex", "handle", "crosscap")


@dataclass(frozen=True)
class Segment:
    kind: str
    rows: int
    width: int
    offset: int
    arity: int | None = None
    size: int = 0
    left: Path = ()
    right: Path = ()
    top: Path = ()
    bottom: Path = ()
    horizontal: tuple[Path, ...] = ()
    columns: tuple[Path, ...] = ()
    circumference: Path = ()
    added_edges: tuple[tuple[int, int], ...] = ()
    pocket_cycle: Path = ()
    sockets: Path = ()
    inner_cycle: Path = ()
    outer_cycle: Path = ()
    nest: RailedNest | None = None
    exceptional_paths: tuple[Path, ...] = ()

    def vertex(self, i: int, j: int) -> int:
        return self.offset + (i - 1) * 2 * self.width + (j - 1)

    def to_doc(self) -> dict:
        doc = {
            "kind": self.kind,
            "arity": self.arity,
            "range": [self.offset, self.offset + self.size],
            "left": list(self.left),
            "right": list(self.right),
            "top": list(self.top),
            "bottom": list(self.bottom),
            "columns": [list(c) for c in self.columns],
            "circumference": list(self.circumference),
            "added_edges": [list(e) for e in self.added_edges],
        }
        if self.kind == "flap":
            doc["pocket_cycle"] = list(self.pocket_cycle)
            doc["sockets"] = list(self.sockets)
        if self.kind == "vortex":
            doc["inner_cycle"] = list(self.inner_cycle)
            doc["outer_cycle"] = list(self.outer_cycle)
            doc["nest"] = self.nest.to_doc()
        if self.kind in ("handle", "crosscap"):
            doc["exceptional_paths"] = [list(p) for p in self.exceptional_paths]
        return doc


@dataclass(frozen=True)
class WalloidFixture:
    """A generated graph plus the structural labels downstream builders consume."""

    graph: Graph
    r: int
    t: int
    segments: tuple[Segment, ...]
    cylindrical: bool
    base_cycles: tuple[Path, ...] = ()
    horizontal_paths: tuple[Path, ...] = ()
    exceptional_cycle: Path = ()
    simple_cycle: Path = ()
    exceptional_cycles: tuple[Path, ...] = ()
    params: dict = field(default_factory=dict)

    @property
    def flaps(self) -> list[Segment]:
        return [s for s in self.segments if s.kind == "flap"]

    @property
    def vortices(self) -> list[Segment]:
        return [s for s in self.segments if s.kind == "vortex"]

    @property
    def columns(self) -> list[tuple[Path, ...]]:
        return [s.columns for s in self.segments]

    @property
    def pockets(self) -> list[tuple[Path, Path]]:
        return [(s.pocket_cycle, s.sockets) for s in self.flaps]

    @property
    def vortex_nests(self) -> list[RailedNest]:
        return [s.nest for s in self.vortices]

    @property
    def breadth(self) -> int:
        return len(self.vortices)

    def labels_doc(self) -> dict:
        return {
            "params": dict(self.params),
            "cylindrical": self.cylindrical,
            "segments": [s.to_doc() for s in self.segments],
            "base_cycles": [list(c) for c in self.base_cycles],
            "horizontal_paths": [list(p) for p in self.horizontal_paths],
            "exceptional_cycle": list(self.exceptional_cycle),
            "simple_cycle": list(self.simple_cycle),
            "exceptional_cycles": [list(c) for c in self.exceptional_cycles],
        }


# -- helpers ----------------------------------------------------------------------------


def cycle_from_edges(edges) -> Path:
    """Order the unique cycle left after repeatedly pruning degree-1 vertices."""
    adj: dict[int, set[int]] = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    leaves = [v for v, nb in adj.items() if len(nb) <= 1]
    while leaves:
        v = leaves.pop()
        for w in adj.pop(v, set()):
            adj[w].discard(v)
            if len(adj[w]) == 1:
                leaves.append(w)
    if not adj or any(len(nb) != 2 for nb in adj.values()):
        raise ValueError("edge set does not reduce to a single cycle")
    start = min(adj)
    seq = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        seq.append(cur)
        prev, cur = cur, next(w for w in adj[cur] if w != prev)
    if len(seq) != len(adj):
        raise ValueError("edge set reduces to more than one cycle")
    return tuple(seq)


def path_edges(seq: Path) -> list[tuple[int, int]]:
    return list(zip(seq, seq[1:]))


def _check_param(name: str, value: int, low: int = 4) -> None:
    if not isinstance(value, int) or value < low:
        raise InputError(f"{name} must be an integer >= {low}, got {value!r}")


class _Base:
    """Geometry of an elementary ``rows x width`` wall segment placed at ``offset``."""

    def __init__(self, rows: int, width: int, offset: int):
        self.rows, self.width, self.offset = rows, width, offset
        self.cols = 2 * width

    def v(self, i: int, j: int) -> int:
        return self.offset + (i - 1) * self.cols + (j - 1)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def edges(self) -> list[tuple[int, int]]:
        es = []
        for i in range(1, self.rows + 1):
            for j in range(1, self.cols + 1):
                if j < self.cols:
                    es.append((self.v(i, j), self.v(i, j + 1)))
                if i < self.rows and i % 2 != j % 2:
                    es.append((self.v(i, j), self.v(i + 1, j)))
        return es

    def row(self, i: int) -> Path:
        return tuple(self.v(i, j) for j in range(1, self.cols + 1))

    def column_cells(self, p: int) -> list[tuple[int, int]]:
        out = []
        for i in range(1, self.rows + 1):
            a, b = (i, 2 * p - 1), (i, 2 * p)
            out.extend([a, b] if i % 2 == 1 else [b, a])
        return out

    def column(self, p: int) -> Path:
        return tuple(self.v(*c) for c in self.column_cells(p))

    def top(self, p: int) -> int:
        return self.v(1, 2 * p - 1)

    def bottom(self, p: int) -> int:
        return self.v(self.rows, 2 * p - 1 if self.rows % 2 == 0 else 2 * p)

    def transfer(self, p: int, q: int, i: int) -> list[int]:
        """Top vertex of column p down to row i, along row i, up column q to its top vertex."""
        down = self._to_row(p, i)
        up = self._to_row(q, i)
        c0 = down[-1][1]
        c1 = up[-1][1]
        step = 1 if c1 >= c0 else -1
        walk = [(i, c) for c in range(c0 + step, c1 + step, step)] if c0 != c1 else []
        cells = down + walk + list(reversed(up[:-1]))
        return [self.v(*c) for c in cells]

    def _to_row(self, p: int, i: int) -> list[tuple[int, int]]:
        cells = self.column_cells(p)
        k = next(n for n, c in enumerate(cells) if c[0] == i)
        return cells[:k + 1]

    def from_left(self, q: int, i: int) -> list[int]:
        """Left boundary vertex of row i, along row i, up column q to its top vertex."""
        up = self._to_row(q, i)
        walk = [(i, c) for c in range(1, up[-1][1])]
        return [self.v(*c) for c in walk + list(reversed(up))]

    def to_right(self, p: int, i: int) -> list[int]:
        down = self._to_row(p, i)
        walk = [(i, c) for c in range(down[-1][1] + 1, self.cols + 1)]
        return [self.v(*c) for c in down + walk]


def _frame(base: _Base, kind: str, arity=None) -> dict:
    return dict(
        kind=kind,
        rows=base.rows,
        width=base.width,
        offset=base.offset,
        arity=arity,
        left=tuple(base.v(i, 1) for i in range(1, base.rows + 1)),
        right=tuple(base.v(i, base.cols) for i in range(1, base.rows + 1)),
        top=tuple(base.top(p) for p in range(1, base.width + 1)),
        bottom=tuple(base.bottom(p) for p in range(1, base.width + 1)),
        horizontal=tuple(base.row(i) for i in range(1, base.rows + 1)),
        columns=tuple(base.column(p) for p in range(1, base.width + 1)),
    )


def _sides(base: _Base) -> list[tuple[int, int]]:
    return (path_edges(base.column(1)) + path_edges(base.column(base.width))
            + path_edges(base.row(base.rows)))


# -- single segments ----------------------------------------------------------------------


def _wall(r: int, width: int, offset: int) -> tuple[Segment, list]:
    base = _Base(r, width, offset)
    es = base.edges()
    circ = cycle_from_edges(_sides(base) + path_edges(base.row(1)))
    return Segment(size=base.size, circumference=circ, **_frame(base, "wall")), es


def _flap(r: int, t: int, q: int, offset: int) -> tuple[Segment, list]:
    base = _Base(r, 2 * t + q, offset)
    v = [base.top(p) for p in range(1, t + 1)]
    sockets = tuple(base.top(t + p) for p in range(1, q + 1))
    u = [base.top(t + q + p) for p in range(1, t + 1)]
    rainbow = tuple((v[i], u[t - 1 - i]) for i in range(t))
    es = base.edges() + list(rainbow)
    circ = cycle_from_edges(_sides(base) + [rainbow[0]])
    row1 = base.row(1)
    pocket = tuple(row1[row1.index(v[-1]):row1.index(u[0]) + 1])
    seg = Segment(size=base.size, circumference=circ, added_edges=rainbow, pocket_cycle=pocket,
                  sockets=sockets, **_frame(base, "flap", q))
    return seg, es


def _vortex(r: int, t: int, offset: int) -> tuple[Segment, list]:
    base = _Base(r, t, offset)
    ann = _Base(t + 2, t, offset + base.size)
    wraps = [(ann.v(i, 1), ann.v(i, ann.cols)) for i in range(1, t + 3)]
    v = [base.top(p) for p in range(1, t + 1)]
    u = [ann.bottom(p) for p in range(1, t + 1)]
    joins = tuple(zip(v, u))
    es = base.edges() + ann.edges() + wraps + list(joins)
    outer_row = ann.row(t + 2)
    # v_1 - u_1 - (outer cycle of the annulus through the wrap edge) - u_t - v_t
    arc = cycle_from_edges(path_edges(outer_row) + [wraps[-1]])
    ring = _arc_between(arc, u[0], u[-1], avoid=set(outer_row[2:-2]))
    circ = cycle_from_edges(_sides(base) + [(v[0], u[0])] + path_edges(ring) + [(u[-1], v[-1])])
    cycles = tuple(ann.row(i) for i in range(2, t + 2))
    rails = tuple(ann.column(p) + (v[p - 1],) for p in range(1, t + 1))
    seg = Segment(
        size=base.size + ann.size,
        circumference=circ,
        added_edges=joins,
        inner_cycle=ann.row(1),
        outer_cycle=outer_row,
        nest=RailedNest(Nest(cycles), rails),
        **_frame(base, "vortex"),
    )
    return seg, es


def _arc_between(cycle: Path, a: int, b: int, avoid: set[int]) -> Path:
    """The a-b arc of ``cycle`` that avoids ``avoid``."""
    n = len(cycle)
    i, j = cycle.index(a), cycle.index(b)
    fwd = tuple(cycle[(i + s) % n] for s in range((j - i) % n + 1))
    bwd = tuple(cycle[(i - s) % n] for s in range((i - j) % n + 1))
    return fwd if not avoid.intersection(fwd) else bwd


def _exceptional(base: _Base, order: list[int], i: int) -> Path:
    """Row-i exceptional path visiting top vertices ``order``; pairs (0,1),(2,3),... are added edges."""
    seq = base.from_left(order[0], i)
    for k in range(1, len(order)):
        if k % 2 == 1:
            seq.append(base.top(order[k]))
        else:
            seq.extend(base.transfer(order[k - 1], order[k], i)[1:])
    seq.extend(base.to_right(order[-1], i)[1:])
    return tuple(seq)


def exceptional_count(r: int, t: int) -> int:
    return max(0, min(r, math.ceil(t / 2)) - 3)


def _handle(r: int, t: int, offset: int) -> tuple[Segment, list]:
    base = _Base(r, 4 * t, offset)
    v, vp, u, up = (lambda a: a), (lambda a: t + a), (lambda a: 2 * t + a), (lambda a: 3 * t + a)
    added = tuple((base.top(v(i)), base.top(u(t - i + 1))) for i in range(1, t + 1)) + tuple(
        (base.top(vp(i)), base.top(up(t - i + 1))) for i in range(1, t + 1))
    paths = []
    for i in range(1, exceptional_count(r, t) + 1):
        j = t - i + 1
        order = [v(i), u(j), up(i), vp(j), u(i), v(j), vp(i), up(j)]
        paths.append(_exceptional(base, order, i))
    circ = cycle_from_edges(_sides(base) + path_edges(base.row(1)))
    seg = Segment(size=base.size, circumference=circ, added_edges=added,
                  exceptional_paths=tuple(paths), **_frame(base, "handle"))
    return seg, base.edges() + list(added)


def _crosscap(r: int, t: int, offset: int) -> tuple[Segment, list]:
    base = _Base(r, 4 * t, offset)
    added = tuple((base.top(i), base.top(2 * t + i)) for i in range(1, 2 * t + 1))
    paths = []
    for i in range(1, exceptional_count(r, t) + 1):
        j = 2 * t - i + 1
        order = [i, 2 * t + i, j, 2 * t + j]
        paths.append(_exceptional(base, order, i))
    circ = cycle_from_edges(_sides(base) + path_edges(base.row(1)))
    seg = Segment(size=base.size, circumference=circ, added_edges=added,
                  exceptional_paths=tuple(paths), **_frame(base, "crosscap"))
    return seg, base.edges() + list(added)


_BUILDERS: dict[str, Callable] = {
    "wall": lambda r, t, q, off: _wall(r, t, off),
    "flap": lambda r, t, q, off: _flap(r, t, q, off),
    "vortex": lambda r, t, q, off: _vortex(r, t, off),
    "handle": lambda r, t, q, off: _handle(r, t, off),
    "crosscap": lambda r, t, q, off: _crosscap(r, t, off),
}


def gen_grid(n: int, m: int) -> Graph:
    """The n x m grid, vertex (i, j) (0-indexed) at id ``i*m + j``."""
    if n < 1 or m < 1:
        raise InputError("grid dimensions must be positive")
    es = []
    for i in range(n):
        for j in range(m):
            if j + 1 < m:
                es.append((i * m + j, i * m + j + 1))
            if i + 1 < n:
                es.append((i * m + j, (i + 1) * m + j))
    return Graph(n * m, frozenset(es))


def gen_segment(kind: str, r: int, t: int, arity: int | None = None) -> WalloidFixture:
    """A single elementary segment (not concatenated with anything)."""
    if kind not in KINDS:
        raise InputError(f"unknown segment kind {kind!r}; expected one of {KINDS}")
    _check_param("r", r)
    _check_param("t", t)
    if (kind == "flap") != (arity is not None):
        raise InputError("arity is required for flap segments and only for them")
    if kind == "flap" and arity not in (1, 2, 3):
        raise InputError("flap arity must be 1, 2 or 3")
    seg, es = _BUILDERS[kind](r, t, arity, 0)
    g = Graph(seg.size, frozenset(es))
    return WalloidFixture(
        graph=g, r=r, t=t, segments=(seg,), cylindrical=False,
        horizontal_paths=seg.horizontal,
        params={"kind": kind, "r": r, "t": t, "arity": arity},
    )


def _concatenate(r: int, t: int, plan: list[tuple[str, int, int | None]], params: dict) -> WalloidFixture:
    """Cylindrical concatenation of segments given as (kind, width-parameter, arity)."""
    segs: list[Segment] = []
    edges: list[tuple[int, int]] = []
    offset = 0
    for kind, width, q in plan:
        seg, es = _BUILDERS[kind](r, width, q, offset)
        segs.append(seg)
        edges.extend(es)
        offset += seg.size
    joins = []
    for a, b in zip(segs, segs[1:] + segs[:1]):
        joins.extend(zip(a.right, b.left))
    edges.extend(joins)
    g = Graph(offset, frozenset(edges))
    base_cycles = tuple(tuple(v for s in segs for v in s.horizontal[i]) for i in range(r))
    surface = any(s.kind in ("handle", "crosscap") for s in segs)
    face = ()
    if not surface:
        ex_edges = list(joins[0::r])
        for s in segs:
            ex_edges.extend(_exceptional_face_edges(s))
        face = cycle_from_edges(ex_edges)
    p = exceptional_count(r, t)
    ex_cycles = []
    for i in range(1, p + 1):
        parts = []
        for s in segs:
            parts.extend(s.exceptional_paths[i - 1] if s.kind in ("handle", "crosscap") else s.horizontal[i - 1])
        ex_cycles.append(tuple(parts))
    return WalloidFixture(
        graph=g, r=r, t=t, segments=tuple(segs), cylindrical=True,
        base_cycles=base_cycles,
        horizontal_paths=base_cycles,
        exceptional_cycle=face,
        simple_cycle=base_cycles[-1],
        exceptional_cycles=tuple(ex_cycles),
        params=params,
    )


def _exceptional_face_edges(s: Segment) -> list[tuple[int, int]]:
    row1 = s.horizontal[0]
    if s.kind == "wall":
        return path_edges(row1)
    if s.kind == "flap":
        v1, ut = s.added_edges[0]
        return [(v1, ut)] + path_edges(row1[row1.index(ut):])
    if s.kind == "vortex":
        circ = s.circumference
        v1, vt = s.top[0], s.top[-1]
        ring = _arc_between(circ, v1, vt, avoid=set(s.columns[0][2:]) | set(s.columns[-1][2:]))
        return path_edges(ring) + path_edges(row1[row1.index(vt):])
    raise ValueError(s.kind)


def gen_walloid(r: int, t: int, a: int, b: int, arity: int = 1) -> WalloidFixture:
    """One r x r wall segment, ``a`` flap segments, ``b`` vortex segments, closed into a cylinder."""
    return gen_surface_walloid(r, t, 0, 0, a, b, arity)


def gen_surface_walloid(r: int, t: int, h: int, c: int, a: int, b: int, arity: int = 1) -> WalloidFixture:
    """As :func:`gen_walloid` with ``h`` handle and ``c`` crosscap segments after the wall segment."""
    _check_param("r", r)
    _check_param("t", t)
    for name, x in (("h", h), ("c", c), ("a", a), ("b", b)):
        _check_param(name, x, 0)
    if arity not in (1, 2, 3):
        raise InputError("flap arity must be 1, 2 or 3")
    plan = [("wall", r, None)] + [("handle", t, None)] * h + [("crosscap", t, None)] * c
    plan += [("flap", t, arity)] * a + [("vortex", t, None)] * b
    params = {"r": r, "t": t, "h": h, "c": c, "a": a, "b": b, "arity": arity}
    return _concatenate(r, t, plan, params)


def with_graph(w: WalloidFixture, g: Graph) -> WalloidFixture:
    return replace(w, graph=g)
