"""Scattered S-T connectors on walloid fixtures and their conversion into scattered linkages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from coarse_menger.core.distance import is_scattered
from coarse_menger.core.flow import menger
from coarse_menger.core.graph import Graph, Path, is_linkage, is_st_path
from coarse_menger.errors import ContractError, InputError, PreconditionError
from coarse_menger.fixtures.nests import Nest, RailedNest, pieces_along
from coarse_menger.fixtures.planting import PlantedFixture, Site, extract_shaft, plant_terminals
from coarse_menger.fixtures.walls import gen_walloid


@dataclass(frozen=True)
class ScatteredConnector:
    """Railed nest of order ``(k+2, 2k)``; rail ``j`` starts at its root terminal
    and ``sides[j]`` says whether that root is an S or a T terminal."""

    railed: RailedNest
    sides: tuple[str, ...]
    d: int

    @property
    def k(self) -> int:
        return len(self.railed.rails) // 2

    @property
    def roots_s(self) -> tuple[int, ...]:
        return tuple(p[0] for p, x in zip(self.railed.rails, self.sides) if x == "S")

    @property
    def roots_t(self) -> tuple[int, ...]:
        return tuple(p[0] for p, x in zip(self.railed.rails, self.sides) if x == "T")

    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.railed.nest.cycles:
            out.update(c)
        for p in self.railed.rails:
            out.update(p)
        return frozenset(out)

    def to_doc(self) -> dict:
        doc = self.railed.to_doc()
        doc.update({"d": self.d, "sides": list(self.sides),
                    "roots_s": list(self.roots_s), "roots_t": list(self.roots_t)})
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "ScatteredConnector":
        try:
            nest = Nest(tuple(tuple(int(v) for v in c) for c in doc["cycles"]))
            rails = tuple(tuple(int(v) for v in p) for p in doc["rails"])
            return cls(RailedNest(nest, rails), tuple(doc["sides"]), int(doc["d"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed connector: {exc}") from exc


def verify_connector(g: Graph, c: ScatteredConnector, s: Iterable[int] | None = None,
                     t: Iterable[int] | None = None) -> tuple[bool, list[str]]:
    """Re-check every connector clause from scratch; returns ``(ok, diagnostics)``.

    Rooting and confinement are checked combinatorially: each rail starts at
    its root off the nest, crosses the cycles innermost first, and ends on
    the outermost cycle.
    """
    out: list[str] = []
    cycles, rails = c.railed.nest.cycles, c.railed.rails
    if len(rails) % 2 or not rails:
        out.append(f"odd or empty rail count {len(rails)}")
    k = len(rails) // 2
    if len(cycles) != k + 2:
        out.append(f"nest order {len(cycles)} does not match k+2 = {k + 2}")
    if len(c.sides) != len(rails) or sorted(c.sides) != ["S"] * k + ["T"] * k:
        out.append("rails are not split into k S-rooted and k T-rooted rails")
    out += c.railed.problems(g)
    if out:
        return False, out
    if not is_scattered(g, [set(x) for x in cycles], c.d):
        out.append("cycles not d-scattered")
    if not is_scattered(g, [set(p) for p in rails], c.d):
        out.append("rails not d-scattered")
    on_nest = set().union(*cycles)
    for j, p in enumerate(rails):
        if p[0] in on_nest:
            out.append(f"rail {j} root lies on the nest")
        if p[-1] not in set(cycles[-1]):
            out.append(f"rail {j} does not end on the outermost cycle")
        firsts = [min(p.index(v) for v in cyc if v in p) for cyc in cycles]
        if firsts != sorted(firsts):
            out.append(f"rail {j} does not cross the cycles innermost first")
    sset = None if s is None else set(s)
    tset = None if t is None else set(t)
    if sset is not None and not set(c.roots_s) <= sset:
        out.append("an S-side root is not an S terminal")
    if tset is not None and not set(c.roots_t) <= tset:
        out.append("a T-side root is not a T terminal")
    return not out, out


def connector_fixture(d: int, k: int) -> PlantedFixture:
    """Smallest admissible flap walloid with S at pockets 1..k and T at pockets k+1..2k."""
    if d < 0 or k < 1:
        raise InputError("need d >= 0 and k >= 1")
    r = max(4, (k + 2) * (d + 1))
    t = max(4, d + 1)
    w = gen_walloid(r, t, 2 * k, 0)
    spec = [("S", Site("pocket", i), 1) for i in range(1, k + 1)]
    spec += [("T", Site("pocket", i), 1) for i in range(k + 1, 2 * k + 1)]
    return plant_terminals(w, spec)


def _flap_runs(planted: PlantedFixture, color: str, k: int) -> list[tuple[int, int, int]]:
    rows = sorted((site.index, vertex, anchor) for vertex, anchor, c, site in planted.pendants
                  if c == color and site.kind == "pocket")
    flaps = [i for i, _, _ in rows]
    if len(rows) != k or len(set(flaps)) != k or flaps != list(range(flaps[0], flaps[0] + k)):
        raise PreconditionError(f"need one {color} terminal in each of k={k} consecutive flap pockets")
    return rows


def build_connector(planted: PlantedFixture, d: int, k: int) -> ScatteredConnector:
    """Shaft of order k+2 plus one rail per planted flap.

    A rail runs from the pendant terminal to its pocket anchor and then down the
    base column through that anchor until it first meets the outermost shaft cycle.
    """
    if d < 0 or k < 1:
        raise InputError("need d >= 0 and k >= 1")
    w = planted.fixture
    if w.r < (k + 2) * (d + 1) or w.t < d + 1:
        raise PreconditionError(f"need r >= (k+2)(d+1) = {(k + 2) * (d + 1)} and t >= d+1 = {d + 1};"
                                f" fixture has r={w.r}, t={w.t}")
    runs = sorted(_flap_runs(planted, "S", k) + _flap_runs(planted, "T", k))
    side_of = {v: c for v, _, c, _ in planted.pendants}
    shaft = extract_shaft(w, d, k + 2)
    outer = set(shaft.cycles[-1])
    flaps = w.flaps
    rails: list[Path] = []
    sides: list[str] = []
    for flap, vertex, anchor in runs:
        col = next(cc for cc in flaps[flap - 1].columns if anchor in cc)
        rail = [vertex]
        for v in col[col.index(anchor):]:
            rail.append(v)
            if v in outer:
                break
        else:
            raise ContractError(f"column through anchor {anchor} never meets the outermost shaft cycle")
        rails.append(tuple(rail))
        sides.append(side_of[vertex])
    c = ScatteredConnector(RailedNest(shaft, tuple(rails)), tuple(sides), d)
    ok, why = verify_connector(planted.graph, c, planted.s, planted.t)
    if not ok:
        raise ContractError("built connector fails verification: " + "; ".join(why))
    return c


def connector_to_linkage(g: Graph, c: ScatteredConnector) -> tuple[Path, ...]:
    """k disjoint root-to-root paths inside the middle cycles and the rails, d-scattered in ``g``.

    Every cycle-rail crossing is contracted to one representative vertex, a
    maximum linkage between the S roots and the T roots is computed in the
    contracted frame, and each representative is expanded back into the
    crossing subpath it stands for.
    """
    cycles, rails = c.railed.nest.cycles, c.railed.rails
    k = c.k
    rep: dict[int, int] = {}
    piece_of: dict[int, Path] = {}
    for cyc in cycles:
        cs = set(cyc)
        for p in rails:
            runs = pieces_along(p, cs & set(p))
            if len(runs) != 1:
                raise ContractError("rail meets a cycle in more than one piece")
            piece = tuple(runs[0])
            z = min(piece)
            for v in piece:
                rep[v] = z
            piece_of[z] = piece
    edges = set()
    for seq, closed in [(cyc, True) for cyc in cycles[1:-1]] + [(p, False) for p in rails]:
        pairs = list(zip(seq, seq[1:])) + ([(seq[-1], seq[0])] if closed else [])
        for u, v in pairs:
            a, b = rep.get(u, u), rep.get(v, v)
            if a != b:
                edges.add((a, b))
    frame = Graph(g.n, frozenset(edges))
    paths, _ = menger(frame, c.roots_s, c.roots_t)
    if len(paths) < k:
        raise ContractError(f"contracted frame carries only {len(paths)} < k = {k} disjoint paths")
    out = []
    for p in paths[:k]:
        full: list[int] = []
        for i, v in enumerate(p):
            if v not in piece_of:
                full.append(v)
                continue
            piece = piece_of[v]
            enter = _touching(g, piece, piece_of.get(p[i - 1], (p[i - 1],))) if i > 0 else 0
            nxt = p[i + 1] if i + 1 < len(p) else None
            leave = len(piece) - 1 if nxt is None else _touching(g, piece, piece_of.get(nxt, (nxt,)))
            if enter <= leave:
                full.extend(piece[enter:leave + 1])
            else:
                full.extend(reversed(piece[leave:enter + 1]))
        out.append(tuple(full))
    out = tuple(sorted(out))
    support = c.support()
    if not is_linkage(g, out) or not all(is_st_path(g, q, c.roots_s, c.roots_t) for q in out):
        raise ContractError("expanded paths do not form an S-T linkage")
    if not all(set(q) <= support for q in out):
        raise ContractError("linkage leaves the connector")
    if not is_scattered(g, [set(q) for q in out], c.d):
        raise ContractError("linkage is not d-scattered")
    return out


def _touching(g: Graph, piece: Path, other: Path) -> int:
    """Position in ``piece`` of the first vertex adjacent to ``other``."""
    for i, v in enumerate(piece):
        if any(g.has_edge(v, x) for x in other):
            return i
    raise ContractError(f"{other} is not adjacent to the crossing {piece}")


def frame_segments(c: ScatteredConnector) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Segments of the middle-cycle-plus-rail frame as ``(end crossings, vertices)``.

    Crossings and roots act as branch points; a segment runs between two of them
    along a middle cycle or a rail and owns the vertices of its end crossings.
    """
    cycles, rails = c.railed.nest.cycles, c.railed.rails
    crossing: dict[int, frozenset[int]] = {}
    for cyc in cycles:
        for p in rails:
            piece = frozenset(cyc) & frozenset(p)
            for v in piece:
                crossing[v] = piece
    for p in rails:
        crossing[p[0]] = frozenset({p[0]})
    out = []
    for seq, closed in [(cyc, True) for cyc in cycles[1:-1]] + [(p, False) for p in rails]:
        stops = [i for i, v in enumerate(seq) if v in crossing]
        spans = list(zip(stops, stops[1:]))
        if closed and stops:
            spans.append((stops[-1], stops[0] + len(seq)))
        for a, b in spans:
            body = [seq[i % len(seq)] for i in range(a, b + 1)]
            ca, cb = crossing[body[0]], crossing[body[-1]]
            if ca == cb:
                continue  # inside one crossing
            out.append((frozenset({min(ca), min(cb)}), ca | cb | frozenset(body)))
    return out
