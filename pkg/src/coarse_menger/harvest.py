"""Greedy harvesting of scattered terminal-to-periphery paths along a linear decomposition.

Bags are 1-indexed in the formulas below: ``B_1 .. B_n`` with ``B_0 = B_{n+1} = {}``
and ``W_i = B_i & B_{i+1}``.  ``H`` is the subgraph induced on ``h_vertices`` and
balls subscripted ``H`` are measured inside it; balls around ``F`` use the whole graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from coarse_menger.core.bits import bits, grow, least_path, mask_of, popcount, to_set
from coarse_menger.core.flow import st_path_through
from coarse_menger.core.graph import Graph, Path
from coarse_menger.errors import ContractError, InputError


@dataclass(frozen=True)
class LinearDecomposition:
    bags: tuple[frozenset[int], ...]
    periphery: tuple[int, ...]

    def __post_init__(self):
        bags = tuple(frozenset(int(v) for v in b) for b in self.bags)
        per = tuple(int(x) for x in self.periphery)
        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "periphery", per)
        if not bags:
            raise InputError("a linear decomposition needs at least one bag")
        if len(bags) != len(per):
            raise InputError("periphery must list exactly one vertex per bag")
        if len(set(per)) != len(per):
            raise InputError("periphery vertices must be distinct")
        for i, (b, x) in enumerate(zip(bags, per), start=1):
            if x not in b:
                raise InputError(f"periphery vertex x_{i}={x} is not in bag {i}")

    @property
    def n(self) -> int:
        return len(self.bags)

    def bag(self, i: int) -> frozenset[int]:
        """``B_i`` with the empty-bag convention outside ``[1, n]``."""
        return self.bags[i - 1] if 1 <= i <= self.n else frozenset()

    def link(self, i: int) -> frozenset[int]:
        """``W_i = B_i & B_{i+1}`` for ``i`` in ``[0, n]``."""
        return self.bag(i) & self.bag(i + 1)

    @property
    def adhesion(self) -> int:
        return max((len(self.link(i)) for i in range(1, self.n)), default=0)

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.bags)

    def problems(self, g: Graph, h_vertices: Iterable[int]) -> list[str]:
        """Why this is not a linear decomposition of ``g[h_vertices]`` (empty if it is)."""
        h = g.check_vertices(h_vertices, "h_vertices")
        out = []
        if not self.vertices <= h:
            out.append(f"bags use vertices outside H: {sorted(self.vertices - h)[:5]}")
        if self.vertices != h and h - self.vertices:
            out.append(f"vertices of H in no bag: {sorted(h - self.vertices)[:5]}")
        for u, v in sorted(g.edges):
            if u in h and v in h and not any(u in b and v in b for b in self.bags):
                out.append(f"edge ({u}, {v}) lies in no bag")
                break
        for v in sorted(self.vertices):
            where = [i for i, b in enumerate(self.bags) if v in b]
            if where[-1] - where[0] + 1 != len(where):
                out.append(f"bags containing {v} are not consecutive")
                break
        return out

    def to_doc(self) -> dict:
        return {"bags": [sorted(b) for b in self.bags], "periphery": list(self.periphery)}

    @classmethod
    def from_doc(cls, doc: dict) -> "LinearDecomposition":
        try:
            return cls(tuple(doc["bags"]), tuple(doc["periphery"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed linear decomposition: {exc}") from exc


def classify_dormant(path: Sequence[int], decomp: LinearDecomposition) -> bool:
    """True iff ``path`` sits inside the private part of a single bag."""
    vs = set(path)
    for i in range(1, decomp.n + 1):
        private = decomp.bag(i) - decomp.bag(i - 1) - decomp.bag(i + 1)
        if vs <= private:
            return True
    return False


@dataclass(frozen=True)
class HarvestOutcome:
    hitting_core: frozenset[int]
    linkage_s: tuple[Path, ...]
    linkage_t: tuple[Path, ...]
    indices: tuple[int, ...]
    types: tuple[str, ...]
    paths: tuple[Path, ...]
    flags: dict = field(default_factory=dict)
    radius: int = 0
    adhesion: int = 0

    def to_doc(self) -> dict:
        return {
            "hitting_core": sorted(self.hitting_core),
            "indices": list(self.indices),
            "types": list(self.types),
            "paths": [list(p) for p in self.paths],
            "flags": dict(sorted(self.flags.items())),
            "radius": self.radius,
            "adhesion": self.adhesion,
        }


@dataclass(frozen=True)
class InvadingOutcome:
    linkage: tuple[Path, ...] | None
    aux_core: frozenset[int] | None
    indices: tuple[int, ...]

    def to_doc(self) -> dict:
        if self.linkage is not None:
            return {"outcome": "linkage", "indices": list(self.indices),
                    "paths": [list(p) for p in self.linkage]}
        return {"outcome": "aux_core", "indices": list(self.indices),
                "aux_core": sorted(self.aux_core)}


class _Frame:
    """Bitmask view of ``H`` and the decomposition shared by both harvests."""

    def __init__(self, g: Graph, h_vertices, decomp: LinearDecomposition, s, t, f, d: int, k: int,
                 inner_radius: int | None):
        if d < 0:
            raise InputError("d must be non-negative")
        if k < 1:
            raise InputError("k must be positive")
        h = g.check_vertices(h_vertices, "h_vertices")
        bad = decomp.problems(g, h)
        if bad:
            raise InputError("invalid linear decomposition: " + "; ".join(bad))
        self.g, self.decomp, self.d, self.k = g, decomp, d, k
        self.r = d // 2 if inner_radius is None else inner_radius
        if self.r < 0:
            raise InputError("inner radius must be non-negative")
        self.hm = mask_of(h)
        self.full = (1 << g.n) - 1
        self.nbr = [m & self.hm for m in g.nbr_masks]
        self.sm = mask_of(g.check_vertices(s, "S")) & self.hm
        self.tm = mask_of(g.check_vertices(t, "T")) & self.hm
        self.fm = mask_of(g.check_vertices(f, "F"))
        self.omega = mask_of(decomp.periphery)
        self.bagm = [0] + [mask_of(b) for b in decomp.bags] + [0]
        self.w = [self.bagm[i] & self.bagm[i + 1] for i in range(decomp.n + 1)]
        self.adh = 0
        for m in self.w:
            self.adh |= m

    def ball_h(self, mask: int, radius: int) -> int:
        return grow(self.nbr, mask, radius, self.hm)

    def ball_g(self, mask: int, radius: int) -> int:
        return grow(self.g.nbr_masks, mask, radius, self.full) & self.hm

    def window(self, i: int, j: int) -> int:
        out = 0
        for b in self.bagm[i + 1:j + 1]:
            out |= b
        return out


def harvest(g: Graph, h_vertices: Iterable[int], decomp: LinearDecomposition,
            s: Iterable[int], t: Iterable[int], f: Iterable[int], d: int, k: int,
            inner_radius: int | None = None) -> HarvestOutcome:
    """Harvest up to ``k`` S-periphery and ``k`` T-periphery paths, left to right.

    Each round picks the smallest index ``p`` whose window ``H[p_prev, p]``, minus
    the inner-radius balls around ``W_{p_prev} | W_p`` and around ``F``, holds a
    path from the wanted terminal side to the periphery.  ``inner_radius``
    defaults to ``d // 2``.
    """
    fr = _Frame(g, h_vertices, decomp, s, t, f, d, k, inner_radius)
    n = decomp.n
    fball = fr.ball_g(fr.fm, fr.r)
    counts = {"S": 0, "T": 0}
    prev = 0
    idx: list[int] = []
    types: list[str] = []
    paths: list[Path] = []
    while True:
        if counts["S"] >= k and counts["T"] >= k:
            break
        if counts["S"] >= k:
            xm = fr.tm
        elif counts["T"] >= k:
            xm = fr.sm
        else:
            xm = fr.sm | fr.tm
        left = fr.ball_h(fr.w[prev], fr.r)
        if least_path(fr.nbr, xm, fr.omega, fr.window(prev, n) & ~left & ~fball) is None:
            break
        win = 0
        for p in range(prev + 1, n + 1):
            win |= fr.bagm[p]
            allowed = win & ~fr.ball_h(fr.w[prev] | fr.w[p], fr.r) & ~fball
            path = least_path(fr.nbr, xm, fr.omega, allowed)
            if path is not None:
                break
        else:  # the p = n window equals the stopping-test graph
            raise ContractError("no harvest window found although the stopping test passed")
        kind = "S" if (xm & fr.sm) >> path[0] & 1 else "T"
        counts[kind] += 1
        idx.append(p)
        types.append(kind)
        paths.append(path)
        prev = p
    core = 0
    for p in idx:
        core |= fr.w[p - 1] | fr.w[p] | (1 << decomp.periphery[p - 1])
    w = decomp.adhesion
    if popcount(core) > 2 * k * (2 * w + 1):
        raise ContractError(f"hitting core has {popcount(core)} > 2k(2w+1) vertices")
    return HarvestOutcome(
        hitting_core=to_set(core),
        linkage_s=tuple(p for p, x in zip(paths, types) if x == "S"),
        linkage_t=tuple(p for p, x in zip(paths, types) if x == "T"),
        indices=tuple(idx),
        types=tuple(types),
        paths=tuple(paths),
        flags={z: ("pack" if counts[z] >= k else "cover") for z in "ST"},
        radius=fr.r,
        adhesion=w,
    )


def _invading_in(fr: _Frame, allowed: int) -> Path | None:
    """An S-T path inside ``allowed`` through an adhesion vertex, or ``None``."""
    within = to_set(allowed)
    sset, tset = to_set(fr.sm), to_set(fr.tm)
    for y in bits(allowed & fr.adh):
        p = st_path_through(fr.g, sset, tset, y, within)
        if p is not None:
            return p
    return None


def harvest_invading(g: Graph, h_vertices: Iterable[int], decomp: LinearDecomposition,
                     s: Iterable[int], t: Iterable[int], f: Iterable[int], d: int, k: int,
                     base_core: Iterable[int], inner_radius: int | None = None) -> InvadingOutcome:
    """Harvest invading S-T paths: non-dormant and clear of the radius-``d`` balls
    around ``base_core`` (in H) and ``F`` (in the whole graph).

    Returns ``k`` such paths, or a set ``A'`` of at most ``2kw`` adhesion vertices
    whose inner-radius ball meets every invading path.
    """
    fr = _Frame(g, h_vertices, decomp, s, t, f, d, k, inner_radius)
    n = decomp.n
    core = mask_of(g.check_vertices(base_core, "base_core"))
    clear = fr.hm & ~fr.ball_h(core & fr.hm, d) & ~fr.ball_g(fr.fm, d)
    prev = 0
    idx: list[int] = []
    found: list[Path] = []
    while len(found) < k:
        if _invading_in(fr, fr.window(prev, n) & clear & ~fr.ball_h(fr.w[prev], fr.r)) is None:
            break
        win = 0
        for q in range(prev + 1, n + 1):
            win |= fr.bagm[q]
            path = _invading_in(fr, win & clear & ~fr.ball_h(fr.w[prev] | fr.w[q], fr.r))
            if path is not None:
                break
        else:
            raise ContractError("no invading window found although the stopping test passed")
        idx.append(q)
        found.append(path)
        prev = q
    if len(found) == k:
        return InvadingOutcome(tuple(found), None, tuple(idx))
    aux = 0
    for q in idx:
        aux |= fr.w[q - 1] | fr.w[q]
    if popcount(aux) > 2 * k * decomp.adhesion:
        raise ContractError("auxiliary core exceeds 2kw vertices")
    return InvadingOutcome(None, to_set(aux), tuple(idx))
