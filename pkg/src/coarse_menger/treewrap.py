"""Guarded tree decompositions and the bottom-up pack-or-hit recursion over them."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

from coarse_menger.core.bits import bits, grow, least_path, mask_of, popcount, reach, to_set
from coarse_menger.core.flow import st_path_through
from coarse_menger.core.graph import Graph
from coarse_menger.errors import ContractError, InputError

Member = tuple[int, ...]


@dataclass(frozen=True)
class GTDNode:
    id: int
    parent: int | None
    beta: frozenset[int]
    gamma: frozenset[int]


@dataclass(frozen=True)
class GuardedTreeDecomposition:
    """Rooted tree with a bag ``beta`` and a guard ``gamma`` on every node."""

    nodes: tuple[GTDNode, ...]

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes, key=lambda x: x.id))
        object.__setattr__(self, "nodes", nodes)
        ids = [x.id for x in nodes]
        if not nodes:
            raise InputError("a tree decomposition needs at least one node")
        if len(set(ids)) != len(ids):
            raise InputError("duplicate node ids")
        known = set(ids)
        roots = [x.id for x in nodes if x.parent is None]
        if len(roots) != 1:
            raise InputError(f"expected exactly one root, found {len(roots)}")
        for x in nodes:
            if x.parent is not None and x.parent not in known:
                raise InputError(f"node {x.id} has unknown parent {x.parent}")
        # every node must reach the root
        for x in nodes:
            seen, cur = set(), x.id
            while cur is not None:
                if cur in seen:
                    raise InputError(f"parent pointers cycle through node {cur}")
                seen.add(cur)
                cur = self.node(cur).parent

    def node(self, i: int) -> GTDNode:
        for x in self.nodes:
            if x.id == i:
                return x
        raise KeyError(i)

    @property
    def root(self) -> int:
        return next(x.id for x in self.nodes if x.parent is None)

    def children(self, i: int) -> list[int]:
        return [x.id for x in self.nodes if x.parent == i]

    def subtree(self, i: int) -> list[int]:
        out, stack = [], [i]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children(u))
        return sorted(out)

    @property
    def adhesion(self) -> int:
        return max((len(x.beta & self.node(x.parent).beta) for x in self.nodes if x.parent is not None),
                   default=0)

    @property
    def vigilance(self) -> int:
        return max(len(x.gamma) for x in self.nodes)

    def to_doc(self) -> dict:
        return {"nodes": [{"id": x.id, "parent": x.parent, "beta": sorted(x.beta),
                           "gamma": sorted(x.gamma)} for x in self.nodes]}

    @classmethod
    def from_doc(cls, doc: dict) -> "GuardedTreeDecomposition":
        try:
            return cls(tuple(GTDNode(int(x["id"]), None if x["parent"] is None else int(x["parent"]),
                                     frozenset(int(v) for v in x["beta"]),
                                     frozenset(int(v) for v in x["gamma"]))
                             for x in doc["nodes"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed guarded tree decomposition: {exc}") from exc


def validate_gtd(g: Graph, gtd: GuardedTreeDecomposition) -> tuple[bool, list[str]]:
    """Check every axiom; the first diagnostic names the first axiom that fails."""
    out: list[str] = []
    covered = frozenset().union(*(x.beta for x in gtd.nodes))
    if any(not 0 <= v < g.n for v in covered):
        out.append("vertex coverage: bags mention vertices outside the graph")
    missing = set(range(g.n)) - covered
    if missing:
        out.append(f"vertex coverage: vertex {min(missing)} is in no bag")
    for u, v in sorted(g.edges):
        if not any(u in x.beta and v in x.beta for x in gtd.nodes):
            out.append(f"edge coverage: edge ({u}, {v}) is in no bag")
            break
    for v in sorted(covered):
        tops = [x.id for x in gtd.nodes
                if v in x.beta and (x.parent is None or v not in gtd.node(x.parent).beta)]
        if len(tops) != 1:
            out.append(f"contiguity: nodes holding vertex {v} do not form a subtree")
            break
    for x in gtd.nodes:
        if not x.gamma <= x.beta:
            out.append(f"guard containment: guard of node {x.id} leaves its bag")
            break
    for x in gtd.nodes:
        if x.parent is not None and not (x.beta & gtd.node(x.parent).beta) <= x.gamma:
            out.append(f"guard adhesion: guard of node {x.id} misses part of the parent adhesion")
            break
    return (not out, out)


class PathFamily(Protocol):
    """A family of connected subgraphs queried through vertex masks."""

    def find(self, g: Graph, allowed: int) -> Member | None:
        """The shortest, lexicographically least member inside ``g[allowed]``."""

    def meeting(self, g: Graph, allowed: int, touch: int) -> Member | None:
        """Some member inside ``g[allowed]`` that meets ``touch``."""


@dataclass(frozen=True)
class STPaths:
    """All S-T paths of the graph, including length-0 paths on S & T."""

    s: frozenset[int]
    t: frozenset[int]

    def __init__(self, s: Iterable[int], t: Iterable[int]):
        object.__setattr__(self, "s", frozenset(s))
        object.__setattr__(self, "t", frozenset(t))

    def find(self, g: Graph, allowed: int) -> Member | None:
        return least_path(g.nbr_masks, mask_of(self.s), mask_of(self.t), allowed)

    def meeting(self, g: Graph, allowed: int, touch: int) -> Member | None:
        within = to_set(allowed)
        for y in bits(allowed & touch):
            p = st_path_through(g, self.s, self.t, y, within)
            if p is not None:
                return p
        return None


@dataclass(frozen=True)
class ExplicitFamily:
    """A finite list of vertex sets, each inducing a connected subgraph."""

    members: tuple[Member, ...]

    def __init__(self, members: Iterable[Iterable[int]]):
        ms = tuple(sorted({tuple(sorted(set(m))) for m in members}, key=lambda m: (len(m), m)))
        if any(not m for m in ms):
            raise InputError("family members must be non-empty")
        object.__setattr__(self, "members", ms)

    def check(self, g: Graph) -> None:
        for m in self.members:
            vs = mask_of(g.check_vertices(m, "family member"))
            if reach(g.nbr_masks, 1 << m[0], vs) != vs:
                raise InputError(f"family member {list(m)} is not connected")

    def find(self, g: Graph, allowed: int) -> Member | None:
        for m in self.members:
            if mask_of(m) & ~allowed == 0:
                return m
        return None

    def meeting(self, g: Graph, allowed: int, touch: int) -> Member | None:
        for m in self.members:
            mm = mask_of(m)
            if mm & ~allowed == 0 and mm & touch:
                return m
        return None


def _ball(g: Graph, mask: int, d: int) -> int:
    return grow(g.nbr_masks, mask, d, (1 << g.n) - 1)


def guards_check(g: Graph, gtd: GuardedTreeDecomposition, family: PathFamily, d: int) -> bool:
    """True iff every member meeting a bag also meets the radius-``d`` ball of its guard.

    Exact for both family kinds: a violation at node t is a member living in
    ``g - Ball(gamma(t))`` that touches ``beta(t)``.
    """
    return _guard_violation(g, gtd, family, d) is None


def _guard_violation(g, gtd, family, d):
    full = (1 << g.n) - 1
    for x in gtd.nodes:
        outside = full & ~_ball(g, mask_of(x.gamma), d)
        m = family.meeting(g, outside, mask_of(x.beta))
        if m is not None:
            return x.id, m
    return None


@dataclass(frozen=True)
class PackOrHitResult:
    scattered: tuple[Member, ...]
    witness_nodes: tuple[int, ...]
    d: int

    def to_doc(self) -> dict:
        return {"d": self.d, "scattered": [list(m) for m in self.scattered],
                "witness_nodes": list(self.witness_nodes)}


def _prepare(g, gtd, family, d):
    if d < 0:
        raise InputError("d must be non-negative")
    ok, why = validate_gtd(g, gtd)
    if not ok:
        raise InputError("invalid guarded tree decomposition: " + why[0])
    if isinstance(family, ExplicitFamily):
        family.check(g)


def pack_or_hit(g: Graph, gtd: GuardedTreeDecomposition, family: PathFamily, d: int) -> PackOrHitResult:
    """Bottom-up greedy packing with one witness node per packed member.

    Children are visited in ascending id; every witness chosen so far forbids
    the radius-``d`` ball of its guard for the rest of the run.  A node becomes a
    witness when a member survives in its subtree outside the forbidden set.
    """
    _prepare(g, gtd, family, d)
    guard_ball = {x.id: _ball(g, mask_of(x.gamma), d) for x in gtd.nodes}
    under = {}
    for x in gtd.nodes:
        under[x.id] = mask_of(frozenset().union(*(gtd.node(u).beta for u in gtd.subtree(x.id))))
    kids = {x.id: gtd.children(x.id) for x in gtd.nodes}

    def solve(node: int, forbidden: int) -> tuple[list[Member], list[int], int]:
        members: list[Member] = []
        wit: list[int] = []
        for c in kids[node]:
            hs, ns, forbidden = solve(c, forbidden)
            members += hs
            wit += ns
        room = under[node] & ~forbidden
        m = family.find(g, room)
        if m is not None:
            members.append(m)
            wit.append(node)
            forbidden |= guard_ball[node]
            if family.find(g, room & ~guard_ball[node]) is not None:
                raise ContractError(f"guard of node {node} misses a surviving member")
        return members, wit, forbidden

    members, wit, _ = _run_deep(solve, gtd.root)
    return PackOrHitResult(tuple(members), tuple(wit), d)


def _run_deep(fn, root):
    need = 4 * 10**4
    old = sys.getrecursionlimit()
    if old < need:
        sys.setrecursionlimit(need)
    try:
        return fn(root, 0)
    finally:
        sys.setrecursionlimit(old)


@dataclass(frozen=True)
class PackOrCover:
    kind: str
    members: tuple[Member, ...]
    cover: frozenset[int]
    witness_nodes: tuple[int, ...]
    vigilance: int
    k: int
    d: int

    def to_doc(self) -> dict:
        doc = {"kind": self.kind, "d": self.d, "k": self.k, "vigilance": self.vigilance,
               "witness_nodes": list(self.witness_nodes)}
        if self.kind == "pack":
            doc["members"] = [list(m) for m in self.members]
        else:
            doc["cover"] = sorted(self.cover)
        return doc


def cover_hits(g: Graph, family: PathFamily, x: Iterable[int], d: int) -> bool:
    """True iff every member meets the radius-``d`` ball around ``x``."""
    rest = ((1 << g.n) - 1) & ~_ball(g, mask_of(g.check_vertices(x)), d)
    return family.find(g, rest) is None


def pack_or_cover(g: Graph, gtd: GuardedTreeDecomposition, family: PathFamily, d: int,
                  k: int) -> PackOrCover:
    """Either ``k`` d-scattered members or a set of at most ``vigilance * (k - 1)``
    vertices whose radius-``d`` ball meets every member."""
    if k < 1:
        raise InputError("k must be positive")
    res = pack_or_hit(g, gtd, family, d)
    ell = gtd.vigilance
    if len(res.scattered) >= k:
        return PackOrCover("pack", res.scattered[:k], frozenset(), res.witness_nodes[:k], ell, k, d)
    x = frozenset().union(*(gtd.node(i).gamma for i in res.witness_nodes))
    if len(x) > ell * (k - 1):
        raise ContractError(f"cover of size {len(x)} exceeds vigilance*(k-1) = {ell * (k - 1)}")
    if not cover_hits(g, family, x, d):
        raise ContractError("cover misses a family member")
    return PackOrCover("cover", (), x, res.witness_nodes, ell, k, d)
