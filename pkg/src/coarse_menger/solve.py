"""Both sides of the coarse Menger duality: d-scattered S-T packings and distance-d covers.

All searches run on Python-int bitmasks over vertex ids.  A *minimal* S-T path
is an induced path from ``S - T`` to ``T - S`` whose internal vertices avoid
``S ∪ T`` (or a single vertex of ``S ∩ T``).  Every S-T path contains a minimal
one, and shrinking a path only shrinks its d-ball, so the exact packer may
restrict its candidates to minimal paths without losing optimality.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from coarse_menger.core.bits import bits, mask_of, popcount, reach
from coarse_menger.core.distance import ball, ball_masks, is_scattered
from coarse_menger.core.flow import disjoint_path_count
from coarse_menger.core.graph import Graph, Path, is_st_path
from coarse_menger.errors import CertificateError, InputError, SizeError

EXACT_BOUND = 40
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class PackCertificate:
    paths: tuple[Path, ...]
    d: int
    exact: bool = True
    nodes: int = 0

    @property
    def order(self) -> int:
        return len(self.paths)

    def to_doc(self) -> dict:
        return {"kind": "pack", "d": self.d, "exact": self.exact, "paths": [list(p) for p in self.paths]}


@dataclass(frozen=True)
class CoverCertificate:
    centers: frozenset
    d: int
    exact: bool = True
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.centers)

    def to_doc(self) -> dict:
        return {"kind": "cover", "d": self.d, "exact": self.exact, "centers": sorted(self.centers)}


@dataclass(frozen=True)
class DualityReport:
    nu: int
    tau: int
    exact_flags: tuple[bool, bool]
    pack: PackCertificate
    cover: CoverCertificate
    k: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_doc(self) -> dict:
        return {
            "nu": self.nu,
            "tau": self.tau,
            "k": self.k,
            "exact": {"pack": self.exact_flags[0], "cover": self.exact_flags[1]},
            "pack": self.pack.to_doc(),
            "cover": self.cover.to_doc(),
            "notes": list(self.notes),
        }


def certificate_from_doc(doc: dict) -> PackCertificate | CoverCertificate:
    try:
        kind, d = doc["kind"], doc["d"]
        if not isinstance(d, int) or d < 0:
            raise InputError("certificate 'd' must be a non-negative integer")
        if kind == "pack":
            return PackCertificate(tuple(tuple(int(v) for v in p) for p in doc["paths"]), d,
                                   bool(doc.get("exact", False)))
        if kind == "cover":
            return CoverCertificate(frozenset(int(v) for v in doc["centers"]), d,
                                    bool(doc.get("exact", False)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    raise InputError(f"unknown certificate kind {kind!r}")


# -- verification -----------------------------------------------------------------


def verify_pack(g: Graph, s: Iterable[int], t: Iterable[int], cert: PackCertificate) -> tuple[bool, str]:
    s, t = set(s), set(t)
    for p in cert.paths:
        if any(not isinstance(v, int) or not 0 <= v < g.n for v in p):
            return False, f"path {list(p)} has ids out of range"
        if not is_st_path(g, p, s, t):
            return False, f"path {list(p)} is not an S-T path"
    if not is_scattered(g, [set(p) for p in cert.paths], cert.d):
        return False, f"paths not {cert.d}-scattered"
    return True, "ok"


def separates(g: Graph, s: Iterable[int], t: Iterable[int], removed: Iterable[int]) -> bool:
    """True iff ``g - removed`` has no S-T path (length-0 paths included)."""
    rm = mask_of(removed)
    full = (1 << g.n) - 1
    r = full & ~rm
    sm, tm = mask_of(s) & r, mask_of(t) & r
    return not (reach(g.nbr_masks, sm, r) & tm)


def verify_cover(g: Graph, s: Iterable[int], t: Iterable[int], cert: CoverCertificate) -> tuple[bool, str]:
    if any(not 0 <= v < g.n for v in cert.centers):
        return False, "centers out of range"
    if not separates(g, s, t, ball(g, cert.centers, cert.d)):
        return False, f"an S-T path avoids the radius-{cert.d} ball of the centers"
    return True, "ok"


# -- shared bitmask machinery --------------------------------------------------------


class _Ctx:
    def __init__(self, g: Graph, s: Iterable[int], t: Iterable[int], d: int):
        if d < 0:
            raise InputError("d must be non-negative")
        self.g = g
        self.d = d
        self.nbr = g.nbr_masks
        self.sm = mask_of(g.check_vertices(s, "S"))
        self.tm = mask_of(g.check_vertices(t, "T"))
        self.full = (1 << g.n) - 1
        self.balls = ball_masks(g, d)

    def ball_of(self, mask: int) -> int:
        out = 0
        for v in bits(mask):
            out |= self.balls[v]
        return out

    def connected(self, r: int) -> bool:
        return bool(reach(self.nbr, self.sm & r, r) & self.tm)

    def layers(self, r: int) -> list[int] | None:
        """BFS layers from T inside r, stopping at the first layer meeting S."""
        cur = self.tm & r
        seen = cur
        out = [cur]
        while cur and not cur & self.sm:
            nxt = 0
            for v in bits(cur):
                nxt |= self.nbr[v]
            cur = nxt & r & ~seen
            seen |= cur
            out.append(cur)
        return out if cur else None

    def shortest_path(self, r: int) -> Path | None:
        """Lexicographically least shortest S-T path in g[r]."""
        lay = self.layers(r)
        if lay is None:
            return None
        v = _low(lay[-1] & self.sm)
        path = [v]
        for i in range(len(lay) - 2, -1, -1):
            v = _low(self.nbr[v] & lay[i])
            path.append(v)
        return tuple(path)

    def minimal_paths(self, r: int, meet: int) -> list[Path]:
        """All minimal S-T paths inside r that meet ``meet``, shortest then lexicographic."""
        nbr, sm, tm = self.nbr, self.sm, self.tm
        out: list[Path] = [(v,) for v in bits(sm & tm & r & meet)]
        inner = r & ~sm & ~tm
        # vertices that can still reach T through inner vertices
        live = reach(nbr, tm & r & ~sm, inner | (tm & r & ~sm))
        ends = tm & r & ~sm
        for s0 in bits(sm & r & ~tm):
            path = [s0]

            def grow(blocked: int, hit: bool):
                last = path[-1]
                ext = nbr[last] & ~blocked
                for w in bits(ext & ends):
                    if hit or (meet >> w) & 1:
                        out.append(tuple(path) + (w,))
                nb_closed = blocked | nbr[last] | (1 << last)
                for w in bits(ext & inner & live):
                    path.append(w)
                    grow(nb_closed, hit or bool((meet >> w) & 1))
                    path.pop()

            grow(1 << s0, bool((meet >> s0) & 1))
        out.sort(key=lambda p: (len(p), p))
        return out


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class _Budget(Exception):
    pass


def _check_size(g: Graph, bound: int) -> None:
    if g.n > bound:
        raise SizeError(f"exact solvers are limited to {bound} vertices, got {g.n}")


# -- packing --------------------------------------------------------------------------


def greedy_packing(g: Graph, s: Iterable[int], t: Iterable[int], d: int) -> PackCertificate:
    """Take the lexicographically least shortest S-T path, delete its d-ball, repeat."""
    ctx = _Ctx(g, s, t, d)
    return PackCertificate(tuple(_greedy_pack(ctx, ctx.full, ctx.balls)), d, exact=False)


def _greedy_pack(ctx: _Ctx, r: int, balls: list[int], cap: int | None = None) -> list[Path]:
    paths = []
    while cap is None or len(paths) < cap:
        p = ctx.shortest_path(r)
        if p is None:
            break
        paths.append(p)
        for v in p:
            r &= ~balls[v]
    return paths


def max_packing_exact(
    g: Graph,
    s: Iterable[int],
    t: Iterable[int],
    d: int,
    cap: int | None = None,
    budget: int = DEFAULT_BUDGET,
    bound: int = EXACT_BOUND,
) -> PackCertificate:
    """Maximum d-scattered S-T linkage, truncated at ``cap`` paths.

    Branch and bound: with P0 a shortest S-T path in the surviving region R,
    every maximal packing has a member meeting the d-ball of P0, so it is
    enough to branch over minimal paths meeting that ball.  Candidates whose
    ball (restricted to R) contains another candidate's are skipped, since
    the other choice leaves a superset of R behind.  The vertex-disjoint
    path count of g[R] bounds the remaining value.  When ``budget`` search
    nodes are spent the best packing seen so far is returned with
    ``exact=False``.
    """
    _check_size(g, bound)
    ctx = _Ctx(g, s, t, d)
    cap = g.n if cap is None else cap
    if cap < 0:
        raise InputError("cap must be non-negative")
    memo: dict[int, tuple[int, tuple[Path, ...]]] = {}
    counter = [0]
    incumbent = tuple(_greedy_pack(ctx, ctx.full, ctx.balls, cap))
    if len(incumbent) == cap:
        return PackCertificate(incumbent, d, exact=True, nodes=0)
    best_seen = [incumbent]
    sv = sorted(bits(ctx.sm))
    tv = sorted(bits(ctx.tm))

    def upper(r: int, limit: int) -> int:
        return disjoint_path_count(g, sv, tv, within=bits(r), limit=limit)

    def search(r: int, c: int, prefix: tuple[Path, ...]) -> tuple[Path, ...]:
        if c == 0:
            return ()
        hit = memo.get(r)
        if hit is not None:
            hc, res = hit
            if len(res) < hc or c <= hc:
                return res[:c]
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget
        p0 = ctx.shortest_path(r)
        if p0 is None:
            memo[r] = (c, ())
            return ()
        ub = upper(r, c)
        meet = ctx.ball_of(mask_of(p0)) & r
        cands = []
        for q in ctx.minimal_paths(r, meet):
            cands.append((ctx.ball_of(mask_of(q)) & r, q))
        cands = _undominated(cands, smaller_is_better=True)
        best: tuple[Path, ...] = ()
        for bm, q in cands:
            rest = r & ~bm
            if 1 + min(c - 1, upper(rest, c - 1)) <= len(best):
                continue
            sub = search(rest, c - 1, prefix + (q,))
            if 1 + len(sub) > len(best):
                best = (q,) + sub
                if len(prefix) + len(best) > len(best_seen[0]):
                    best_seen[0] = prefix + best
                if len(best) >= min(c, ub):
                    break
        memo[r] = (c, best)
        return best

    try:
        result = search(ctx.full, cap, ())
        exact = True
    except _Budget:
        result = best_seen[0]
        exact = False
    if len(incumbent) > len(result):
        result = incumbent
    return PackCertificate(tuple(result), d, exact=exact, nodes=counter[0])


def _undominated(cands: list[tuple[int, object]], smaller_is_better: bool) -> list[tuple[int, object]]:
    """Drop candidates whose mask is dominated; first occurrence wins among equal masks.

    With ``smaller_is_better`` a mask that contains another candidate's mask is
    dropped, otherwise a mask contained in another candidate's mask is dropped.
    Input order is preserved among survivors.
    """
    order = sorted(range(len(cands)), key=lambda i: (popcount(cands[i][0]) * (1 if smaller_is_better else -1), i))
    kept: list[int] = []
    for i in order:
        m = cands[i][0]
        dominated = False
        for j in kept:
            o = cands[j][0]
            if smaller_is_better and o & ~m == 0:
                dominated = True
                break
            if not smaller_is_better and m & ~o == 0:
                dominated = True
                break
        if not dominated:
            kept.append(i)
    kept.sort()
    return [cands[i] for i in kept]


# -- covering ---------------------------------------------------------------------------


def _scattered_lower_bound(ctx: _Ctx, r: int, balls2: list[int]) -> int:
    # a radius-d ball meets at most one path of a 2d-scattered family
    return len(_greedy_pack(ctx, r, balls2))


def min_cover_exact(
    g: Graph,
    s: Iterable[int],
    t: Iterable[int],
    d: int,
    budget: int = DEFAULT_BUDGET,
    bound: int = EXACT_BOUND,
) -> CoverCertificate:
    """Minimum set X whose radius-d ball separates S from T.

    Iterative deepening on |X|.  Some center must lie within distance d of a
    shortest surviving S-T path; centers whose ball (inside the surviving
    region) is contained in another candidate's are skipped.  A greedy
    2d-scattered packing bounds the number of centers still needed.
    """
    _check_size(g, bound)
    ctx = _Ctx(g, s, t, d)
    balls2 = ball_masks(g, 2 * d)
    counter = [0]
    failed: dict[int, int] = {}

    def search(r: int, j: int) -> tuple[int, ...] | None:
        p = ctx.shortest_path(r)
        if p is None:
            return ()
        if j == 0 or failed.get(r, -1) >= j:
            return None
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget
        if _scattered_lower_bound(ctx, r, balls2) > j:
            failed[r] = max(failed.get(r, -1), j)
            return None
        zone = 0
        for v in p:
            zone |= ctx.balls[v]
        cands = _undominated([(ctx.balls[c] & r, c) for c in bits(zone)], smaller_is_better=False)
        for bm, c in cands:
            sub = search(r & ~bm, j - 1)
            if sub is not None:
                return (c,) + sub
        failed[r] = max(failed.get(r, -1), j)
        return None

    lb = _scattered_lower_bound(ctx, ctx.full, balls2)
    fallback = _greedy_cover_mask(ctx, seed=0)
    try:
        for j in range(lb, len(fallback) + 1):
            res = search(ctx.full, j)
            if res is not None:
                return CoverCertificate(frozenset(res), d, exact=True, nodes=counter[0])
    except _Budget:
        pass
    return CoverCertificate(frozenset(fallback), d, exact=False, nodes=counter[0])


def greedy_cover(g: Graph, s: Iterable[int], t: Iterable[int], d: int,
                 seed: int = 0, samples: int = 32) -> CoverCertificate:
    """Pick, repeatedly, the vertex whose d-ball meets the most sampled shortest S-T paths.

    Paths are drawn uniformly from the shortest S-T paths of the surviving
    graph using a seeded PCG64 generator.  Each round removes at least one
    vertex of a surviving path, so the loop terminates.
    """
    ctx = _Ctx(g, s, t, d)
    return CoverCertificate(frozenset(_greedy_cover_mask(ctx, seed, samples)), d, exact=False)


def _greedy_cover_mask(ctx: _Ctx, seed: int, samples: int = 32) -> list[int]:
    rng = np.random.Generator(np.random.PCG64(seed))
    r = ctx.full
    centers: list[int] = []
    while True:
        lay = ctx.layers(r)
        if lay is None:
            return sorted(centers)
        sampled = _sample_shortest(ctx, lay, rng, samples)
        zone = 0
        for m in sampled:
            zone |= ctx.ball_of(m)
        best, best_hits = -1, -1
        for c in bits(zone):
            b = ctx.balls[c]
            hits = sum(1 for m in sampled if m & b)
            if hits > best_hits:
                best, best_hits = c, hits
        centers.append(best)
        r &= ~ctx.balls[best]


def _sample_shortest(ctx: _Ctx, lay: list[int], rng: np.random.Generator, samples: int) -> list[int]:
    """Uniform samples of shortest S-T paths, as vertex masks, via path counts on the layer DAG."""
    nbr = ctx.nbr
    count: dict[int, int] = {v: 1 for v in bits(lay[0])}
    for i in range(1, len(lay)):
        for v in bits(lay[i]):
            count[v] = sum(count[w] for w in bits(nbr[v] & lay[i - 1]))
    starts = sorted(bits(lay[-1] & ctx.sm))
    out = []
    for _ in range(samples):
        v = _weighted(starts, count, rng)
        m = 1 << v
        for i in range(len(lay) - 2, -1, -1):
            v = _weighted(sorted(bits(nbr[v] & lay[i])), count, rng)
            m |= 1 << v
        out.append(m)
    return out


def _weighted(choices: list[int], count: dict[int, int], rng: np.random.Generator) -> int:
    if len(choices) == 1:
        return choices[0]
    acc = list(itertools.accumulate(count[c] for c in choices))
    i = bisect.bisect_right(acc, rng.random() * acc[-1])
    return choices[min(i, len(choices) - 1)]


# -- report -----------------------------------------------------------------------------


def duality_report(
    g: Graph,
    s: Iterable[int],
    t: Iterable[int],
    d: int,
    k: int,
    budget: int = DEFAULT_BUDGET,
    bound: int = EXACT_BOUND,
    seed: int = 0,
) -> DualityReport:
    """Run both sides; falls back to the heuristics beyond ``bound`` vertices.

    The packing search is capped at ``k`` paths.  Both certificates are
    re-verified before the report is returned.
    """
    if k < 0:
        raise InputError("k must be non-negative")
    s = g.check_vertices(s, "S")
    t = g.check_vertices(t, "T")
    notes = []
    if g.n <= bound:
        pack = max_packing_exact(g, s, t, d, cap=k, budget=budget, bound=bound)
        cover = min_cover_exact(g, s, t, d, budget=budget, bound=bound)
    else:
        notes.append(f"n={g.n} exceeds exact bound {bound}; heuristics only")
        pack = greedy_packing(g, s, t, d)
        pack = PackCertificate(pack.paths[:k], d, exact=False)
        cover = greedy_cover(g, s, t, d, seed=seed)
    for ok, msg in (verify_pack(g, s, t, pack), verify_cover(g, s, t, cover)):
        if not ok:
            raise CertificateError(msg)
    if pack.order < k:
        notes.append(f"fewer than {k} scattered paths; cover of size {cover.size} certifies")
    return DualityReport(pack.order, cover.size, (pack.exact, cover.exact), pack, cover, k, tuple(notes))
