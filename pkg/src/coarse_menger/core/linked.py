"""Exact well-linkedness by enumerating separator sets."""

from __future__ import annotations

from typing import Iterable

from coarse_menger.core.bits import bits, mask_of, popcount, reach
from coarse_menger.core.graph import Graph
from coarse_menger.errors import SizeError

EXACT_BOUND = 16


def is_well_linked(g: Graph, x: Iterable[int], bound: int = EXACT_BOUND) -> bool:
    """True iff no separation (A, B) has both |A∩X| and |B∩X| above its order.

    For each candidate separator Z = A∩B the components of g - Z are split
    between the two sides; a violating split exists iff some subset of the
    components carries between q+1 and total-q-1 vertices of X, where
    q = |Z| - |Z∩X|.
    """
    xs = g.check_vertices(x, "X")
    if g.n > bound:
        raise SizeError(f"well-linkedness is exact-only; graph has {g.n} > {bound} vertices")
    nbr = g.nbr_masks
    full = (1 << g.n) - 1
    xm = mask_of(xs)
    for z in range(1 << g.n):
        q = popcount(z) - popcount(z & xm)
        rest = full & ~z
        counts = []
        while rest:
            comp = reach(nbr, rest & -rest, full & ~z)
            rest &= ~comp
            c = popcount(comp & xm)
            if c:
                counts.append(c)
        total = sum(counts)
        if total < 2 * q + 2:
            continue
        sums = 1
        for c in counts:
            sums |= sums << c
        window = sums >> (q + 1)
        if window & ((1 << (total - 2 * q - 1)) - 1):
            return False
    return True
