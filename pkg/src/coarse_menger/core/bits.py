"""Bitmask vertex-set helpers used by the solvers (ids < a few hundred)."""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def mask_of(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def neighborhood(nbr: Sequence[int], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= nbr[low.bit_length() - 1]
        mask ^= low
    return out


def reach(nbr: Sequence[int], start: int, allowed: int) -> int:
    """Vertices reachable from ``start`` inside the induced subgraph on ``allowed``."""
    seen = start & allowed
    frontier = seen
    while frontier:
        frontier = neighborhood(nbr, frontier) & allowed & ~seen
        seen |= frontier
    return seen


def union_of(masks: Sequence[int], mask: int) -> int:
    out = 0
    for v in bits(mask):
        out |= masks[v]
    return out


def least_path(nbr: Sequence[int], src: int, dst: int, allowed: int) -> tuple[int, ...] | None:
    """Lexicographically least among the shortest ``src``-``dst`` paths inside ``allowed``."""
    cur = dst & allowed
    seen = cur
    layers = [cur]
    while cur and not cur & src:
        cur = neighborhood(nbr, cur) & allowed & ~seen
        seen |= cur
        layers.append(cur)
    if not cur:
        return None
    hit = cur & src
    v = (hit & -hit).bit_length() - 1
    path = [v]
    for lay in reversed(layers[:-1]):
        opts = nbr[v] & lay
        v = (opts & -opts).bit_length() - 1
        path.append(v)
    return tuple(path)


def grow(nbr: Sequence[int], mask: int, radius: int, allowed: int) -> int:
    """Radius-``radius`` ball around ``mask`` measured inside ``allowed``."""
    seen = mask & allowed
    frontier = seen
    for _ in range(radius):
        frontier = neighborhood(nbr, frontier) & allowed & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen
