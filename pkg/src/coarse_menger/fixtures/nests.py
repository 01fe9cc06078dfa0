"""Nests (concentric disjoint cycles) and railed nests (nests crossed by orthogonal rails)."""

from __future__ import annotations

from dataclasses import dataclass

from coarse_menger.core.graph import Graph, Path, is_cycle, is_path


@dataclass(frozen=True)
class Nest:
    """Cycles listed innermost first, each as a cyclic vertex sequence."""

    cycles: tuple[Path, ...]

    @property
    def order(self) -> int:
        return len(self.cycles)

    def problems(self, g: Graph) -> list[str]:
        out = []
        seen: set[int] = set()
        for i, c in enumerate(self.cycles):
            if not is_cycle(g, c):
                out.append(f"cycle {i} is not a cycle of the graph")
            if seen.intersection(c):
                out.append(f"cycle {i} meets an earlier cycle")
            seen.update(c)
        return out

    def to_doc(self) -> dict:
        return {"cycles": [list(c) for c in self.cycles]}


def pieces_along(seq: Path, members: set[int], cyclic: bool = False) -> list[list[int]]:
    """Maximal runs of consecutive ``seq`` entries lying in ``members``."""
    runs: list[list[int]] = []
    cur: list[int] = []
    for v in seq:
        if v in members:
            cur.append(v)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    if cyclic and len(runs) > 1 and seq[0] in members and seq[-1] in members:
        runs[0] = runs.pop() + runs[0]
    return runs


@dataclass(frozen=True)
class RailedNest:
    nest: Nest
    rails: tuple[Path, ...]

    @property
    def order(self) -> tuple[int, int]:
        return (self.nest.order, len(self.rails))

    def problems(self, g: Graph) -> list[str]:
        """Empty iff cycles and rails are valid and every rail crosses every cycle in one piece."""
        out = self.nest.problems(g)
        used: set[int] = set()
        for j, p in enumerate(self.rails):
            if not is_path(g, p):
                out.append(f"rail {j} is not a path of the graph")
            if used.intersection(p):
                out.append(f"rail {j} meets an earlier rail")
            used.update(p)
        for j, p in enumerate(self.rails):
            for i, c in enumerate(self.nest.cycles):
                common = set(p) & set(c)
                if not common:
                    out.append(f"rail {j} misses cycle {i}")
                    continue
                if len(pieces_along(p, common)) != 1 or len(pieces_along(c, common, cyclic=True)) != 1:
                    out.append(f"rail {j} meets cycle {i} in more than one piece")
        return out

    def to_doc(self) -> dict:
        return {"cycles": [list(c) for c in self.nest.cycles], "rails": [list(p) for p in self.rails]}
