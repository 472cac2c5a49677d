"""Triple-point obstruction for odd-Euler-characteristic non-orientable surfaces.

An immersion of such a surface in general position has an odd, hence
positive, number of triple points. A triple point needs three pairwise
vertex-disjoint triangles that can pierce each other pairwise; if no such
triple exists the triangulation has no polyhedral immersion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complex import SurfaceComplex

__all__ = ["ObstructionVerdict", "pair_pierceable", "triple_point_feasible"]


@dataclass(frozen=True)
class ObstructionVerdict:
    applicable: bool
    feasible_triples_exist: bool
    witness: tuple[int, int, int] | None = None  # triangle indices

    @property
    def obstructed(self) -> bool:
        return self.applicable and not self.feasible_triples_exist


def _edge_neighbors(c: SurfaceComplex, i: int) -> list[int]:
    a, b, t = c.triangles[i]
    return [
        next(k for k in c.edge_index[e] if k != i)
        for e in ((a, b), (a, t), (b, t))
    ]


def pair_pierceable(t1: int, t2: int, c: SurfaceComplex) -> bool:
    """Whether vertex-disjoint triangles ``t1``, ``t2`` (indices) can cross properly.

    At most 4 of the 6 edge-neighbours of the pair may lie entirely inside
    the 6-vertex union.
    """
    s1, s2 = set(c.triangles[t1]), set(c.triangles[t2])
    if s1 & s2:
        return False
    union = s1 | s2
    inside = sum(
        1 for k in _edge_neighbors(c, t1) + _edge_neighbors(c, t2)
        if set(c.triangles[k]) <= union
    )
    return inside <= 4


def triple_point_feasible(c: SurfaceComplex) -> ObstructionVerdict:
    applicable = (not c.orientable) and c.euler_characteristic % 2 == 1
    if not applicable:
        return ObstructionVerdict(False, True, None)
    f2 = len(c.triangles)
    good = [set() for _ in range(f2)]
    for i, j in itertools.combinations(range(f2), 2):
        if pair_pierceable(i, j, c):
            good[i].add(j)
            good[j].add(i)
    for i in range(f2):
        for j in sorted(good[i]):
            if j <= i:
                continue
            for k in sorted(good[i] & good[j]):
                if k > j:
                    return ObstructionVerdict(True, True, (i, j, k))
    return ObstructionVerdict(True, False, None)
