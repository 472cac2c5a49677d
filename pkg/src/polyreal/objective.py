"""Intersection-length objective for embeddings and immersions.

The objective sums the lengths of the intersection segments over a fixed
schedule of triangle pairs. Edge-adjacent pairs are never scheduled; in
immersion mode only pairs with a common vertex are.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .complex import SurfaceComplex
from .exactgeom import (
    _cross,
    _dot,
    _sub,
    in_general_position,
    orient_value,
    in_relaxed_general_position,
    segment_meets_triangle,
    triangle_pair_intersection,
)

__all__ = [
    "Mode",
    "PairSchedule",
    "ObjectiveValue",
    "CacheMiss",
    "build_pair_schedule",
    "evaluate",
    "DeltaEvaluator",
    "evaluate_delta",
    "verify_realization",
]


class Mode(enum.Enum):
    EMBED = "embed"
    IMMERSE = "immerse"


class CacheMiss(LookupError):
    pass


@dataclass(frozen=True)
class PairSchedule:
    mode: Mode
    triangles: tuple[tuple[int, int, int], ...]
    pairs: tuple[tuple[int, int], ...]
    vertex_count: int


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    contributing_pairs: tuple[tuple[tuple[int, int], float], ...] = field(default=())


def build_pair_schedule(c: SurfaceComplex, mode: Mode) -> PairSchedule:
    pairs = []
    for i, j in itertools.combinations(range(len(c.triangles)), 2):
        common = len(set(c.triangles[i]) & set(c.triangles[j]))
        if common == 2:
            continue
        if mode is Mode.IMMERSE and common == 0:
            continue
        pairs.append((i, j))
    return PairSchedule(mode, c.triangles, tuple(pairs), c.vertex_count)


def _pts(psi):
    pts = getattr(psi, "coords", psi)
    return [tuple(int(x) for x in p) for p in pts]


def _pair_length(schedule: PairSchedule, pts, pair) -> float:
    i, j = pair
    t1 = [pts[v] for v in schedule.triangles[i]]
    t2 = [pts[v] for v in schedule.triangles[j]]
    seg = triangle_pair_intersection(t1, t2)
    return 0.0 if seg is None else seg.length


def _total(lengths) -> float:
    # fixed left-to-right order so every evaluation path agrees bit-for-bit
    total = 0.0
    for x in lengths:
        total += x
    return total


def evaluate(schedule: PairSchedule, psi) -> ObjectiveValue:
    """Sum of exact intersection lengths over the schedule.

    Propagates :class:`~polyreal.exactgeom.DegenerateConfiguration`.
    """
    pts = _pts(psi)
    lengths = [_pair_length(schedule, pts, p) for p in schedule.pairs]
    contrib = tuple((p, x) for p, x in zip(schedule.pairs, lengths) if x > 0)
    return ObjectiveValue(_total(lengths), contrib)


class DeltaEvaluator:
    """Per-pair cache so a single-vertex move only recomputes touched pairs."""

    def __init__(self, schedule: PairSchedule):
        self.schedule = schedule
        self._lengths: list[float] | None = None
        self._by_vertex = [[] for _ in range(schedule.vertex_count)]
        for k, (i, j) in enumerate(schedule.pairs):
            for v in set(schedule.triangles[i]) | set(schedule.triangles[j]):
                self._by_vertex[v].append(k)

    def evaluate(self, psi) -> ObjectiveValue:
        pts = _pts(psi)
        self._lengths = [_pair_length(self.schedule, pts, p) for p in self.schedule.pairs]
        return self._value()

    def evaluate_delta(self, psi, moved_vertex: int) -> ObjectiveValue:
        if self._lengths is None:
            raise CacheMiss("no baseline evaluation cached")
        if not 0 <= moved_vertex < self.schedule.vertex_count:
            raise IndexError(f"vertex {moved_vertex} not in the complex")
        pts = _pts(psi)
        for k in self._by_vertex[moved_vertex]:
            self._lengths[k] = _pair_length(self.schedule, pts, self.schedule.pairs[k])
        return self._value()

    def _value(self) -> ObjectiveValue:
        contrib = tuple(
            (p, x) for p, x in zip(self.schedule.pairs, self._lengths) if x > 0
        )
        return ObjectiveValue(_total(self._lengths), contrib)


def evaluate_delta(evaluator: DeltaEvaluator, psi, moved_vertex: int) -> ObjectiveValue:
    return evaluator.evaluate_delta(psi, moved_vertex)


def _pinch(tv, tw, v, pts) -> bool:
    """Triangles ``tv`` and ``tw`` sharing only vertex ``v`` meet beyond it."""
    a, b = (pts[x] for x in tv if x != v)
    c, d = (pts[x] for x in tw if x != v)
    p = pts[v]
    if segment_meets_triangle(a, b, p, c, d) or segment_meets_triangle(c, d, p, a, b):
        return True
    # an edge from v running into the other triangle's corner at v
    for x in (a, b):
        if _ray_enters(p, x, p, c, d):
            return True
    for x in (c, d):
        if _ray_enters(p, x, p, a, b):
            return True
    return False


def _ray_enters(p, x, v, c, d) -> bool:
    """Segment p->x starts by entering the closed triangle (v, c, d) at v."""
    if orient_value(v, c, d, x) != 0:
        return False
    u = _sub(x, p)
    e1, e2 = _sub(c, v), _sub(d, v)
    n = _cross(e1, e2)
    # u lies in the closed cone spanned by e1, e2
    return _dot(_cross(e1, u), n) >= 0 and _dot(_cross(u, e2), n) >= 0


def verify_realization(c: SurfaceComplex, psi, mode: Mode, relaxed: bool = True) -> bool:
    """Schedule-free exact check that ``psi`` realizes ``c``.

    EMBED: no two non-adjacent closed triangles meet (except at a common
    vertex). IMMERSE: no two non-adjacent triangles with a common vertex meet
    beyond it. Both also require the position requirement.
    """
    pts = _pts(psi)
    if len(pts) != c.vertex_count:
        return False
    if relaxed:
        if not in_relaxed_general_position(c, pts):
            return False
    elif not in_general_position(pts):
        return False
    tris = c.triangles
    for i in range(len(tris)):
        for j in range(i + 1, len(tris)):
            common = set(tris[i]) & set(tris[j])
            if len(common) == 2:
                continue
            if len(common) == 1:
                if _pinch(tris[i], tris[j], next(iter(common)), pts):
                    return False
            elif mode is Mode.EMBED:
                t1 = [pts[v] for v in tris[i]]
                t2 = [pts[v] for v in tris[j]]
                if any(
                    segment_meets_triangle(t1[a], t1[b], *t2)
                    or segment_meets_triangle(t2[a], t2[b], *t1)
                    for a, b in ((0, 1), (1, 2), (0, 2))
                ):
                    return False
    return True
