"""Exact predicates on integer points and exact triangle-pair intersections.

Everything here works on Python integers and :class:`fractions.Fraction`,
so results are exact for any input size. The compiled kernel uses 128-bit
integers instead and relies on :data:`COORD_LIMIT`: with ``|coord| <= 2**20``
an orientation determinant is bounded by ``6 * (2**21)**3 < 2**66``, far
inside the signed 128-bit range.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "COORD_LIMIT",
    "DegenerateConfiguration",
    "IntersectionSegment",
    "orientation",
    "orient_value",
    "in_general_position",
    "point_in_triangle",
    "segments_intersect",
    "segment_meets_triangle",
    "in_relaxed_general_position",
    "triangle_pair_intersection",
]

COORD_LIMIT = 2**20

Point = Sequence[int]


class DegenerateConfiguration(ArithmeticError):
    """A position-requirement violation turned up while intersecting triangles."""


@dataclass(frozen=True)
class IntersectionSegment:
    start: tuple[Fraction, Fraction, Fraction]
    end: tuple[Fraction, Fraction, Fraction]
    squared_length: Fraction

    @property
    def length(self) -> float:
        return _sqrt_fraction(self.squared_length)


def _sqrt_fraction(q: Fraction) -> float:
    # float(Fraction) and math.sqrt are both correctly rounded
    return math.sqrt(float(q))


def _check(p: Point) -> None:
    for x in p:
        assert -COORD_LIMIT <= x <= COORD_LIMIT, f"coordinate {x} outside +-2**20"


def _pt(p) -> tuple[int, int, int]:
    # plain ints: numpy scalars would overflow or misbehave in the sign tricks
    return (int(p[0]), int(p[1]), int(p[2]))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def orient_value(a: Point, b: Point, c: Point, d: Point) -> int:
    """det[b - a, c - a, d - a]."""
    a, b, c, d = _pt(a), _pt(b), _pt(c), _pt(d)
    return _dot(_sub(b, a), _cross(_sub(c, a), _sub(d, a)))


def orientation(a: Point, b: Point, c: Point, d: Point) -> int:
    a, b, c, d = _pt(a), _pt(b), _pt(c), _pt(d)
    for p in (a, b, c, d):
        _check(p)
    v = orient_value(a, b, c, d)
    return (v > 0) - (v < 0)


def in_general_position(points: Sequence[Point]) -> bool:
    pts = [_pt(p) for p in points]
    if len(set(pts)) != len(pts):
        return False
    return all(orientation(*quad) != 0 for quad in itertools.combinations(pts, 4))


def _on_segment(p, a, b) -> bool:
    """p on the closed segment ab (a == b allowed)."""
    ab = _sub(b, a)
    ap = _sub(p, a)
    if ab == (0, 0, 0):
        return ap == (0, 0, 0)
    if _cross(ab, ap) != (0, 0, 0):
        return False
    t = _dot(ap, ab)
    return 0 <= t <= _dot(ab, ab)


def _drop_axis(n) -> tuple[int, int]:
    k = max(range(3), key=lambda i: abs(n[i]))
    return [(1, 2), (0, 2), (0, 1)][k]


def _orient2(p, q, r, ax) -> int:
    i, j = ax
    v = (q[i] - p[i]) * (r[j] - p[j]) - (q[j] - p[j]) * (r[i] - p[i])
    return (v > 0) - (v < 0)


def point_in_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    """p lies in the closed triangle abc."""
    p, a, b, c = _pt(p), _pt(a), _pt(b), _pt(c)
    if orient_value(a, b, c, p) != 0:
        return False
    n = _cross(_sub(b, a), _sub(c, a))
    if n == (0, 0, 0):
        return _on_segment(p, a, b) or _on_segment(p, b, c) or _on_segment(p, a, c)
    ax = _drop_axis(n)
    s = (_orient2(a, b, p, ax), _orient2(b, c, p, ax), _orient2(c, a, p, ax))
    return min(s) >= 0 or max(s) <= 0


def segments_intersect(p: Point, q: Point, r: Point, s: Point) -> bool:
    """Closed segments pq and rs share a point."""
    p, q, r, s = _pt(p), _pt(q), _pt(r), _pt(s)
    if p == q:
        return _on_segment(p, r, s)
    if r == s:
        return _on_segment(r, p, q)
    if orient_value(p, q, r, s) != 0:
        return False
    n = _cross(_sub(q, p), _sub(r, p))
    if n == (0, 0, 0):
        n = _cross(_sub(q, p), _sub(s, p))
    if n == (0, 0, 0):
        return (
            _on_segment(p, r, s) or _on_segment(q, r, s)
            or _on_segment(r, p, q) or _on_segment(s, p, q)
        )
    ax = _drop_axis(n)
    d1, d2 = _orient2(r, s, p, ax), _orient2(r, s, q, ax)
    d3, d4 = _orient2(p, q, r, ax), _orient2(p, q, s, ax)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (
        (d1 == 0 and _on_segment(p, r, s)) or (d2 == 0 and _on_segment(q, r, s))
        or (d3 == 0 and _on_segment(r, p, q)) or (d4 == 0 and _on_segment(s, p, q))
    )


def segment_meets_triangle(p: Point, q: Point, a: Point, b: Point, c: Point) -> bool:
    """Closed segment pq meets the closed triangle abc."""
    p, q, a, b, c = _pt(p), _pt(q), _pt(a), _pt(b), _pt(c)
    sp, sq = orient_value(a, b, c, p), orient_value(a, b, c, q)
    if (sp > 0 and sq > 0) or (sp < 0 and sq < 0):
        return False
    if sp == 0 and sq == 0:
        return (
            point_in_triangle(p, a, b, c) or point_in_triangle(q, a, b, c)
            or segments_intersect(p, q, a, b) or segments_intersect(p, q, b, c)
            or segments_intersect(p, q, a, c)
        )
    # pq crosses the plane; the crossing lies in abc iff pq passes on the
    # inner side of all three edge lines
    s = (orient_value(p, q, a, b), orient_value(p, q, b, c), orient_value(p, q, c, a))
    return min(s) >= 0 or max(s) <= 0


def _coords(psi):
    pts = getattr(psi, "coords", psi)
    return [tuple(int(x) for x in p) for p in pts]


def in_relaxed_general_position(c, psi) -> bool:
    """Injective, no vertex on a foreign triangle, no two disjoint edges meeting."""
    pts = _coords(psi)
    if len(set(pts)) != len(pts):
        return False
    for tri in c.triangles:
        a, b, t = (pts[v] for v in tri)
        for v in range(c.vertex_count):
            if v not in tri and point_in_triangle(pts[v], a, b, t):
                return False
    for e, f in itertools.combinations(c.edges, 2):
        if set(e) & set(f):
            continue
        if segments_intersect(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]]):
            return False
    return True


# --- triangle pair intersection -------------------------------------------

def _chord(tri, dets):
    """Points of ``tri`` on the other triangle's plane, as Fractions.

    ``dets`` are the orientation determinants of the vertices against that plane.
    """
    pts = []
    for i in range(3):
        if dets[i] == 0:
            pts.append(tuple(Fraction(x) for x in tri[i]))
    for i, j in ((0, 1), (1, 2), (0, 2)):
        di, dj = dets[i], dets[j]
        if (di > 0 and dj < 0) or (di < 0 and dj > 0):
            den = di - dj
            pts.append(tuple(Fraction(di * tri[j][k] - dj * tri[i][k], den) for k in range(3)))
    return pts


def _coplanar_overlap(t1, t2, shared) -> bool:
    """Coplanar triangles meeting somewhere other than a shared vertex."""
    for i, p in enumerate(t1):
        if i not in shared[0] and point_in_triangle(p, *t2):
            return True
    for j, p in enumerate(t2):
        if j not in shared[1] and point_in_triangle(p, *t1):
            return True
    for i, k in ((0, 1), (1, 2), (0, 2)):
        for j, m in ((0, 1), (1, 2), (0, 2)):
            if {i, k} & shared[0] and {j, m} & shared[1]:
                # edges through the shared vertex; contact there is allowed
                e1 = (t1[i], t1[k])
                e2 = (t2[j], t2[m])
                common = set(e1) & set(e2)
                if common and _collinear_overlap(e1, e2):
                    return True
                if common:
                    continue
            if segments_intersect(t1[i], t1[k], t2[j], t2[m]):
                return True
    return False


def _collinear_overlap(e1, e2) -> bool:
    """Two segments sharing an endpoint overlap in more than that point."""
    (a, b), (c, d) = e1, e2
    v = a if a in (c, d) else b
    x = b if v == a else a
    y = d if v == c else c
    u, w = _sub(x, v), _sub(y, v)
    return _cross(u, w) == (0, 0, 0) and _dot(u, w) > 0


def triangle_pair_intersection(t1, t2) -> IntersectionSegment | None:
    """Exact intersection of two non-adjacent closed triangles.

    Returns ``None`` when the triangles are disjoint or touch only at a shared
    vertex. Raises :class:`DegenerateConfiguration` when the configuration
    violates the position requirement (coincident vertices, a vertex on the
    other triangle, edges meeting, or overlapping coplanar triangles).
    """
    t1 = [tuple(int(x) for x in p) for p in t1]
    t2 = [tuple(int(x) for x in p) for p in t2]
    for p in t1 + t2:
        _check(p)
    shared1 = {i for i, p in enumerate(t1) if p in t2}
    shared2 = {j for j, p in enumerate(t2) if p in t1}
    if len(shared1) > 1:
        # the caller passes non-adjacent triangles, so two vertices coincide
        raise DegenerateConfiguration("triangles share two points")

    d2 = [orient_value(*t1, p) for p in t2]
    if min(d2) > 0 or max(d2) < 0:
        return None
    d1 = [orient_value(*t2, p) for p in t1]
    if min(d1) > 0 or max(d1) < 0:
        return None
    if d2 == [0, 0, 0]:
        if _coplanar_overlap(t1, t2, (shared1, shared2)):
            raise DegenerateConfiguration("coplanar triangles overlap")
        return None

    for j, p in enumerate(t2):
        if j not in shared2 and d2[j] == 0 and point_in_triangle(p, *t1):
            raise DegenerateConfiguration("vertex lies on the other triangle")
    for i, p in enumerate(t1):
        if i not in shared1 and d1[i] == 0 and point_in_triangle(p, *t2):
            raise DegenerateConfiguration("vertex lies on the other triangle")
    for i, k in ((0, 1), (1, 2), (0, 2)):
        for j, m in ((0, 1), (1, 2), (0, 2)):
            if {t1[i], t1[k]} & {t2[j], t2[m]}:
                continue
            if segments_intersect(t1[i], t1[k], t2[j], t2[m]):
                raise DegenerateConfiguration("edges of the two triangles meet")

    c1 = _chord(t1, d1)
    c2 = _chord(t2, d2)
    n1 = _cross(_sub(t1[1], t1[0]), _sub(t1[2], t1[0]))
    n2 = _cross(_sub(t2[1], t2[0]), _sub(t2[2], t2[0]))
    u = _cross(n1, n2)
    k = max(range(3), key=lambda i: abs(u[i]))
    lo1, hi1 = min(c1, key=lambda p: p[k]), max(c1, key=lambda p: p[k])
    lo2, hi2 = min(c2, key=lambda p: p[k]), max(c2, key=lambda p: p[k])
    lo = lo1 if lo1[k] >= lo2[k] else lo2
    hi = hi1 if hi1[k] <= hi2[k] else hi2
    if lo[k] >= hi[k]:
        return None
    diff = tuple(hi[i] - lo[i] for i in range(3))
    sq = sum(x * x for x in diff)
    start, end = sorted((lo, hi))
    return IntersectionSegment(start, end, sq)
