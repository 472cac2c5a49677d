"""Abstract triangulations of closed surfaces.

Triangulations are read in the list-of-triples notation used by the
Manifold Page corpus files, e.g. ``[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]``.
Labels are 1-based on input and output and 0-based internally.
"""

from __future__ import annotations

import ast
import math
from collections import defaultdict, deque
from typing import Iterable, Sequence

__all__ = [
    "TriangulationError",
    "SurfaceComplex",
    "parse_triangulation",
    "format_triangulation",
    "classify",
    "heawood_minimum",
]


class TriangulationError(ValueError):
    """Raised for input that is not a triangulated closed connected surface."""


class SurfaceComplex:
    """A validated triangulation of a closed connected surface.

    Instances are treated as immutable once constructed. All indices are
    0-based; the text corpus format uses 1-based labels.

    Attributes
    ----------
    vertex_count : int
    triangles : tuple of (int, int, int)
        Sorted within each triple and lexicographically across the list.
    edges : tuple of (int, int)
    edge_index : dict
        Edge -> the two incident triangle indices.
    vertex_star : dict
        Vertex -> incident triangle indices in cyclic order around the vertex.
    f_vector, euler_characteristic, orientable, genus
    orientation : tuple or None
        A coherent orientation (one ordered triple per triangle) when orientable.
    """

    def __init__(self, triangles: Iterable[Sequence[int]], vertex_count: int | None = None):
        tris = []
        for t in triangles:
            if len(t) != 3:
                raise TriangulationError(f"not a triple: {list(t)!r}")
            if len(set(t)) != 3:
                raise TriangulationError(f"degenerate triangle (repeated vertex): {list(t)!r}")
            tris.append(tuple(sorted(int(v) for v in t)))
        if not tris:
            raise TriangulationError("empty triangulation")
        if len(set(tris)) != len(tris):
            dup = next(t for t in tris if tris.count(t) > 1)
            raise TriangulationError(f"duplicate triangle: {[v + 1 for v in dup]!r}")
        used = sorted({v for t in tris for v in t})
        n = vertex_count if vertex_count is not None else len(used)
        if used != list(range(n)):
            raise TriangulationError("vertex labels are not contiguous")

        self.vertex_count = n
        self.triangles = tuple(sorted(tris))

        edge_tris: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, (a, b, c) in enumerate(self.triangles):
            for e in ((a, b), (a, c), (b, c)):
                edge_tris[e].append(i)
        for e, ts in edge_tris.items():
            if len(ts) != 2:
                raise TriangulationError(
                    f"edge {[v + 1 for v in e]} lies in {len(ts)} triangles; not a closed surface"
                )
        self.edges = tuple(sorted(edge_tris))
        self.edge_index = {e: tuple(ts) for e, ts in edge_tris.items()}

        self.vertex_star = {v: self._cyclic_star(v) for v in range(n)}
        self._check_connected()

        f0, f1, f2 = n, len(self.edges), len(self.triangles)
        self.f_vector = (f0, f1, f2)
        self.euler_characteristic = f0 - f1 + f2
        self.orientation = _orient_triangles(self.triangles, self.edge_index)
        self.orientable = self.orientation is not None
        chi = self.euler_characteristic
        self.genus = (2 - chi) // 2 if self.orientable else 2 - chi

        self._neighbors = [set() for _ in range(n)]
        for a, b in self.edges:
            self._neighbors[a].add(b)
            self._neighbors[b].add(a)

    def _cyclic_star(self, v: int) -> tuple[int, ...]:
        star = [i for i, t in enumerate(self.triangles) if v in t]
        # link edges opposite v, walked as a cycle
        opposite = {i: tuple(u for u in self.triangles[i] if u != v) for i in star}
        by_vertex: dict[int, list[int]] = defaultdict(list)
        for i, (a, b) in opposite.items():
            by_vertex[a].append(i)
            by_vertex[b].append(i)
        order = [star[0]]
        prev_vertex = opposite[star[0]][0]
        current = star[0]
        while True:
            a, b = opposite[current]
            nxt_vertex = b if a == prev_vertex else a
            candidates = [i for i in by_vertex[nxt_vertex] if i != current]
            nxt = candidates[0]
            if nxt == order[0]:
                break
            order.append(nxt)
            prev_vertex, current = nxt_vertex, nxt
        if len(order) != len(star):
            raise TriangulationError(
                f"link of vertex {v + 1} is not a single cycle; not a closed surface"
            )
        return tuple(order)

    def _check_connected(self) -> None:
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            a, b, c = self.triangles[i]
            for e in ((a, b), (a, c), (b, c)):
                for j in self.edge_index[e]:
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
        if len(seen) != len(self.triangles):
            raise TriangulationError("triangulation is disconnected")

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self._neighbors[v])

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def has_triangle(self, t: Iterable[int]) -> bool:
        return tuple(sorted(t)) in self._triangle_set

    @property
    def _triangle_set(self) -> frozenset:
        try:
            return self.__dict__["_tset"]
        except KeyError:
            s = frozenset(self.triangles)
            self.__dict__["_tset"] = s
            return s

    def adjacent(self, i: int, j: int) -> bool:
        """True if triangles ``i`` and ``j`` share an edge."""
        return len(set(self.triangles[i]) & set(self.triangles[j])) == 2

    @property
    def surface_name(self) -> str:
        return f"M{self.genus}" if self.orientable else f"N{self.genus}"

    def relabeled(self, perm: Sequence[int]) -> "SurfaceComplex":
        """Complex obtained by renaming vertex ``v`` to ``perm[v]``."""
        return SurfaceComplex([[perm[v] for v in t] for t in self.triangles])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.triangles == other.triangles

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.triangles))

    def __repr__(self) -> str:
        return (
            f"SurfaceComplex({self.surface_name}, f={self.f_vector}, "
            f"chi={self.euler_characteristic})"
        )


def _orient_triangles(triangles, edge_index):
    """Propagate an orientation from triangle 0; ``None`` if inconsistent."""
    oriented: dict[int, tuple[int, int, int]] = {0: triangles[0]}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        a, b, c = oriented[i]
        for u, w in ((a, b), (b, c), (c, a)):
            j = next(k for k in edge_index[tuple(sorted((u, w)))] if k != i)
            x = next(v for v in triangles[j] if v not in (u, w))
            # coherent neighbor traverses the shared edge as w -> u
            want = (w, u, x)
            if j in oriented:
                if not _same_cycle(oriented[j], want):
                    return None
            else:
                oriented[j] = want
                queue.append(j)
    return tuple(oriented[i] for i in range(len(triangles)))


def _same_cycle(s, t) -> bool:
    return tuple(t) in (tuple(s), (s[1], s[2], s[0]), (s[2], s[0], s[1]))


def parse_triangulation(text: str) -> SurfaceComplex:
    """Parse ``[[1,2,3],...]`` with 1-based contiguous labels."""
    try:
        data = ast.literal_eval(text.strip())
    except (SyntaxError, ValueError) as exc:
        raise TriangulationError(f"syntax error: {exc}") from None
    if not isinstance(data, (list, tuple)):
        raise TriangulationError("syntax error: expected a list of triples")
    tris = []
    for t in data:
        if not isinstance(t, (list, tuple)) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in t
        ):
            raise TriangulationError(f"syntax error: bad triple {t!r}")
        tris.append([v - 1 for v in t])
    if any(v < 0 for t in tris for v in t):
        raise TriangulationError("vertex labels are not contiguous from 1")
    return SurfaceComplex(tris)


def format_triangulation(c: SurfaceComplex) -> str:
    return "[" + ",".join(f"[{a + 1},{b + 1},{c_ + 1}]" for a, b, c_ in c.triangles) + "]"


def classify(c: SurfaceComplex, seed_triangle: int = 0) -> tuple[bool, int]:
    """Return ``(orientable, genus)``.

    Orientability is decided by propagating an orientation outward from
    ``seed_triangle``; any seed gives the same verdict.
    """
    if seed_triangle:
        n = len(c.triangles)
        order = [seed_triangle] + [i for i in range(n) if i != seed_triangle]
        tris = [c.triangles[i] for i in order]
        index = {e: tuple(order.index(i) for i in ts) for e, ts in c.edge_index.items()}
        orientable = _orient_triangles(tris, index) is not None
    else:
        orientable = c.orientable
    chi = c.euler_characteristic
    return orientable, ((2 - chi) // 2 if orientable else 2 - chi)


def heawood_minimum(chi: int) -> int:
    """Least n with n >= (7 + sqrt(49 - 24 chi)) / 2, computed exactly."""
    if chi > 2:
        raise ValueError("Euler characteristic of a closed surface is at most 2")
    disc = 49 - 24 * chi
    n = (7 + math.isqrt(disc)) // 2
    while 2 * n - 7 < 0 or (2 * n - 7) ** 2 < disc:
        n += 1
    return n
