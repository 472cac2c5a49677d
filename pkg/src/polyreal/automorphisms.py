"""Automorphism groups of triangulated surfaces.

An automorphism is fixed by where it sends one flag, so the group is found
by sending a base triangle to every triangle in all six vertex orders and
propagating the map across shared edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .complex import SurfaceComplex

__all__ = [
    "Automorphism",
    "FixedElements",
    "make_automorphism",
    "enumerate_automorphisms",
    "brute_force_automorphisms",
    "vertex_orbits",
    "fixed_element_report",
    "generated_group",
]


class FixedElements(NamedTuple):
    vertices: frozenset
    edges: frozenset
    triangles: frozenset
    orientation_preserving: bool | None


@dataclass(frozen=True)
class Automorphism:
    """Vertex permutation preserving the triangle set (0-based)."""

    image: tuple[int, ...]
    order: int
    fixed_vertices: frozenset
    fixed_edges: frozenset
    fixed_triangles: frozenset
    # None when the complex is non-orientable
    orientation_preserving: bool | None

    def __call__(self, v: int) -> int:
        return self.image[v]

    @property
    def is_identity(self) -> bool:
        return all(i == v for v, i in enumerate(self.image))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for v in range(len(self.image)):
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self.image[v]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self.image[w]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        """1-based cycle string, e.g. ``(1 2 3)(4 5 6)``; fixed points omitted."""
        parts = [c for c in self.cycles() if len(c) > 1]
        if not parts:
            return "()"
        return "".join("(" + " ".join(str(v + 1) for v in c) + ")" for c in parts)


def _perm_order(image: Sequence[int]) -> int:
    order = 1
    seen = set()
    for v in range(len(image)):
        if v in seen:
            continue
        length = 0
        w = v
        while w not in seen:
            seen.add(w)
            w = image[w]
            length += 1
        order = math.lcm(order, length)
    return order


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p`` after ``q``."""
    return tuple(p[q[v]] for v in range(len(q)))


def make_automorphism(c: SurfaceComplex, image: Sequence[int]) -> Automorphism:
    image = tuple(image)
    fx = fixed_element_report(image, c)
    return Automorphism(
        image=image,
        order=_perm_order(image),
        fixed_vertices=fx.vertices,
        fixed_edges=fx.edges,
        fixed_triangles=fx.triangles,
        orientation_preserving=fx.orientation_preserving,
    )


def _extend(c: SurfaceComplex, base: int, target: Sequence[int]) -> list[int] | None:
    """Propagate ``triangles[base] -> target`` (ordered) over edge adjacencies."""
    n = c.vertex_count
    image = [-1] * n
    for u, w in zip(c.triangles[base], target):
        image[u] = w
    stack = [base]
    visited = {base}
    while stack:
        i = stack.pop()
        tri = c.triangles[i]
        for k in range(3):
            u, w = tri[k], tri[(k + 1) % 3]
            e = (u, w) if u < w else (w, u)
            j = next(t for t in c.edge_index[e] if t != i)
            x = next(v for v in c.triangles[j] if v != u and v != w)
            fe = tuple(sorted((image[u], image[w])))
            ts = c.edge_index.get(fe)
            if ts is None:
                return None
            mapped_i = tuple(sorted(image[v] for v in tri))
            others = [t for t in ts if c.triangles[t] != mapped_i]
            if len(others) != 1:
                return None
            y = next(v for v in c.triangles[others[0]] if v not in fe)
            if image[x] == -1:
                image[x] = y
            elif image[x] != y:
                return None
            if j not in visited:
                visited.add(j)
                stack.append(j)
    if -1 in image or len(set(image)) != n:
        return None
    for t in c.triangles:
        if not c.has_triangle(image[v] for v in t):
            return None
    return image


def enumerate_automorphisms(c: SurfaceComplex) -> list[Automorphism]:
    """The full automorphism group, identity first, then by image tuple."""
    base = 0
    found = set()
    for target in c.triangles:
        a, b, t = target
        for ordered in ((a, b, t), (a, t, b), (b, a, t), (b, t, a), (t, a, b), (t, b, a)):
            image = _extend(c, base, ordered)
            if image is not None:
                found.add(tuple(image))
    identity = tuple(range(c.vertex_count))
    ordered_images = sorted(found, key=lambda p: (p != identity, p))
    return [make_automorphism(c, p) for p in ordered_images]


def brute_force_automorphisms(c: SurfaceComplex) -> list[tuple[int, ...]]:
    """Vertex permutations preserving all triangles, by backtracking.

    Independent of the flag propagation; a partial assignment is abandoned
    as soon as some fully assigned triangle maps to a non-triangle.
    """
    n = c.vertex_count
    closing = [[] for _ in range(n)]
    for t in c.triangles:
        closing[max(t)].append(t)
    image = [-1] * n
    used = [False] * n
    out = []

    def assign(v: int) -> None:
        if v == n:
            out.append(tuple(image))
            return
        for w in range(n):
            if used[w]:
                continue
            image[v] = w
            if all(c.has_triangle(image[x] for x in t) for t in closing[v]):
                used[w] = True
                assign(v + 1)
                used[w] = False
        image[v] = -1

    assign(0)
    return sorted(out)


def generated_group(gens: Iterable[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    identity = tuple(range(n))
    gens = [tuple(g) for g in gens]
    group = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in group:
                    group.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(group)


def vertex_orbits(a, c: SurfaceComplex) -> list[frozenset]:
    """Orbits of the group generated by ``a`` (an automorphism or a list of them)."""
    gens = a if isinstance(a, (list, tuple)) and a and not isinstance(a[0], int) else [a]
    images = [g.image if isinstance(g, Automorphism) else tuple(g) for g in gens]
    n = c.vertex_count
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for img in images:
        for v in range(n):
            ra, rb = find(v), find(img[v])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set] = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(groups[r]) for r in sorted(groups)]


def fixed_element_report(a, c: SurfaceComplex) -> FixedElements:
    image = a.image if isinstance(a, Automorphism) else tuple(a)
    fixed_v = frozenset(v for v in range(c.vertex_count) if image[v] == v)
    fixed_e = frozenset(
        e for e in c.edges if tuple(sorted((image[e[0]], image[e[1]]))) == e
    )
    fixed_t = frozenset(
        i for i, t in enumerate(c.triangles) if tuple(sorted(image[v] for v in t)) == t
    )
    preserving = None
    if c.orientable:
        x, y, z = c.orientation[0]
        mapped = (image[x], image[y], image[z])
        j = c.triangles.index(tuple(sorted(mapped)))
        o = c.orientation[j]
        preserving = mapped in (o, (o[1], o[2], o[0]), (o[2], o[0], o[1]))
    return FixedElements(fixed_v, fixed_e, fixed_t, preserving)
