"""Lattice-compatible isometries and symmetry bindings.

A binding couples a group of automorphisms with a group of integer
orthogonal matrices so that ``psi(g(v)) == M_g @ psi(v)`` for every group
element. Each vertex orbit is driven by its lowest-labelled vertex (the
representative); the rest of the orbit follows by :func:`adapt`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .automorphisms import Automorphism, compose
from .complex import SurfaceComplex

__all__ = [
    "IsometryKind",
    "LatticeIsometry",
    "CATALOG",
    "BindingError",
    "ConstraintViolation",
    "SymmetryBinding",
    "compatible_isometries",
    "d2_generator_pairs",
    "bind",
    "trivial_binding",
    "adapt",
    "symmetric_move_set",
    "check_catalog",
]

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

IDENTITY: Matrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


class IsometryKind(enum.Enum):
    MIRROR = "MIRROR"
    ROT2 = "ROT2"
    ROT3 = "ROT3"
    ROT4 = "ROT4"
    INVERSION = "INVERSION"
    ROTREF4 = "ROTREF4"
    ROTREF6 = "ROTREF6"
    D2 = "D2"


class BindingError(ValueError):
    """The automorphism/isometry pair cannot be placed injectively."""


class ConstraintViolation(ValueError):
    """A vertex was moved off the fixed set its stabilizer requires."""


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def apply(m: Matrix, p) -> tuple[int, int, int]:
    return tuple(m[i][0] * p[0] + m[i][1] * p[1] + m[i][2] * p[2] for i in range(3))


def det(m: Matrix) -> int:
    return int(round(np.linalg.det(np.array(m))))


def matrix_order(m: Matrix) -> int:
    p, k = m, 1
    while p != IDENTITY:
        p, k = matmul(p, m), k + 1
    return k


@dataclass(frozen=True)
class LatticeIsometry:
    kind: IsometryKind
    matrices: tuple[Matrix, ...]
    order: int
    fixed_set: str

    @property
    def matrix(self) -> Matrix:
        return self.matrices[0]

    @property
    def determinant(self) -> int:
        return det(self.matrices[0])

    @property
    def is_rotation(self) -> bool:
        return self.kind in (IsometryKind.ROT2, IsometryKind.ROT3, IsometryKind.ROT4)


CATALOG: dict[IsometryKind, LatticeIsometry] = {
    iso.kind: iso
    for iso in (
        LatticeIsometry(IsometryKind.MIRROR, (((1, 0, 0), (0, 1, 0), (0, 0, -1)),), 2, "plane z=0"),
        LatticeIsometry(IsometryKind.ROT2, (((-1, 0, 0), (0, -1, 0), (0, 0, 1)),), 2, "axis z"),
        LatticeIsometry(IsometryKind.ROT3, (((0, 0, 1), (1, 0, 0), (0, 1, 0)),), 3, "axis (1,1,1)"),
        LatticeIsometry(IsometryKind.ROT4, (((0, -1, 0), (1, 0, 0), (0, 0, 1)),), 4, "axis z"),
        LatticeIsometry(IsometryKind.INVERSION, (((-1, 0, 0), (0, -1, 0), (0, 0, -1)),), 2, "origin"),
        LatticeIsometry(IsometryKind.ROTREF4, (((0, 1, 0), (-1, 0, 0), (0, 0, -1)),), 4, "origin"),
        LatticeIsometry(IsometryKind.ROTREF6, (((0, 0, -1), (-1, 0, 0), (0, -1, 0)),), 6, "origin"),
        LatticeIsometry(
            IsometryKind.D2,
            (((1, 0, 0), (0, -1, 0), (0, 0, -1)), ((-1, 0, 0), (0, 1, 0), (0, 0, -1))),
            2,
            "axes x, y, z",
        ),
    )
}

_POINT_FIXED = (IsometryKind.INVERSION, IsometryKind.ROTREF4, IsometryKind.ROTREF6)


def check_catalog() -> None:
    """Assert every catalog matrix is an integer orthogonal matrix of the stated order."""
    for iso in CATALOG.values():
        for m in iso.matrices:
            a = np.array(m)
            assert set(a.ravel()) <= {-1, 0, 1}
            assert (a.T @ a == np.eye(3, dtype=int)).all(), iso.kind
            assert abs(det(m)) == 1
            assert matrix_order(m) == iso.order, iso.kind


def compatible_isometries(
    a: Automorphism, c: SurfaceComplex, forbid_even_rotations_n1: bool = False
) -> list[LatticeIsometry]:
    """Catalog isometries (D2 excluded) that could realize ``a``.

    Only necessary conditions are checked: matching order, no triangle fixed
    pointwise, fixed vertices placeable on the fixed set, and matching
    orientation behaviour on orientable complexes.
    """
    if a.is_identity:
        raise ValueError("identity has no geometric realization to test")
    fixed = a.fixed_vertices
    if any(set(t) <= fixed for t in c.triangles):
        return []
    out = []
    for iso in CATALOG.values():
        if iso.kind is IsometryKind.D2 or iso.order != a.order:
            continue
        if iso.is_rotation and _has_fixed_3clique(fixed, c):
            # three pairwise joined vertices on one line put one inside an edge
            continue
        if iso.kind in _POINT_FIXED and len(fixed) > 1:
            continue
        if c.orientable and (iso.determinant > 0) != a.orientation_preserving:
            continue
        if (
            forbid_even_rotations_n1
            and not c.orientable and c.genus == 1
            and iso.kind in (IsometryKind.ROT2, IsometryKind.ROT4)
        ):
            continue
        out.append(iso)
    return out


def _has_fixed_3clique(fixed, c: SurfaceComplex) -> bool:
    if len(fixed) < 3:
        return False
    return any(
        y in c.neighbors(x) and z in c.neighbors(x) and z in c.neighbors(y)
        for x, y, z in itertools.combinations(sorted(fixed), 3)
    )


def d2_generator_pairs(
    auts: list[Automorphism], c: SurfaceComplex
) -> list[tuple[Automorphism, Automorphism]]:
    """One generator pair per Klein four-subgroup whose involutions could all be 2-fold rotations."""
    rot2 = CATALOG[IsometryKind.ROT2]
    by_image = {x.image: x for x in auts}
    involutions = [x for x in auts if x.order == 2]
    ok = {x.image: rot2 in compatible_isometries(x, c) for x in involutions}
    seen = set()
    out = []
    for x, y in itertools.combinations(involutions, 2):
        if compose(x.image, y.image) != compose(y.image, x.image):
            continue
        z = by_image[compose(x.image, y.image)]
        key = frozenset((x.image, y.image, z.image))
        if key in seen:
            continue
        seen.add(key)
        if ok[x.image] and ok[y.image] and ok[z.image]:
            out.append((x, y))
    return out


@dataclass(frozen=True)
class OrbitSpec:
    representative: int
    members: tuple[tuple[int, Matrix], ...]  # (vertex, matrix taking the rep's position to it)
    basis: tuple[tuple[int, int, int], ...]  # lattice directions spanning the rep's fixed set


class SymmetryBinding:
    """Automorphism group bound to a matrix group, with orbit bookkeeping."""

    def __init__(self, generators, isometry: LatticeIsometry | None, group, orbits):
        self.generators = tuple(generators)
        self.isometry = isometry
        self.group = tuple(group)  # (perm, matrix) pairs
        self.orbits = tuple(orbits)
        self.vertex_count = len(group[0][0])
        self._orbit_of = {}
        for k, orb in enumerate(self.orbits):
            for w, _ in orb.members:
                self._orbit_of[w] = k

    @property
    def is_trivial(self) -> bool:
        return self.isometry is None

    @property
    def orbit_representatives(self) -> tuple[int, ...]:
        return tuple(o.representative for o in self.orbits)

    @property
    def fixed_vertex_constraints(self) -> dict[int, tuple]:
        """Fixed vertex -> basis of the subspace it must stay in."""
        return {
            o.representative: o.basis
            for o in self.orbits
            if len(o.members) == 1 and len(o.basis) < 3
        }

    def orbit(self, v: int) -> OrbitSpec:
        return self.orbits[self._orbit_of[v]]

    def descriptor(self) -> str:
        if self.isometry is None:
            return "none"
        gens = ",".join(g.cycle_notation() for g in self.generators)
        return f"{self.isometry.kind.value}:{gens}"

    def holds(self, coords) -> bool:
        """``psi(g(v)) == M_g psi(v)`` for all group elements and vertices."""
        pts = [tuple(int(x) for x in p) for p in getattr(coords, "coords", coords)]
        return all(
            pts[perm[v]] == apply(m, pts[v])
            for perm, m in self.group
            for v in range(self.vertex_count)
        )

    def kernel_arrays(self) -> dict[str, np.ndarray]:
        rep_ptr, orb_vert, orb_mat = [0], [], []
        basis_ptr, basis_vec = [0], []
        move_rep, move_vec = [], []
        for r, orb in enumerate(self.orbits):
            for w, m in orb.members:
                orb_vert.append(w)
                orb_mat.append(np.array(m).ravel())
            rep_ptr.append(len(orb_vert))
            basis_vec.extend(orb.basis)
            basis_ptr.append(len(basis_vec))
            for b in orb.basis:
                for s in (1, -1):
                    move_rep.append(r)
                    move_vec.append(tuple(s * x for x in b))
        gp = np.array([p for p, _ in self.group], dtype=np.int32)
        gm = np.array([np.array(m).ravel() for _, m in self.group], dtype=np.int64)
        return {
            "rep_ptr": np.array(rep_ptr, dtype=np.int32),
            "orb_vert": np.array(orb_vert, dtype=np.int32),
            "orb_mat": np.array(orb_mat, dtype=np.int64).reshape(-1, 9),
            "basis_ptr": np.array(basis_ptr, dtype=np.int32),
            "basis_vec": np.array(basis_vec, dtype=np.int64).reshape(-1, 3),
            "move_rep": np.array(move_rep, dtype=np.int32),
            "move_vec": np.array(move_vec, dtype=np.int64).reshape(-1, 3),
            "group_perm": gp.reshape(len(self.group), self.vertex_count),
            "group_mat": gm.reshape(-1, 9),
        }


_DIRECTIONS = [
    d for d in itertools.product((1, 0, -1), repeat=3) if d != (0, 0, 0)
]
_UNIT = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def _fixed_basis(mats) -> tuple[tuple[int, int, int], ...]:
    """Lattice directions spanning the common fixed subspace of ``mats``."""
    fixed = [d for d in _DIRECTIONS if all(apply(m, d) == d for m in mats)]
    if not fixed:
        return ()
    dim = int(np.linalg.matrix_rank(np.array(fixed)))
    units = [u for u in _UNIT if u in fixed]
    if len(units) == dim:
        return tuple(units)
    basis: list = []
    for d in fixed:
        if d[next(i for i in range(3) if d[i])] < 0:
            continue
        if np.linalg.matrix_rank(np.array(basis + [d])) > len(basis):
            basis.append(d)
        if len(basis) == dim:
            break
    return tuple(basis)


def _close_group(gens: list[tuple[tuple[int, ...], Matrix]], n: int):
    identity = (tuple(range(n)), IDENTITY)
    elements = {identity[0]: identity[1]}
    frontier = [identity]
    while frontier:
        nxt = []
        for p, m in frontier:
            for gp, gm in gens:
                q, qm = compose(gp, p), matmul(gm, m)
                if q in elements:
                    if elements[q] != qm:
                        raise BindingError("automorphism group and matrix group are not isomorphic")
                    continue
                elements[q] = qm
                nxt.append((q, qm))
        frontier = nxt
    if len(set(elements.values())) != len(elements):
        raise BindingError("automorphism group and matrix group are not isomorphic")
    return sorted(elements.items())


def trivial_binding(n: int) -> SymmetryBinding:
    orbits = [OrbitSpec(v, ((v, IDENTITY),), tuple(_UNIT)) for v in range(n)]
    return SymmetryBinding((), None, [(tuple(range(n)), IDENTITY)], orbits)


def bind(
    c: SurfaceComplex, generators, isometry: LatticeIsometry
) -> SymmetryBinding:
    """Bind automorphism generator(s) to ``isometry``.

    ``generators`` is one automorphism, or for D2 a pair of commuting
    involutions. Raises :class:`BindingError` if the pairing is inconsistent
    or forces two vertices onto the same point.
    """
    if isinstance(generators, Automorphism):
        generators = (generators,)
    generators = tuple(generators)
    if len(generators) != len(isometry.matrices):
        raise BindingError("generator count does not match the isometry")
    for g, m in zip(generators, isometry.matrices):
        if g.order != matrix_order(m):
            raise BindingError("automorphism order differs from isometry order")
    n = c.vertex_count
    group = _close_group([(g.image, m) for g, m in zip(generators, isometry.matrices)], n)

    orbits = []
    assigned = set()
    pinned = 0
    for r in range(n):
        if r in assigned:
            continue
        members: dict[int, Matrix] = {}
        stab = []
        for perm, m in group:
            w = perm[r]
            if w == r:
                stab.append(m)
            members.setdefault(w, m)
        basis = _fixed_basis(stab)
        if len(members) > 1:
            moving = [m for perm, m in group if perm[r] != r]
            if not basis or any(all(apply(m, b) == b for b in basis) for m in moving):
                raise BindingError(
                    f"orbit of vertex {r + 1} would collapse onto the fixed set"
                )
        if not basis:
            pinned += 1
            if pinned > 1:
                raise BindingError("two vertices forced to the origin")
        assigned.update(members)
        orbits.append(OrbitSpec(r, tuple(sorted(members.items())), basis))
    return SymmetryBinding(generators, isometry, group, orbits)


def _in_span(p, basis) -> bool:
    if not basis:
        return tuple(p) == (0, 0, 0)
    if len(basis) == 3:
        return True
    a = np.array(basis, dtype=float)
    return np.linalg.matrix_rank(np.vstack([a, np.array(p, dtype=float)])) == len(basis)


def adapt(binding: SymmetryBinding, psi, moved: int) -> np.ndarray:
    """Propagate the position of ``moved`` (a representative) through its orbit."""
    coords = np.array(getattr(psi, "coords", psi), dtype=np.int64, copy=True)
    orb = binding.orbit(moved)
    if orb.representative != moved:
        raise ConstraintViolation(f"vertex {moved + 1} is not an orbit representative")
    p = tuple(int(x) for x in coords[moved])
    if not _in_span(p, orb.basis):
        raise ConstraintViolation(f"vertex {moved + 1} left its fixed set")
    for w, m in orb.members:
        coords[w] = apply(m, p)
    return coords


def symmetric_move_set(binding: SymmetryBinding, psi=None) -> list[tuple[int, tuple[int, int, int]]]:
    """Generator moves: (representative, step vector) pairs."""
    out = []
    for orb in binding.orbits:
        for b in orb.basis:
            for s in (1, -1):
                out.append((orb.representative, tuple(s * x for x in b)))
    return out
