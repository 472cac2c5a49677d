import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyreal.automorphisms import enumerate_automorphisms, make_automorphism
from polyreal.complex import SurfaceComplex
from polyreal.objective import Mode, build_pair_schedule, evaluate
from polyreal.exactgeom import DegenerateConfiguration
from polyreal.symmetry import (
    CATALOG,
    BindingError,
    ConstraintViolation,
    IsometryKind,
    adapt,
    apply,
    bind,
    check_catalog,
    compatible_isometries,
    d2_generator_pairs,
    det,
    matrix_order,
    symmetric_move_set,
    trivial_binding,
)

from conftest import TORUS_7

OCTA = [(a, b, c) for a in (0, 3) for b in (1, 4) for c in (2, 5)]
K = IsometryKind


@pytest.fixture(scope="module")
def octa():
    return SurfaceComplex(OCTA)


def test_catalog_is_sound():
    check_catalog()
    assert len(CATALOG) == 8
    for iso in CATALOG.values():
        for m in iso.matrices:
            assert matrix_order(m) == iso.order
            a = np.array(m)
            assert (a.T @ a == np.eye(3, dtype=int)).all()
    assert CATALOG[K.MIRROR].determinant == -1
    assert CATALOG[K.INVERSION].determinant == -1
    assert CATALOG[K.ROTREF4].determinant == -1
    assert CATALOG[K.ROTREF6].determinant == -1
    assert all(det(m) == 1 for m in CATALOG[K.D2].matrices)


def test_rot3_is_cyclic_shift():
    m = CATALOG[K.ROT3].matrix
    assert apply(m, (2, 0, 1)) == (1, 2, 0)
    assert apply(m, (1, 2, 0)) == (0, 1, 2)


def test_order_five_has_no_isometry(rp2_6):
    for a in enumerate_automorphisms(rp2_6):
        if a.order == 5:
            assert compatible_isometries(a, rp2_6) == []


def test_identity_rejected(rp2_6):
    with pytest.raises(ValueError):
        compatible_isometries(enumerate_automorphisms(rp2_6)[0], rp2_6)


def test_no_nontrivial_automorphism_fixes_a_triangle(small_corpus, klein_9):
    # a pointwise-fixed triangle fixes a flag, so only the identity can do it
    for c in small_corpus + klein_9:
        for a in enumerate_automorphisms(c)[1:]:
            assert not any(set(t) <= a.fixed_vertices for t in c.triangles)


def test_rotation_for_preserving_involution(torus_7):
    flip = make_automorphism(torus_7, [(-v) % 7 for v in range(7)])
    kinds = {i.kind for i in compatible_isometries(flip, torus_7)}
    assert K.ROT2 in kinds
    assert K.MIRROR not in kinds and K.INVERSION not in kinds


def test_orientation_matching_on_orientable(small_corpus):
    for c in small_corpus:
        if not c.orientable:
            continue
        for a in enumerate_automorphisms(c)[1:]:
            for iso in compatible_isometries(a, c):
                assert (iso.determinant > 0) == a.orientation_preserving
                assert iso.order == a.order


def test_point_fixed_isometries_need_one_fixed_vertex(small_corpus):
    for c in small_corpus:
        for a in enumerate_automorphisms(c)[1:]:
            kinds = {i.kind for i in compatible_isometries(a, c)}
            if len(a.fixed_vertices) > 1:
                assert not kinds & {K.INVERSION, K.ROTREF4, K.ROTREF6}


def test_rot3_adaptation(torus_7):
    a = make_automorphism(torus_7, [(2 * v) % 7 for v in range(7)])  # (2 3 5)(4 7 6)
    assert K.ROT3 in {i.kind for i in compatible_isometries(a, torus_7)}
    b = bind(torus_7, a, CATALOG[K.ROT3])
    psi = np.zeros((7, 3), dtype=np.int64)
    psi[1] = (2, 0, 1)
    out = adapt(b, psi, 1)
    assert tuple(out[2]) == (1, 2, 0)
    assert tuple(out[4]) == (0, 1, 2)
    psi[0] = (3, 3, 3)
    assert tuple(adapt(b, psi, 0)[0]) == (3, 3, 3)
    psi[0] = (3, 3, 2)
    with pytest.raises(ConstraintViolation):
        adapt(b, psi, 0)
    with pytest.raises(ConstraintViolation):
        adapt(b, psi, 2)  # not a representative


def test_move_sets(octa):
    auts = {a.cycle_notation(): a for a in enumerate_automorphisms(octa)}
    rot4 = auts["(2 3 5 6)"]
    b4 = bind(octa, rot4, CATALOG[K.ROT4])
    moves = symmetric_move_set(b4)
    by_rep = {}
    for v, vec in moves:
        by_rep.setdefault(v, []).append(vec)
    assert sorted(by_rep[0]) == [(0, 0, -1), (0, 0, 1)]  # on the z axis
    assert sorted(by_rep[3]) == [(0, 0, -1), (0, 0, 1)]
    assert len(by_rep[1]) == 6  # free orbit {2,3,5,6}

    rot2 = auts["(2 5)(3 6)"]
    b2 = bind(octa, rot2, CATALOG[K.ROT2])
    free = [len([m for m in symmetric_move_set(b2) if m[0] == r]) for r in (1, 2)]
    assert free == [6, 6]

    flip = make_automorphism(SurfaceComplex(TORUS_7), [(-v) % 7 for v in range(7)])
    binv = bind(SurfaceComplex(TORUS_7), flip, CATALOG[K.INVERSION])
    assert [m for m in symmetric_move_set(binv) if m[0] == 0] == []
    assert binv.fixed_vertex_constraints == {0: ()}


def test_collapse_detected(octa):
    auts = {a.cycle_notation(): a for a in enumerate_automorphisms(octa)}
    s4 = auts["(1 4)(2 3 5 6)"]
    with pytest.raises(BindingError):
        bind(octa, s4, CATALOG[K.ROT4])  # poles would both sit on the fixed axis
    b = bind(octa, s4, CATALOG[K.ROTREF4])
    assert b.orbit(3).representative == 0
    with pytest.raises(BindingError):
        bind(octa, s4, CATALOG[K.ROT2])  # order mismatch


def test_d2_binding(octa):
    auts = enumerate_automorphisms(octa)
    pairs = d2_generator_pairs(auts, octa)
    assert pairs
    x, y = pairs[0]
    b = bind(octa, (x, y), CATALOG[K.D2])
    assert len(b.group) == 4
    assert all(4 % len(o.members) == 0 for o in b.orbits)
    assert b.descriptor().startswith("D2:")


def _random_symmetric(b, rng, half=20):
    psi = np.zeros((b.vertex_count, 3), dtype=np.int64)
    for orb in b.orbits:
        p = np.zeros(3, dtype=np.int64)
        for vec in orb.basis:
            p += rng.randint(-half, half) * np.array(vec)
        psi[orb.representative] = p
        psi = adapt(b, psi, orb.representative)
    return psi


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_adapted_assignments_are_equivariant(seed):
    rng = random.Random(seed)
    c = SurfaceComplex(OCTA)
    auts = enumerate_automorphisms(c)
    bindings = []
    for a in auts[1:]:
        for iso in compatible_isometries(a, c):
            try:
                bindings.append(bind(c, a, iso))
            except BindingError:
                pass
    assert bindings
    b = rng.choice(bindings)
    psi = _random_symmetric(b, rng)
    assert b.holds(psi)
    # the objective is invariant: a pair and its image have equal lengths
    sched = build_pair_schedule(c, Mode.EMBED)
    try:
        val = dict(evaluate(sched, psi).contributing_pairs)
    except DegenerateConfiguration:
        return
    for perm, _ in b.group:
        for (i, j), x in val.items():
            ti = c.triangles.index(tuple(sorted(perm[v] for v in c.triangles[i])))
            tj = c.triangles.index(tuple(sorted(perm[v] for v in c.triangles[j])))
            assert val[tuple(sorted((ti, tj)))] == x


def test_kernel_arrays_layout(octa):
    auts = {a.cycle_notation(): a for a in enumerate_automorphisms(octa)}
    b = bind(octa, auts["(2 3 5 6)"], CATALOG[K.ROT4])
    arr = b.kernel_arrays()
    assert arr["rep_ptr"][-1] == 6 and sorted(arr["orb_vert"]) == list(range(6))
    for r in range(len(arr["rep_ptr"]) - 1):
        first = arr["rep_ptr"][r]
        assert (arr["orb_mat"][first] == np.eye(3, dtype=int).ravel()).all()
    assert arr["group_perm"].shape == (4, 6)
    assert len(arr["move_rep"]) == len(symmetric_move_set(b))


def test_trivial_binding():
    b = trivial_binding(5)
    assert b.is_trivial and b.descriptor() == "none"
    assert len(symmetric_move_set(b)) == 30
    assert b.holds(np.arange(15).reshape(5, 3))


def test_all_fixture_bindings_bind_or_reject_cleanly(small_corpus):
    for c in small_corpus[:6]:
        for a in enumerate_automorphisms(c)[1:]:
            for iso in compatible_isometries(a, c):
                try:
                    b = bind(c, a, iso)
                except BindingError:
                    continue
                assert b.holds(_random_symmetric(b, random.Random(1)))
