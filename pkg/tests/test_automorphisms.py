import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polyreal.automorphisms import (
    brute_force_automorphisms,
    compose,
    enumerate_automorphisms,
    fixed_element_report,
    generated_group,
    make_automorphism,
    vertex_orbits,
)
from polyreal.complex import SurfaceComplex

from conftest import TORUS_7

# group orders of the frozen fixtures, in file order
SMALL_ORDERS = [24, 60, 42, 2, 4, 6, 3, 4, 2, 2, 4, 2, 2]
RP2_9_ORDERS = [1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 1,
                1, 1, 2, 1, 1, 1, 1, 1, 2, 1, 1, 1, 4, 1, 1, 1, 2, 1, 2, 2]
KLEIN_9_ORDERS = [2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 2,
                  1, 1, 1, 1, 1, 6, 1, 1, 2, 1, 1, 1, 1, 2, 1, 1, 1, 1, 2, 1]


def test_tetrahedron_is_s4(tetra):
    auts = enumerate_automorphisms(tetra)
    assert len(auts) == 24
    assert sorted(a.image for a in auts) == sorted(itertools.permutations(range(4)))


def test_rp2_6_has_60(rp2_6):
    auts = enumerate_automorphisms(rp2_6)
    assert len(auts) == 60
    assert sorted(a.image for a in auts) == brute_force_automorphisms(rp2_6)
    # A5: element orders 1, 2, 3, 5 with counts 1, 15, 20, 24
    counts = {k: sum(a.order == k for a in auts) for k in (1, 2, 3, 5)}
    assert counts == {1: 1, 2: 15, 3: 20, 5: 24}


def test_torus_7_group(torus_7):
    auts = enumerate_automorphisms(torus_7)
    assert len(auts) == 42
    assert all(a.orientation_preserving is not None for a in auts)


def test_fixture_orders(small_corpus, rp2_9, klein_9):
    assert [len(enumerate_automorphisms(c)) for c in small_corpus] == SMALL_ORDERS
    assert [len(enumerate_automorphisms(c)) for c in rp2_9] == RP2_9_ORDERS
    assert [len(enumerate_automorphisms(c)) for c in klein_9] == KLEIN_9_ORDERS


def test_trivial_group_is_identity_only(rp2_9):
    c = rp2_9[0]
    auts = enumerate_automorphisms(c)
    assert len(auts) == 1 and auts[0].is_identity
    assert auts[0].cycle_notation() == "()"


def test_flags_match_brute_force(small_corpus, klein_9):
    for c in small_corpus + klein_9[:10]:
        assert sorted(a.image for a in enumerate_automorphisms(c)) == brute_force_automorphisms(c)


def test_identity_first_and_closed(small_corpus):
    for c in small_corpus:
        auts = enumerate_automorphisms(c)
        assert auts[0].is_identity
        images = {a.image for a in auts}
        for a, b in itertools.product(auts, repeat=2):
            assert compose(a.image, b.image) in images


def test_each_image_preserves_triangles(klein_9):
    for c in klein_9:
        for a in enumerate_automorphisms(c):
            assert {tuple(sorted(a(v) for v in t)) for t in c.triangles} == set(c.triangles)
            p = a.image
            for _ in range(a.order - 1):
                assert p != tuple(range(c.vertex_count))
                p = compose(a.image, p)
            assert p == tuple(range(c.vertex_count))


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(7)))
def test_order_invariant_under_relabelling(perm):
    c = SurfaceComplex(TORUS_7)
    assert len(enumerate_automorphisms(c.relabeled(perm))) == 42


def test_orbits():
    c = SurfaceComplex(TORUS_7)
    ident = make_automorphism(c, range(7))
    assert vertex_orbits(ident, c) == [frozenset({v}) for v in range(7)]
    shift = make_automorphism(c, [(v + 1) % 7 for v in range(7)])
    assert vertex_orbits(shift, c) == [frozenset(range(7))]
    assert shift.order == 7
    assert shift.cycle_notation() == "(1 2 3 4 5 6 7)"


def test_orbits_of_three_cycle_shape():
    # (1 2 3)(4 5 6) on 9 points, checked on the permutation level
    image = (1, 2, 0, 4, 5, 3, 6, 7, 8)

    class _C:
        vertex_count = 9

    assert vertex_orbits(image, _C) == [
        frozenset({0, 1, 2}), frozenset({3, 4, 5}), frozenset({6}), frozenset({7}), frozenset({8})
    ]


def test_d2_orbits_divide_four(klein_9, small_corpus):
    for c in small_corpus:
        auts = enumerate_automorphisms(c)
        invs = [a for a in auts if a.order == 2]
        for x, y in itertools.combinations(invs, 2):
            if compose(x.image, y.image) == compose(y.image, x.image):
                assert len(generated_group([x.image, y.image], c.vertex_count)) == 4
                assert all(4 % len(o) == 0 for o in vertex_orbits([x, y], c))


def test_fixed_elements_identity(torus_7):
    fx = fixed_element_report(tuple(range(7)), torus_7)
    assert fx.vertices == frozenset(range(7))
    assert len(fx.edges) == 21 and len(fx.triangles) == 14
    assert fx.orientation_preserving is True


def test_fixed_edge_setwise_not_pointwise(torus_7):
    # v -> -v mod 7 swaps 1 and 6, which are joined by an edge
    a = make_automorphism(torus_7, [(-v) % 7 for v in range(7)])
    assert a.fixed_vertices == frozenset({0})
    assert (1, 6) in a.fixed_edges
    assert not {1, 6} <= a.fixed_vertices


def test_orientation_behaviour(torus_7, tetra):
    # the affine maps v -> a*v + b of the 7-vertex torus all keep orientation
    assert all(a.orientation_preserving for a in enumerate_automorphisms(torus_7))
    swap = make_automorphism(tetra, [1, 0, 2, 3])
    assert swap.orientation_preserving is False
    cyc = make_automorphism(tetra, [1, 2, 0, 3])
    assert cyc.orientation_preserving is True
    auts = enumerate_automorphisms(tetra)
    assert sum(a.orientation_preserving for a in auts) == 12


def test_non_orientable_has_no_orientation_flag(rp2_6):
    assert all(a.orientation_preserving is None for a in enumerate_automorphisms(rp2_6))


def test_make_automorphism_rejects_nothing_but_computes_order(rp2_6):
    a = enumerate_automorphisms(rp2_6)[5]
    b = make_automorphism(rp2_6, a.image)
    assert a == b


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cycles_cover_all_vertices(k, small_corpus):
    c = small_corpus[k]
    for a in enumerate_automorphisms(c):
        assert sorted(v for cyc in a.cycles() for v in cyc) == list(range(c.vertex_count))
