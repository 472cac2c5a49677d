import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polyreal.complex import (
    SurfaceComplex,
    TriangulationError,
    classify,
    format_triangulation,
    heawood_minimum,
    parse_triangulation,
)

from conftest import RP2_6, TETRA, TORUS_7, load

RP2_6_TEXT = ("[[1,2,3],[1,2,4],[1,3,5],[1,4,6],[1,5,6],"
              "[2,3,6],[2,4,5],[2,5,6],[3,4,5],[3,4,6]]")


def test_tetrahedron_parse():
    c = parse_triangulation("[[1,2,3],[1,2,4],[1,3,4],[2,3,4]]")
    assert c.f_vector == (4, 6, 4)
    assert c.euler_characteristic == 2
    assert c.orientable and c.genus == 0
    assert c.surface_name == "M0"


def test_projective_plane_text():
    c = parse_triangulation(RP2_6_TEXT)
    assert c.f_vector == (6, 15, 10)
    assert c.euler_characteristic == 1
    assert not c.orientable and c.orientation is None
    assert c.surface_name == "N1"


def test_torus():
    c = SurfaceComplex(TORUS_7)
    assert c.f_vector == (7, 21, 14)
    assert classify(c) == (True, 1)
    # neighbourly: every pair of vertices is an edge
    assert len(c.edges) == 21


@pytest.mark.parametrize("text, message", [
    ("[[1,2,3],[1,2,3]]", "duplicate"),
    ("[[1,2,2],[1,2,3]]", "degenerate"),
    ("[[1,2,3],[1,2,5],[1,3,5],[2,3,5]]", "contiguous"),
    ("[[1,2,3],[1,2,4],[1,3,4]]", "closed surface"),
    ("[[1,2,3],[1,2,4],[1,3,4],[2,3,4],[5,6,7],[5,6,8],[5,7,8],[6,7,8]]", "disconnected"),
    ("[[1,2,3],[1,2", "syntax"),
    ("[[1,2,3],[1,2,4],[1,3,4],[2,3,4,5]]", "triple"),
    ("[[0,1,2],[0,1,3],[0,2,3],[1,2,3]]", "contiguous"),
    ("42", "syntax"),
])
def test_rejections(text, message):
    with pytest.raises(TriangulationError, match=message):
        parse_triangulation(text)


def test_pinched_vertex_rejected():
    # two tetrahedra sharing one vertex: every edge is fine, the link of 1 is two cycles
    tris = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3),
            (0, 4, 5), (0, 4, 6), (0, 5, 6), (4, 5, 6)]
    with pytest.raises(TriangulationError, match="link of vertex 1"):
        SurfaceComplex(tris)


def test_classify_seed_independent(rp2_6, torus_7):
    for c in (rp2_6, torus_7):
        assert {classify(c, s) for s in range(len(c.triangles))} == {classify(c)}


def test_fixture_relations(small_corpus, rp2_9, klein_9, genus2):
    for c in small_corpus + rp2_9 + klein_9 + genus2:
        f0, f1, f2 = c.f_vector
        assert 3 * f2 == 2 * f1
        chi = f0 - f1 + f2
        assert chi == (2 - 2 * c.genus if c.orientable else 2 - c.genus)
        assert f0 >= heawood_minimum(chi)
    assert {c.surface_name for c in rp2_9} == {"N1"}
    assert {c.surface_name for c in klein_9} == {"N2"}
    assert {c.surface_name for c in genus2} == {"M2"}


def test_orientation_is_coherent(torus_7, genus2):
    for c in [torus_7] + genus2:
        directed = set()
        for a, b, t in c.orientation:
            for e in ((a, b), (b, t), (t, a)):
                assert e not in directed
                directed.add(e)
        assert len(directed) == 2 * len(c.edges)


def test_vertex_star_is_cyclic(torus_7):
    for v, star in torus_7.vertex_star.items():
        assert len(star) == torus_7.degree(v)
        for i, j in zip(star, star[1:] + star[:1]):
            assert torus_7.adjacent(i, j)


def test_format_round_trip(small_corpus):
    for c in small_corpus:
        assert parse_triangulation(format_triangulation(c)) == c


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(7)))
def test_relabel_invariants(perm):
    c = SurfaceComplex(TORUS_7)
    d = c.relabeled(perm)
    assert d.f_vector == c.f_vector
    assert classify(d) == classify(c)
    assert sorted(d.degree(perm[v]) for v in range(7)) == sorted(c.degree(v) for v in range(7))


def test_neighbors_and_triangle_lookup(rp2_6):
    assert rp2_6.neighbors(0) == frozenset({1, 2, 3, 4, 5})
    assert rp2_6.has_triangle((2, 1, 0))
    assert not rp2_6.has_triangle((0, 1, 3))


@pytest.mark.parametrize("chi, n", [(2, 4), (1, 6), (0, 7), (-1, 8), (-2, 9), (-3, 9), (-4, 10)])
def test_heawood(chi, n):
    assert heawood_minimum(chi) == n


def test_heawood_minus_three_is_nine():
    assert heawood_minimum(-3) == 9


def test_heawood_monotone_and_exact():
    values = [heawood_minimum(chi) for chi in range(2, -60, -1)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    for chi in range(2, -200, -1):
        n = heawood_minimum(chi)
        # least n with (2n - 7)^2 >= 49 - 24 chi and 2n >= 7
        assert (2 * n - 7) ** 2 >= 49 - 24 * chi and 2 * n >= 7
        assert n == 4 or (2 * n - 9) ** 2 < 49 - 24 * chi or 2 * n - 9 < 0


def test_heawood_rejects_positive_beyond_sphere():
    with pytest.raises(ValueError):
        heawood_minimum(3)


def test_equality_and_hash():
    a = SurfaceComplex(TETRA)
    b = SurfaceComplex([t[::-1] for t in reversed(TETRA)])
    assert a == b and hash(a) == hash(b)
    assert a != SurfaceComplex(RP2_6)


def test_every_pair_of_rp2_6_triangles_meets(rp2_6):
    for s, t in itertools.combinations(rp2_6.triangles, 2):
        assert set(s) & set(t)
