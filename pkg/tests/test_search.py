import numpy as np
import pytest

from polyreal.automorphisms import make_automorphism
from polyreal.complex import SurfaceComplex
from polyreal.exactgeom import in_general_position
from polyreal.objective import Mode, verify_realization
from polyreal.search import (
    InitFailed,
    Search,
    SearchConfig,
    Status,
    StepKind,
    descent_step,
    initialize,
    is_admissible,
    paper_defaults,
    run_search,
)
from polyreal.symmetry import CATALOG, IsometryKind, apply, bind

from conftest import TORUS_7

OCTA = [(a, b, c) for a in (0, 3) for b in (1, 4) for c in (2, 5)]
OCTA_PTS = [(1, 2, 10), (10, 1, 0), (2, 10, 0), (-1, -2, -10), (-10, 3, 0), (3, -10, 1)]


def test_initialize_tetrahedron(tetra):
    psi = initialize(tetra, SearchConfig(inner_box=40, outer_box=80, seed=3))
    assert psi.coords.shape == (4, 3)
    assert np.abs(psi.coords).max() <= 20
    assert in_general_position([tuple(p) for p in psi.coords])


def test_inner_box_zero_fails(tetra):
    cfg = SearchConfig(inner_box=0, outer_box=80)
    with pytest.raises(InitFailed):
        initialize(tetra, cfg)
    assert run_search(tetra, cfg).status is Status.INIT_FAILED


def test_symmetric_init_rot3(torus_7):
    a = make_automorphism(torus_7, [(2 * v) % 7 for v in range(7)])
    b = bind(torus_7, a, CATALOG[IsometryKind.ROT3])
    psi = initialize(torus_7, SearchConfig(symmetry=b, seed=2)).coords
    m = CATALOG[IsometryKind.ROT3].matrix
    for u, v in ((1, 2), (2, 4), (4, 1), (3, 6), (6, 5), (5, 3)):
        assert tuple(psi[v]) == apply(m, tuple(psi[u]))
    assert psi[0][0] == psi[0][1] == psi[0][2]


def test_admissibility():
    c = SurfaceComplex(OCTA)
    cfg = SearchConfig(inner_box=20, outer_box=20)
    assert is_admissible(c, OCTA_PTS, (5, 0, 1), cfg)
    assert not is_admissible(c, OCTA_PTS, (1, 0, 1), cfg)  # x = 11 > 10
    assert is_admissible(c, OCTA_PTS, (1, 0, -1), cfg)
    # flattening the equator: coplanar, but no incidence
    assert not is_admissible(c, OCTA_PTS, (5, 2, -1), cfg)
    assert is_admissible(c, OCTA_PTS, (5, 2, -1), SearchConfig(inner_box=20, outer_box=20, relaxed=True))
    assert is_admissible(c, OCTA_PTS, (5, (0, 0, -1)), SearchConfig(inner_box=20, outer_box=20, relaxed=True))
    with pytest.raises(ValueError):
        is_admissible(c, OCTA_PTS, (5, 3, 1), cfg)


def test_tetrahedron_realized_at_step_zero(tetra):
    out = run_search(tetra, SearchConfig(mode=Mode.EMBED))
    assert out.status is Status.REALIZED and out.steps_used == 0 and out.verified


def test_obstructed_short_circuit(rp2_6):
    out = run_search(rp2_6, SearchConfig(mode=Mode.IMMERSE))
    assert out.status is Status.OBSTRUCTED and out.steps_used == 0 and out.coords is None
    # embedding mode does not consult the obstruction
    out = run_search(rp2_6, SearchConfig(mode=Mode.EMBED, max_steps=50))
    assert out.status is Status.STEP_BUDGET_EXHAUSTED


def test_descent_steps_decrease(klein_9):
    s = Search(klein_9[1], SearchConfig(mode=Mode.IMMERSE, seed=4, restart_ratio=1.0))
    assert s.initialize()
    kinds = []
    for _ in range(400):
        before, restarts = s.objective, s.restarts
        kind = descent_step(s)
        kinds.append(kind)
        if kind is StepKind.DESCENT:
            assert s.objective < before
        elif kind is StepKind.RESTART:
            assert s.restarts == restarts + 1
        if s.objective == 0:
            break
    assert StepKind.PLATEAU not in kinds  # ratio 1: a local minimum always restarts
    assert StepKind.RESTART in kinds
    assert s.steps == len(kinds)  # counter survives restarts


def test_budget_and_trace(klein_9):
    cfg = SearchConfig(mode=Mode.IMMERSE, seed=9, max_steps=500, restart_ratio=0.05)
    out = run_search(klein_9[4], cfg, trace=True)
    assert out.steps_used <= 500
    assert len(out.trace_kind) == out.steps_used
    if out.status is Status.STEP_BUDGET_EXHAUSTED:
        assert out.steps_used == 500 and out.objective > 0


def test_determinism(klein_9):
    cfg = SearchConfig(mode=Mode.IMMERSE, seed=11, max_steps=300)
    a = run_search(klein_9[6], cfg, tri_index=3)
    b = run_search(klein_9[6], cfg, tri_index=3)
    c = run_search(klein_9[6], cfg, tri_index=4)
    assert np.array_equal(a.coords, b.coords) and a.objective == b.objective
    assert not np.array_equal(a.coords, c.coords)


def test_torus_embeds(torus_7):
    out = run_search(torus_7, SearchConfig(mode=Mode.EMBED, seed=0, debug=True))
    assert out.status is Status.REALIZED and out.verified
    assert verify_realization(torus_7, out.coords, Mode.EMBED)
    assert np.abs(out.coords).max() <= 40


def test_symmetric_search_keeps_symmetry(torus_7):
    a = make_automorphism(torus_7, [(-v) % 7 for v in range(7)])
    b = bind(torus_7, a, CATALOG[IsometryKind.ROT2])
    out = run_search(torus_7, SearchConfig(mode=Mode.EMBED, symmetry=b, seed=1,
                                           max_steps=3000, debug=True))
    assert b.holds(out.coords)
    if out.status is Status.REALIZED:
        assert out.verified


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_steps=0)
    with pytest.raises(ValueError):
        SearchConfig(inner_box=100, outer_box=80)
    with pytest.raises(ValueError):
        SearchConfig(outer_box=2**18)
    with pytest.raises(ValueError):
        SearchConfig(restart_ratio=1.5)
    with pytest.raises(ValueError):
        SearchConfig(seed=-1)


class _Fake:
    def __init__(self, name, n):
        self.surface_name, self.vertex_count = name, n
        self.orientable = name.startswith("M")


@pytest.mark.parametrize("name, n, sym, boxes, budget, mode", [
    ("N1", 9, False, (40, 80), 2_000_000, Mode.IMMERSE),
    ("N2", 9, False, (40, 80), 2_000_000, Mode.IMMERSE),
    ("M2", 10, False, (40, 80), 2_000_000, Mode.EMBED),
    ("M3", 10, False, (40, 80), 2_000_000, Mode.EMBED),
    ("N3", 9, False, (60, 120), 8_000_000, Mode.IMMERSE),
    ("M4", 11, True, (60, 120), 4_000_000, Mode.EMBED),
    ("N4", 9, False, (60, 120), 10_000_000, Mode.IMMERSE),
    ("N4", 9, True, (60, 120), 2_000_000, Mode.IMMERSE),
    ("M2", 12, False, (60, 120), 2_000_000, Mode.EMBED),
    ("M1", 7, False, (40, 80), 2_000_000, Mode.EMBED),
])
def test_paper_defaults(name, n, sym, boxes, budget, mode):
    cfg = paper_defaults(_Fake(name, n), symmetric=sym)
    assert (cfg.inner_box, cfg.outer_box) == boxes
    assert cfg.max_steps == budget and cfg.mode is mode
    assert cfg.restart_ratio == 0.01


def test_paper_defaults_overrides(torus_7):
    cfg = paper_defaults(torus_7, seed=5, max_steps=10)
    assert cfg.seed == 5 and cfg.max_steps == 10
