"""Lattice descent search for embeddings and immersions.

A search instance owns one coordinate assignment, its pair-length cache and
one random stream. Each step scans the unit moves in a fresh random order and
takes the first admissible move that lowers the objective; at a local minimum
it either restarts or takes the first admissible move it saw. The global step
counter is never reset.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .complex import SurfaceComplex
from .objective import Mode, build_pair_schedule, verify_realization
from .obstruction import triple_point_feasible
from .symmetry import SymmetryBinding, trivial_binding

__all__ = [
    "Status",
    "StepKind",
    "SearchConfig",
    "CoordinateAssignment",
    "SearchOutcome",
    "InitFailed",
    "Search",
    "paper_defaults",
    "initialize",
    "is_admissible",
    "descent_step",
    "run_search",
]


class Status(enum.Enum):
    REALIZED = "REALIZED"
    STEP_BUDGET_EXHAUSTED = "STEP_BUDGET_EXHAUSTED"
    INIT_FAILED = "INIT_FAILED"
    OBSTRUCTED = "OBSTRUCTED"


class StepKind(enum.IntEnum):
    DESCENT = 0
    PLATEAU = 1
    RESTART = 2
    DEADEND = 3


class InitFailed(RuntimeError):
    """No admissible starting assignment within the rejection limit."""


_KERNEL_STATUS = {
    0: Status.REALIZED,
    1: Status.STEP_BUDGET_EXHAUSTED,
    2: Status.INIT_FAILED,
}


@dataclass(frozen=True)
class SearchConfig:
    """Search parameters. Box sizes are side lengths; coordinates lie in [-s/2, s/2]."""

    mode: Mode = Mode.EMBED
    max_steps: int = 2_000_000
    inner_box: int = 40
    outer_box: int = 80
    restart_ratio: float = 0.01
    seed: int = 0
    symmetry: SymmetryBinding | None = None
    debug: bool = False
    # None: relaxed position with a symmetry binding, general position without
    relaxed: bool | None = None

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if not 0 <= self.inner_box <= self.outer_box:
            raise ValueError("need 0 <= inner_box <= outer_box")
        if self.outer_box // 2 > kernels.default.KERNEL_COORD_LIMIT:
            raise ValueError(f"outer box exceeds 2 * {kernels.default.KERNEL_COORD_LIMIT}")
        if not 0.0 <= self.restart_ratio <= 1.0:
            raise ValueError("restart_ratio must lie in [0, 1]")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def paper_defaults(c: SurfaceComplex, symmetric: bool = False, **overrides) -> SearchConfig:
    """Boxes, budget and mode used for surfaces of this type and size."""
    name, f0 = c.surface_name, c.vertex_count
    small = f0 <= 8 or (name, f0) in {("N1", 9), ("N2", 9), ("M2", 10), ("M3", 10)}
    inner, outer = (40, 80) if small else (60, 120)
    budget = 2_000_000
    if (name, f0) == ("N3", 9):
        budget = 8_000_000
    elif (name, f0) == ("M4", 11):
        budget = 4_000_000
    elif (name, f0) == ("N4", 9) and not symmetric:
        budget = 10_000_000
    mode = Mode.EMBED if c.orientable else Mode.IMMERSE
    cfg = SearchConfig(mode=mode, max_steps=budget, inner_box=inner, outer_box=outer)
    return replace(cfg, **overrides)


@dataclass(frozen=True)
class CoordinateAssignment:
    coords: np.ndarray  # (n, 3) int64
    inner_box: int
    outer_box: int

    def __eq__(self, other):
        if not isinstance(other, CoordinateAssignment):
            return NotImplemented
        return (self.inner_box, self.outer_box) == (other.inner_box, other.outer_box) and \
            np.array_equal(self.coords, other.coords)


@dataclass
class SearchOutcome:
    status: Status
    coords: np.ndarray | None
    steps_used: int
    restarts: int
    verified: bool
    objective: float | None = None
    trace_kind: np.ndarray | None = field(default=None, repr=False)
    trace_value: np.ndarray | None = field(default=None, repr=False)


class Search:
    """One live search instance on a complex.

    ``tri_index`` and ``aut_index`` select an independent random stream for
    the same seed, so corpus runs stay reproducible whatever the job order.
    """

    def __init__(self, c: SurfaceComplex, config: SearchConfig, tri_index: int = 0,
                 aut_index: int = 0, backend: str | None = None):
        self.complex = c
        self.config = config
        self.binding = config.symmetry or trivial_binding(c.vertex_count)
        self.schedule = build_pair_schedule(c, config.mode)
        self.relaxed = (not self.binding.is_trivial) if config.relaxed is None else config.relaxed
        ss = np.random.SeedSequence(config.seed, spawn_key=(tri_index, aut_index))
        self._bitgen = np.random.PCG64(ss)
        arrays = self.binding.kernel_arrays()
        self.kernel = kernels.get_backend(backend)
        self.walker = self.kernel.Walker(
            np.zeros((c.vertex_count, 3), dtype=np.int64),
            c.triangles, c.edges, self.schedule.pairs,
            arrays["rep_ptr"], arrays["orb_vert"], arrays["orb_mat"],
            arrays["basis_ptr"], arrays["basis_vec"],
            arrays["move_rep"], arrays["move_vec"],
            arrays["group_perm"], arrays["group_mat"],
            self.relaxed, config.inner_box // 2, config.outer_box // 2,
            config.restart_ratio, self._bitgen, config.debug,
        )
        self._moves = {self.walker.move_info(i): i for i in range(self.walker.n_moves)}

    # state ------------------------------------------------------------------
    def initialize(self) -> bool:
        return self.walker.initialize()

    def set_coords(self, coords) -> None:
        self.walker.set_coords(np.asarray(getattr(coords, "coords", coords), dtype=np.int64))

    @property
    def assignment(self) -> CoordinateAssignment:
        return CoordinateAssignment(self.walker.coords, self.config.inner_box, self.config.outer_box)

    @property
    def objective(self) -> float:
        return self.walker.total

    @property
    def steps(self) -> int:
        return self.walker.steps

    @property
    def restarts(self) -> int:
        return self.walker.restarts

    # moves ------------------------------------------------------------------
    def move_index(self, vertex: int, vector) -> int:
        key = (int(vertex), tuple(int(x) for x in vector))
        try:
            return self._moves[key]
        except KeyError:
            raise ValueError(f"vertex {vertex + 1} cannot move by {key[1]} under this binding") from None

    def is_admissible(self, vertex: int, vector) -> bool:
        return self.walker.is_admissible(self.move_index(vertex, vector))

    def step(self) -> StepKind:
        return StepKind(self.walker.step())

    def run(self, trace: bool = False) -> SearchOutcome:
        cfg = self.config
        tk = tv = None
        if trace:
            tk = np.full(cfg.max_steps, -1, dtype=np.int8)
            tv = np.full(cfg.max_steps, np.nan, dtype=np.float64)
        code = self.walker.run(cfg.max_steps, tk, tv)
        status = _KERNEL_STATUS[code]
        if trace:
            tk, tv = tk[: self.steps], tv[: self.steps]
        coords = self.walker.coords
        verified = False
        if status is Status.REALIZED:
            verified = verify_realization(self.complex, coords, cfg.mode)
            if not verified:
                raise RuntimeError("objective reached 0 but the exact check rejects the assignment")
        return SearchOutcome(status, coords, self.steps, self.restarts, verified,
                             self.walker.total, tk, tv)


def initialize(c: SurfaceComplex, config: SearchConfig, tri_index: int = 0,
               aut_index: int = 0) -> CoordinateAssignment:
    s = Search(c, config, tri_index, aut_index)
    if not s.initialize():
        raise InitFailed("no admissible assignment in the inner box after 10^4 draws")
    return s.assignment


def is_admissible(c: SurfaceComplex, psi, move, config: SearchConfig) -> bool:
    """``move`` is ``(vertex, axis, sign)`` or ``(vertex, vector)``."""
    if len(move) == 3:
        v, axis, sign = move
        if sign not in (1, -1) or axis not in (0, 1, 2):
            raise ValueError("move must be (vertex, axis in 0..2, sign +-1)")
        vec = [0, 0, 0]
        vec[axis] = sign
    else:
        v, vec = move
    s = Search(c, config)
    s.set_coords(psi)
    return s.is_admissible(v, vec)


def descent_step(search: Search) -> StepKind:
    return search.step()


def run_search(c: SurfaceComplex, config: SearchConfig, tri_index: int = 0,
               aut_index: int = 0, backend: str | None = None,
               trace: bool = False) -> SearchOutcome:
    if config.mode is Mode.IMMERSE and triple_point_feasible(c).obstructed:
        return SearchOutcome(Status.OBSTRUCTED, None, 0, 0, False)
    s = Search(c, config, tri_index, aut_index, backend)
    if not s.initialize():
        return SearchOutcome(Status.INIT_FAILED, None, 0, 0, False)
    return s.run(trace)
