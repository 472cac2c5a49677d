"""Polyhedral embeddings and immersions of triangulated surfaces on the integer lattice."""

from .automorphisms import Automorphism, enumerate_automorphisms
from .complex import SurfaceComplex, TriangulationError, parse_triangulation
from .kernels import default as _kernel
from .objective import Mode, verify_realization
from .obstruction import triple_point_feasible
from .search import SearchConfig, SearchOutcome, Status, paper_defaults, run_search
from .symmetry import CATALOG, IsometryKind, bind

__version__ = "0.1.0"
KERNEL_BACKEND = _kernel.BACKEND

__all__ = [
    "Automorphism",
    "CATALOG",
    "IsometryKind",
    "KERNEL_BACKEND",
    "Mode",
    "SearchConfig",
    "SearchOutcome",
    "Status",
    "SurfaceComplex",
    "TriangulationError",
    "bind",
    "enumerate_automorphisms",
    "paper_defaults",
    "parse_triangulation",
    "run_search",
    "triple_point_feasible",
    "verify_realization",
]
