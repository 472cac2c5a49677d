"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
mirror. Both expose the same ``Walker`` class and predicates.
"""

from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = ["default", "get_backend", "available_backends"]

default: ModuleType = _compiled if _compiled is not None else _pykernels


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        return default
    if name == "python":
        return _pykernels
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel is not built")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")
