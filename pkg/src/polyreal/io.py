"""Corpus reading, results files and OBJ export.

Results are JSON lines behind a versioned header. Records are written in a
fixed order with sorted keys, so equal runs give byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from .complex import SurfaceComplex, TriangulationError, parse_triangulation
from .objective import Mode, verify_realization

__all__ = [
    "RESULTS_HEADER",
    "CorpusEntry",
    "Diagnostic",
    "EmptyCorpus",
    "CorruptRecord",
    "ResultRecord",
    "read_corpus",
    "write_results",
    "read_results",
    "export_obj",
    "read_obj",
    "atomic_write_text",
]

RESULTS_HEADER = "# polyreal-results v1"


class EmptyCorpus(ValueError):
    pass


class CorruptRecord(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    file: str
    line: int  # 1-based line number in the corpus file
    complex: SurfaceComplex

    @property
    def id(self) -> str:
        return f"{self.file}:{self.line}"


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    message: str

    def __str__(self):
        return f"{self.file}:{self.line}: {self.message}"


def read_corpus(path) -> tuple[list[CorpusEntry], list[Diagnostic]]:
    """One triangulation per line; blank lines and ``#`` comments are skipped.

    Malformed lines become diagnostics and the rest are still returned.
    """
    path = Path(path)
    name = path.name
    entries, diags = [], []
    with path.open() as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                entries.append(CorpusEntry(name, lineno, parse_triangulation(text)))
            except TriangulationError as exc:
                diags.append(Diagnostic(name, lineno, str(exc)))
    if not entries:
        raise EmptyCorpus(f"{path}: no valid triangulations")
    return entries, diags


@dataclass(frozen=True)
class ResultRecord:
    file: str
    line: int
    triangulation: str  # 1-based corpus form
    mode: str
    symmetry: str  # "none" or KIND:generator cycles
    status: str
    steps: int
    restarts: int
    seed: int
    coordinates: tuple[tuple[int, int, int], ...] | None
    aut_group_order: int

    def sort_key(self):
        return (self.file, self.line, self.mode, self.symmetry, self.seed)

    def to_json(self) -> str:
        d = asdict(self)
        if self.coordinates is not None:
            d["coordinates"] = [list(p) for p in self.coordinates]
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        d = json.loads(text)
        if d.get("coordinates") is not None:
            d["coordinates"] = tuple(tuple(int(x) for x in p) for p in d["coordinates"])
        return cls(**d)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_results(records, path) -> None:
    lines = [RESULTS_HEADER]
    lines += [r.to_json() for r in sorted(records, key=ResultRecord.sort_key)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def _check(rec: ResultRecord) -> bool:
    c = parse_triangulation(rec.triangulation)
    if rec.coordinates is None or len(rec.coordinates) != c.vertex_count:
        return False
    return verify_realization(c, rec.coordinates, Mode(rec.mode))


def read_results(path, verify: bool = True) -> list[ResultRecord]:
    """Load a results file; REALIZED records are re-verified exactly."""
    with Path(path).open() as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != RESULTS_HEADER:
        raise CorruptRecord(f"{path}: missing header {RESULTS_HEADER!r}")
    out = []
    for lineno, text in enumerate(lines[1:], 2):
        if not text.strip():
            continue
        try:
            rec = ResultRecord.from_json(text)
        except (ValueError, TypeError) as exc:
            raise CorruptRecord(f"{path}:{lineno}: {exc}") from None
        if verify and rec.status == "REALIZED" and not _check(rec):
            raise CorruptRecord(f"{path}:{lineno}: REALIZED coordinates fail verification")
        out.append(rec)
    return out


def export_obj(c: SurfaceComplex, psi, path) -> None:
    """Integer ``v`` lines and 1-based ``f`` lines, coherently oriented when possible."""
    pts = [tuple(int(x) for x in p) for p in getattr(psi, "coords", psi)]
    if len(pts) != c.vertex_count:
        raise ValueError(f"{len(pts)} points for {c.vertex_count} vertices")
    faces = c.orientation if c.orientation is not None else c.triangles
    lines = [f"v {x} {y} {z}" for x, y, z in pts]
    lines += [f"f {a + 1} {b + 1} {t + 1}" for a, b, t in faces]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_obj(path) -> tuple[list[tuple[int, int, int]], list[tuple[int, int, int]]]:
    """Return (0-based faces, integer vertex coordinates)."""
    verts, faces = [], []
    with Path(path).open() as fh:
        for raw in fh:
            parts = raw.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append(tuple(int(x) for x in parts[1:4]))
            elif parts[0] == "f":
                faces.append(tuple(int(x.split("/")[0]) - 1 for x in parts[1:4]))
    return faces, verts
