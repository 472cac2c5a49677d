"""Command-line interface: check, aut, realize, verify, export.

Reports for ``check`` and ``aut`` go to stdout. ``realize`` writes its data
to the results file only and streams progress to stderr. The exit status is
0 whenever the run completed, whatever the per-triangulation outcomes.
"""

from __future__ import annotations

import argparse
import collections
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .automorphisms import enumerate_automorphisms, make_automorphism
from .complex import format_triangulation, heawood_minimum, parse_triangulation
from .io import (
    CorruptRecord,
    EmptyCorpus,
    ResultRecord,
    export_obj,
    read_corpus,
    read_results,
    write_results,
)
from .objective import Mode
from .obstruction import triple_point_feasible
from .search import paper_defaults, run_search
from .symmetry import (
    CATALOG,
    BindingError,
    IsometryKind,
    bind,
    compatible_isometries,
    d2_generator_pairs,
)


def _err(*args) -> None:
    print(*args, file=sys.stderr, flush=True)


def _line_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        a = int(lo) if lo else 1
        b = int(hi) if hi else (a if not sep else 10**12)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad line range {text!r}, expected A:B") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad line range {text!r}")
    return a, b


def _load(path, line_range=None):
    entries, diags = read_corpus(path)
    for d in diags:
        _err(f"skipped {d}")
    if line_range:
        lo, hi = line_range
        entries = [e for e in entries if lo <= e.line <= hi]
    return entries


# check / aut -------------------------------------------------------------------

def cmd_check(args) -> int:
    for e in _load(args.corpus, args.line_range):
        c = e.complex
        v = triple_point_feasible(c)
        obst = "n/a" if not v.applicable else ("obstructed" if v.obstructed else "feasible")
        auts = enumerate_automorphisms(c)
        print(
            f"{e.id}\tf={c.f_vector}\tchi={c.euler_characteristic}\t{c.surface_name}"
            f"\t{'orientable' if c.orientable else 'non-orientable'}"
            f"\theawood_min={heawood_minimum(c.euler_characteristic)}"
            f"\taut={len(auts)}\ttriple_point={obst}"
        )
    return 0


def cmd_aut(args) -> int:
    for e in _load(args.corpus, args.line_range):
        c = e.complex
        auts = enumerate_automorphisms(c)
        print(f"{e.id}\t|Aut|={len(auts)}")
        for k, a in enumerate(auts):
            if a.is_identity:
                continue
            isos = ",".join(i.kind.value for i in compatible_isometries(a, c)) or "-"
            ori = {None: "", True: "\tpreserving", False: "\treversing"}[a.orientation_preserving]
            print(f"  #{k}\t{a.cycle_notation()}\torder={a.order}"
                  f"\tfixed_vertices={len(a.fixed_vertices)}{ori}\tisometries={isos}")
    return 0


# realize -------------------------------------------------------------------------

@dataclass(frozen=True)
class _Job:
    file: str
    line: int
    text: str
    mode: str
    kind: str | None  # isometry kind, None for the asymmetric search
    generators: tuple  # automorphism images
    aut_index: int
    aut_order: int
    overrides: tuple


def _symmetric_jobs(c, auts, wanted):
    """(kind, generator images) pairs, numbered by their position in the list."""
    out = []
    for a in auts:
        if a.is_identity:
            continue
        for iso in compatible_isometries(a, c):
            if wanted in ("auto", iso.kind.value):
                out.append((iso.kind.value, (a.image,)))
    if wanted in ("auto", "D2"):
        for x, y in d2_generator_pairs(auts, c):
            out.append(("D2", (x.image, y.image)))
    return out


def _jobs(entries, args):
    overrides = {}
    for key in ("max_steps", "inner_box", "outer_box", "restart_ratio"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    overrides["seed"] = args.seed
    frozen = tuple(sorted(overrides.items()))
    jobs = []
    for e in entries:
        c = e.complex
        mode = args.mode if args.mode != "auto" else ("embed" if c.orientable else "immerse")
        auts = enumerate_automorphisms(c)
        text = format_triangulation(c)
        if args.symmetry == "none":
            specs = [(None, ())]
        else:
            specs = _symmetric_jobs(c, auts, args.symmetry)
        for k, (kind, gens) in enumerate(specs):
            idx = 0 if kind is None else k + 1
            jobs.append(_Job(e.file, e.line, text, mode, kind, gens, idx, len(auts), frozen))
    return jobs


def _run_job(job: _Job) -> ResultRecord | str:
    c = parse_triangulation(job.text)
    overrides = dict(job.overrides)
    binding = None
    descriptor = "none"
    if job.kind is not None:
        gens = [make_automorphism(c, g) for g in job.generators]
        try:
            binding = bind(c, gens, CATALOG[IsometryKind(job.kind)])
        except BindingError as exc:
            return f"{job.file}:{job.line} {job.kind}: binding rejected ({exc})"
        descriptor = binding.descriptor()
    cfg = paper_defaults(c, symmetric=binding is not None, mode=Mode(job.mode),
                         symmetry=binding, **overrides)
    out = run_search(c, cfg, tri_index=job.line, aut_index=job.aut_index)
    coords = None
    if out.coords is not None:
        coords = tuple(tuple(int(x) for x in p) for p in out.coords)
    return ResultRecord(
        file=job.file, line=job.line, triangulation=job.text, mode=job.mode,
        symmetry=descriptor, status=out.status.value, steps=out.steps_used,
        restarts=out.restarts, seed=cfg.seed, coordinates=coords,
        aut_group_order=job.aut_order,
    )


def cmd_realize(args) -> int:
    entries = _load(args.corpus, args.line_range)
    jobs = _jobs(entries, args)
    _err(f"{len(entries)} triangulations, {len(jobs)} search jobs")
    records: list[ResultRecord] = []
    counts: collections.Counter = collections.Counter()
    write_results(records, args.output)

    def handle(i, res):
        if isinstance(res, str):
            counts["BINDING_REJECTED"] += 1
            _err(f"[{i}/{len(jobs)}] {res}")
            return
        records.append(res)
        counts[res.status] += 1
        _err(f"[{i}/{len(jobs)}] {res.file}:{res.line} {res.symmetry} "
             f"{res.status} steps={res.steps} restarts={res.restarts}")
        write_results(records, args.output)

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for i, res in enumerate(pool.map(_run_job, jobs), 1):
                handle(i, res)
    else:
        for i, job in enumerate(jobs, 1):
            handle(i, _run_job(job))
    summary = " ".join(f"{k.lower()}={v}" for k, v in sorted(counts.items()))
    _err(f"done: {summary or 'no jobs'}")
    return 0


# verify / export -----------------------------------------------------------------

def cmd_verify(args) -> int:
    try:
        records = read_results(args.results)
    except CorruptRecord as exc:
        _err(f"verification failed: {exc}")
        return 1
    counts = collections.Counter(r.status for r in records)
    _err(f"{len(records)} records verified: "
         + " ".join(f"{k.lower()}={v}" for k, v in sorted(counts.items())))
    return 0


def cmd_export(args) -> int:
    records = read_results(args.results)
    for r in records:
        if r.status != "REALIZED" or r.line != args.line:
            continue
        if args.file is not None and r.file != args.file:
            continue
        if args.symmetry is not None and r.symmetry != args.symmetry:
            continue
        export_obj(parse_triangulation(r.triangulation), r.coordinates, args.output)
        _err(f"wrote {args.output} from {r.file}:{r.line} ({r.symmetry})")
        return 0
    _err("no matching REALIZED record")
    return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyreal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, help_ in (("check", "validate, classify and test the triple-point obstruction"),
                        ("aut", "list automorphisms and compatible isometries")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("corpus")
        s.add_argument("--line-range", type=_line_range, metavar="A:B")

    r = sub.add_parser("realize", help="run the lattice search over a corpus")
    r.add_argument("corpus")
    r.add_argument("-o", "--output", required=True, help="results file")
    r.add_argument("--mode", choices=("auto", "embed", "immerse"), default="auto")
    r.add_argument("--symmetry", default="none",
                   choices=["none", "auto"] + [k.value for k in IsometryKind])
    r.add_argument("--inner-box", type=int, help="side length of the start box")
    r.add_argument("--outer-box", type=int, help="side length of the search box")
    r.add_argument("--max-steps", type=int)
    r.add_argument("--restart-ratio", type=float)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--line-range", type=_line_range, metavar="A:B")

    v = sub.add_parser("verify", help="re-check every REALIZED record of a results file")
    v.add_argument("results")

    e = sub.add_parser("export", help="write an OBJ file from a results record")
    e.add_argument("results")
    e.add_argument("--line", type=int, required=True, help="corpus line of the record")
    e.add_argument("--file", help="corpus file name of the record")
    e.add_argument("--symmetry", help="symmetry descriptor of the record")
    e.add_argument("-o", "--output", required=True)
    return p


_COMMANDS = {
    "check": cmd_check,
    "aut": cmd_aut,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, EmptyCorpus, CorruptRecord, ValueError) as exc:
        _err(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
