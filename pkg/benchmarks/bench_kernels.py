"""Compare the compiled and pure-Python search kernels.

Times the triangle-pair length kernel on random pairs and a fixed number of
descent steps on fixture surfaces, and checks both backends follow the same
trajectory.

    python3 benchmarks/bench_kernels.py [--steps 2000] [--pairs 20000]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from polyreal import kernels
from polyreal.complex import parse_triangulation
from polyreal.objective import Mode
from polyreal.search import Search, SearchConfig

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def fixture(name, k=0):
    lines = [x for x in (DATA / name).read_text().splitlines() if not x.startswith("#")]
    return parse_triangulation(lines[k])


def bench_pairs(backend, tris):
    t = time.perf_counter()
    total = 0.0
    for t1, t2 in tris:
        total += backend.pair_length(t1, t2)
    return time.perf_counter() - t, total


def bench_walk(name, c, mode, steps, backend):
    s = Search(c, SearchConfig(mode=mode, seed=7, max_steps=steps), backend=backend)
    s.initialize()
    t = time.perf_counter()
    out = s.run(trace=True)
    return time.perf_counter() - t, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--pairs", type=int, default=20000)
    args = ap.parse_args()
    names = kernels.available_backends()
    if "cython" not in names:
        print("compiled kernel not built; only the Python backend is available")

    rng = np.random.default_rng(1)
    pts = rng.integers(-60, 61, size=(args.pairs, 2, 3, 3)).tolist()
    print(f"pair_length on {args.pairs} random pairs")
    base = None
    for name in names:
        dt, total = bench_pairs(kernels.get_backend(name), pts)
        base = base or dt
        print(f"  {name:7s} {dt:8.3f} s  {1e6 * dt / args.pairs:8.2f} us/pair  sum={total!r}")

    cases = [("torus_7", fixture("small.txt", 2), Mode.EMBED),
             ("klein_9", fixture("klein_9.txt"), Mode.IMMERSE),
             ("rp2_9", fixture("rp2_9.txt"), Mode.IMMERSE)]
    for label, c, mode in cases:
        print(f"{args.steps} descent steps, {label} ({mode.value})")
        outs = {}
        for name in names:
            dt, out = bench_walk(label, c, mode, args.steps, name)
            outs[name] = out
            print(f"  {name:7s} {dt:8.3f} s  {1e3 * dt / max(1, out.steps_used):8.3f} ms/step"
                  f"  steps={out.steps_used} status={out.status.value}")
        if len(outs) == 2:
            a, b = outs["cython"], outs["python"]
            same = (np.array_equal(a.coords, b.coords)
                    and np.array_equal(a.trace_value, b.trace_value, equal_nan=True))
            print(f"  identical trajectories: {same}")


if __name__ == "__main__":
    main()
