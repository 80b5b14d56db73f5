#!/usr/bin/env python3
"""Compiled vs pure-Python kernels: same trees, different wall times.

Builds identical CF-trees through both kernel backends over synthetic
blobs and (when the file is present) the bundled abalone table, checks
that the resulting micro-cluster partitions agree, and prints per-backend
wall times with the speedup.  Run from the repository root:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --sizes 2000,8000,32000 --repeat 5
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from cfrefine import (
    CFTreeParams,
    RefineParams,
    available_backends,
    build_tree,
    get_kernels,
    leaf_micro_clusters,
    load_abalone,
    refine,
)

ABALONE = Path(__file__).resolve().parent.parent / "data" / "abalone.data"


def synthetic_blobs(n, dim, seed):
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-10.0, 10.0, size=(12, dim))
    which = rng.integers(0, centers.shape[0], size=n)
    return centers[which] + rng.normal(0.0, 0.5, size=(n, dim))


def run_once(points, params, rho, kernels):
    t0 = time.perf_counter()
    tree = build_tree(points, params, kernels=kernels)
    phase1 = leaf_micro_clusters(tree)
    clusters = refine(phase1, points, RefineParams(rho=rho))
    wall = (time.perf_counter() - t0) * 1000.0
    partition = [sorted(mc.members) for mc in clusters]
    return wall, partition


def bench_case(name, points, threshold, rho, repeat):
    params = CFTreeParams(threshold=threshold)
    walls, partitions = {}, {}
    for backend in available_backends():
        kernels = get_kernels(backend)
        best = None
        for _ in range(repeat):
            wall, partition = run_once(points, params, rho, kernels)
            best = wall if best is None else min(best, wall)
        walls[backend] = best
        partitions[backend] = partition
    names = sorted(partitions)
    agree = all(partitions[b] == partitions[names[0]] for b in names[1:])
    n_clusters = len(partitions[names[0]])
    cols = "  ".join(f"{b}={walls[b]:8.1f}ms" for b in names)
    speedup = ""
    if "compiled" in walls and "python" in walls:
        speedup = f"  speedup={walls['python'] / walls['compiled']:.1f}x"
    flag = "" if agree else "  ** PARTITIONS DIFFER **"
    print(f"{name:<28} rows={points.shape[0]:>6} clusters={n_clusters:>4}  "
          f"{cols}{speedup}{flag}")
    return agree


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,4000,16000",
                    help="comma-separated synthetic row counts")
    ap.add_argument("--dim", type=int, default=7)
    ap.add_argument("--threshold", type=float, default=2.2,
                    help="diameter threshold for the synthetic cases")
    ap.add_argument("--rho", type=float, default=0.1)
    ap.add_argument("--repeat", type=int, default=3,
                    help="repetitions per case; best wall is reported")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    print(f"backends: {', '.join(available_backends())}  "
          f"(repeat={args.repeat}, best-of reported)")
    all_agree = True
    for n in (int(s) for s in args.sizes.split(",")):
        points = synthetic_blobs(n, args.dim, args.seed)
        all_agree &= bench_case(f"blobs d={args.dim}", points,
                                args.threshold, args.rho, args.repeat)
    if ABALONE.exists():
        abalone = load_abalone(ABALONE)
        all_agree &= bench_case("abalone T=0.27", abalone.points, 0.27,
                                args.rho, args.repeat)
    else:
        print(f"(skipping abalone case: {ABALONE} not found)")
    if not all_agree:
        print("error: backends produced different partitions", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
