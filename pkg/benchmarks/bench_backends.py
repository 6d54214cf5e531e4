#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on both backends at a matched workload and prints a
timing table. The numba timings exclude compilation (one warmup call per
kernel).

    python benchmarks/bench_backends.py [--scale 1.0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from extremal import ReturnLaw, WanderingTable, set_backend
from extremal import kernels
from extremal._backend import HAVE_NUMBA

SEED = 1234


def _bench(fn, warmup=True):
    if warmup:
        fn()
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def build_workloads(scale: float):
    beta = 0.3
    law = ReturnLaw(beta)
    table = WanderingTable(law)
    n_small = 10_000
    n_big = 100_000
    W_small = table.prefix(n_small)
    W_big = table.prefix(n_big)
    v = np.linspace(1.0, 30.0, int(3000 * scale))

    def rng():
        return np.random.default_rng(SEED)

    return {
        f"gap draws ({int(2e6 * scale):.1e})": lambda: kernels.phi_batch(
            beta, 0.0, int(2e6 * scale), rng()
        ),
        f"visit minima ({int(1e6 * scale):.1e})": lambda: kernels.visit_min_batch(
            W_small, n_small, int(1e6 * scale), rng()
        ),
        f"sojourn counts ({int(2e4 * scale):.1e} walks, n=1e5)": lambda: kernels.sojourn_counts(
            beta, 0.0, n_big, int(2e4 * scale), rng()
        ),
        f"point hits ({int(2e5 * scale):.1e} walks, n=1e4)": lambda: kernels.hit_count(
            0.5, 0.0, n_small, int(2e5 * scale), rng()
        ),
        f"set intersections ({int(5e4 * scale):.1e} pairs, n=1e4)": lambda: kernels.intersect_count(
            W_small, beta, 0.0, n_small, 0.0, float(n_small), int(5e4 * scale), rng()
        ),
        f"measure values ({int(2e3 * scale):.1e} reps, N=1e4)": lambda: kernels.measure_values(
            W_small,
            beta,
            n_small,
            np.array([-0.5]),
            np.array([n_small * 0.5 + 0.5]),
            10_000,
            int(2e3 * scale),
            rng(),
        ),
        f"path accumulation ({len(v)} terms, n=1e5)": lambda: kernels.path_pairs(
            W_big, beta, 0.0, n_big, v, rng()
        ),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=float, default=1.0, help="workload multiplier")
    args = parser.parse_args()

    workloads = build_workloads(args.scale)
    results = {}
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    for backend in backends:
        set_backend(backend)
        for name, fn in workloads.items():
            results.setdefault(name, {})[backend] = _bench(fn)

    width = max(len(k) for k in workloads)
    header = f"{'kernel':<{width}}  {'numpy':>10}"
    if HAVE_NUMBA:
        header += f"  {'numba':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, times in results.items():
        line = f"{name:<{width}}  {times['numpy'] * 1e3:>8.1f}ms"
        if HAVE_NUMBA:
            spd = times["numpy"] / times["numba"]
            line += f"  {times['numba'] * 1e3:>8.1f}ms  {spd:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
