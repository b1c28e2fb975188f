#!/usr/bin/env python3
"""Benchmark the compiled correlation kernels against the numpy fallback.

Run after building the extension (pip install -e . --no-build-isolation):

    python benchmarks/bench_kernels.py

Also times one full receive pipeline per overclock factor for context.
"""

import time

import numpy as np

from tfi import _kernels
from tfi._kernels import _fallback


def timeit(fn, *args, repeat=20):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"compiled extension available: {_kernels.HAVE_COMPILED}")
    print()
    print(f"{'kernel':<28} {'n':>8} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for n in (2_000, 20_000, 200_000):
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        t_fb = timeit(_fallback.detector_stats, y, 16, 16, 96)
        t_c = timeit(_kernels.detector_stats, y, 16, 16, 96)
        print(f"{'detector_stats':<28} {n:>8} {t_fb * 1e3:>9.3f}ms {t_c * 1e3:>9.3f}ms "
              f"{t_fb / t_c:>7.2f}x")
    points = rng.normal(size=64) + 1j * rng.normal(size=64)
    for n in (1_000, 10_000, 100_000):
        samples = rng.normal(size=n) + 1j * rng.normal(size=n)
        t_fb = timeit(_fallback.nearest_labels, samples, points)
        t_c = timeit(_kernels.nearest_labels, samples, points)
        print(f"{'nearest_labels (64 points)':<28} {n:>8} {t_fb * 1e3:>9.3f}ms "
              f"{t_c * 1e3:>9.3f}ms {t_fb / t_c:>7.2f}x")


def bench_pipeline():
    from tfi.harness import make_trial, run_trial, trial_seed

    print()
    print("full paired trial (capture + both receivers), 20 payload symbols:")
    for g in (1, 2, 4, 8):
        seed = trial_seed(0, "qam16", g, 12.0, "wideband", 0)
        bp, sc = make_trial("qam16", g, 12.0, "wideband", "flat", 20, seed)
        t = timeit(lambda: run_trial(bp, sc), repeat=10)
        print(f"  G={g}: {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    bench_kernels()
    bench_pipeline()
