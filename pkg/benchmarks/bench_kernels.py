"""Benchmark the compiled limiting cascades against the numpy fallback.

The workloads mimic what a large flagged set looks like mid-run: mostly rows
whose cascade stops after one or two modes, a minority that limits all the
way down.  Run from the repository root:

    python benchmarks/bench_kernels.py [--rows 200000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from mwdg.kernels import _cascade_py
from mwdg.limiter import mode_scalings

try:
    from mwdg.kernels import _cascade
    BACKENDS = [("cython", _cascade), ("python", _cascade_py)]
except ImportError:
    print("compiled kernel unavailable; benchmarking the fallback only")
    BACKENDS = [("python", _cascade_py)]


def workload_1d(rng, rows, k):
    u = rng.normal(size=(rows, k + 1))
    lo = u + 0.1 * rng.normal(size=u.shape)
    hi = u + 0.1 * rng.normal(size=u.shape)
    # make a third of the rows strongly oscillatory (full cascade depth)
    osc = rng.random(rows) < 0.33
    u[osc, 1:] *= -5.0
    return u, lo, hi


def workload_2d(rng, rows, k):
    shape = (rows, k + 1, k + 1)
    u = rng.normal(size=shape)
    nbrs = [u + 0.1 * rng.normal(size=shape) for _ in range(4)]
    osc = rng.random(rows) < 0.33
    u[osc] *= -5.0
    return u, nbrs


def timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(42)

    print(f"{'kernel':<12} {'k':>2} {'backend':<8} {'rows/s':>12} "
          f"{'best ms':>9}")
    for k in (1, 2):
        betas = mode_scalings(k)
        u0, lo, hi = workload_1d(rng, args.rows, k)
        results = {}
        for name, mod in BACKENDS:
            def run():
                work = u0.copy()
                mod.cascade_1d(work, lo, hi, betas)
            best = timeit(run, args.repeats)
            results[name] = best
            print(f"{'cascade_1d':<12} {k:>2} {name:<8} "
                  f"{args.rows / best:>12.3e} {1e3 * best:>9.2f}")
        if len(results) == 2:
            print(f"{'':<12} {'':>2} speedup  "
                  f"{results['python'] / results['cython']:>11.1f}x")

        rows2 = args.rows // 4
        u0_2, nbrs = workload_2d(rng, rows2, k)
        results = {}
        for name, mod in BACKENDS:
            def run():
                work = u0_2.copy()
                mod.cascade_2d(work, *nbrs, betas)
            best = timeit(run, args.repeats)
            results[name] = best
            print(f"{'cascade_2d':<12} {k:>2} {name:<8} "
                  f"{rows2 / best:>12.3e} {1e3 * best:>9.2f}")
        if len(results) == 2:
            print(f"{'':<12} {'':>2} speedup  "
                  f"{results['python'] / results['cython']:>11.1f}x")

    # cross-check: identical outputs
    rng = np.random.default_rng(0)
    if len(BACKENDS) == 2:
        betas = mode_scalings(2)
        u0, lo, hi = workload_1d(rng, 10_000, 2)
        a, b = u0.copy(), u0.copy()
        BACKENDS[0][1].cascade_1d(a, lo, hi, betas)
        BACKENDS[1][1].cascade_1d(b, lo, hi, betas)
        assert np.array_equal(a, b), "backend mismatch"
        print("backends agree bit-for-bit")


if __name__ == "__main__":
    main()
