#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Sizes mirror the heavy production paths: the marginal-likelihood evaluation
used inside the ML search (10,000 paths x 21 years), the posterior grid
(2,500 grid PDs x 1,000 paths), the Poisson tail average of the bound
solver, and the mixture-cdf integrand of the one-period estimators.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import importlib
import time

import numpy as np
from scipy.special import ndtri


def _timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def build_cases():
    rng = np.random.default_rng(1)
    T = 21
    n_t = rng.integers(1400, 3200, size=T).astype(np.float64)
    k_t = np.zeros(T)
    k_t[[1, 8, 9, 12, 18, 19]] = (1, 1, 4, 14, 14, 11)
    s_big = rng.standard_normal((10_000, T))
    s_small = rng.standard_normal((1_000, T))
    thr = float(ndtri(0.0017))
    thrs = ndtri(np.linspace(4e-5, 0.1, 2_500))
    y = np.linspace(-8.5, 8.5, 800)
    return [
        ("conditional_loglik 10k x 21",
         lambda k: k.conditional_loglik(s_big, n_t, k_t, thr, 0.18)),
        ("grid_loglik 2500 x 1k x 21",
         lambda k: k.grid_loglik(s_small, n_t, k_t, thrs, 0.18)),
        ("poisson_tail_mean 10k x 21",
         lambda k: k.poisson_tail_mean(s_big, n_t, thr, 0.18, 54)),
        ("binom_tail integrand 800 nodes",
         lambda k: k.binom_tail_given_factor(y, thr, 0.18, 1000, 1)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {}
    backends["numpy"] = importlib.import_module("lowdefault._kernels._numpy")
    try:
        backends["compiled"] = importlib.import_module("lowdefault._kernels._core")
    except ImportError:
        print("compiled backend not built (python setup.py build_ext --inplace)")

    cases = build_cases()
    width = max(len(name) for name, _ in cases)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        times = {b: _timeit(lambda k=kern: call(k), args.repeat)
                 for b, kern in backends.items()}
        line = f"{name:<{width}}  " + "  ".join(
            f"{1e3 * times[b]:>8.2f}ms" for b in backends)
        if len(times) == 2:
            line += f"  {times['numpy'] / times['compiled']:>7.1f}x"
        print(line)

    if len(backends) == 2:
        kn, kc = backends["numpy"], backends["compiled"]
        rng = np.random.default_rng(2)
        s = rng.standard_normal((2_000, 8))
        n_t = np.full(8, 125.0)
        k_t = np.zeros(8)
        k_t[-1] = 1.0
        a = kn.conditional_loglik(s, n_t, k_t, float(ndtri(0.001)), 0.18)
        b = kc.conditional_loglik(s, n_t, k_t, float(ndtri(0.001)), 0.18)
        print(f"\nbackend agreement: max |delta loglik| = {np.abs(a - b).max():.3e}")


if __name__ == "__main__":
    main()
