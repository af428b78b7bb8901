#!/usr/bin/env python3
"""Benchmark the numba-compiled hot kernels against the pure-numpy fallback.

Run: python benchmarks/bench_backends.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from curveops import _impl_numpy

try:
    from curveops import _impl_numba
except ImportError:
    _impl_numba = None


def timeit(fn, repeats):
    fn()  # warmup (JIT compile / cache load)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    rng = np.random.default_rng(42)
    xs = rng.uniform(-6.0, 6.0, 1_000_000)
    ts_small = np.linspace(0.01, 1.0, 400)
    ts_probe = np.linspace(0.0, 1.0, 50)
    n = 500
    samples_spline = np.sin(3.0 * np.arange(-3, n + 4) / n)
    samples_bern = np.sin(3.0 * np.arange(n + 1) / n)
    samples_pois = np.sin(3.0 * np.arange(0, 2 * n) / n)

    yield ("bspline3 values, 1e6 pts",
           lambda impl: impl.bspline_values(3, xs))
    yield ("fejer values, 1e6 pts",
           lambda impl: impl.fejer_values(xs))
    yield ("M3 sampling dot, n=500, 400 pts",
           lambda impl: impl.sampling_dot(samples_spline, -3, n, ts_small, 1.5,
                                          _impl_numpy.KERNEL_BSPLINE, 3))
    yield ("fejer partition sums, win=4e5, 50 pts",
           lambda impl: impl.kernel_window_sums(_impl_numpy.KERNEL_FEJER, 0,
                                                ts_probe, 4.0e5))

    def poisson(impl):
        klo, khi, _ = impl.poisson_windows(n, ts_small, 1e-10)
        impl.poisson_dot(samples_pois, 0, n, ts_small, klo, khi)

    def negbin(impl):
        klo, khi, _ = impl.negbin_windows(n, ts_small, 1e-10)
        impl.negbin_dot(samples_pois, 0, n, ts_small, klo, khi)

    yield ("poisson weights, n=500, 400 pts", poisson)
    yield ("negbin weights, n=500, 400 pts", negbin)
    yield ("bernstein dot, n=500, 400 pts",
           lambda impl: impl.bernstein_dot(samples_bern, n, ts_small))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"{'case':44s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for label, fn in cases():
        t_np = timeit(lambda: fn(_impl_numpy), args.repeats)
        if _impl_numba is None:
            print(f"{label:44s} {t_np * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        t_nb = timeit(lambda: fn(_impl_numba), args.repeats)
        print(f"{label:44s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms "
              f"{t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
