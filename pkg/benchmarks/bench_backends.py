"""Timing comparison of the compiled and pure-numpy backends.

The package selects its hot kernels at import time: numba-compiled
loops when numba is importable and NLFIELD_NO_NUMBA is unset, numpy
fallbacks otherwise.  This script runs both variants of each kernel in
one process (dispatch tables are bypassed) and reports per-call times,
plus the FFT convolution for scale.

Usage: python benchmarks/bench_backends.py [--n 4096] [--repeat 200]
"""

import argparse
import time

import numpy as np

from nlfield import Grid1D, WeightFunction, WeightedField, make_bump_kernel
from nlfield import _accel
from nlfield.kernel import convolve_fast
from nlfield.weighted_space import quad_weights


def timeit(fn, repeat):
    fn()  # warm up (numba compiles here)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4096, help="grid points")
    ap.add_argument("--repeat", type=int, default=200, help="timed repetitions")
    args = ap.parse_args()

    grid = Grid1D(50.0, args.n)
    weight = WeightFunction.cauchy()
    kernel = make_bump_kernel(grid)
    rng = np.random.default_rng(0)
    u = rng.normal(size=args.n)
    w = quad_weights(weight, grid)
    field = WeightedField(grid, weight, u)

    stack_a = rng.normal(size=(8, args.n))
    stack_b = rng.normal(size=(8, args.n))

    pairs = [
        ("direct convolution",
         lambda: _accel.conv_direct_numba(u, kernel.samples, grid.spacing),
         lambda: _accel.conv_direct_numpy(u, kernel.samples, grid.spacing)),
        ("weighted p-power sum",
         lambda: _accel.wpow_sum_numba(np.abs(u), w, 2.0),
         lambda: _accel.wpow_sum_numpy(np.abs(u), w, 2.0)),
        ("pairwise Lp matrix (8x8)",
         lambda: _accel.pairwise_lp_numba(stack_a, stack_b, w, 2.0),
         lambda: _accel.pairwise_lp_numpy(stack_a, stack_b, w, 2.0)),
    ]

    print(f"n = {args.n}, repeat = {args.repeat}, numba available: {_accel.HAVE_NUMBA}")
    print(f"{'kernel':28s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name, fast, slow in pairs:
        if _accel.HAVE_NUMBA:
            t_fast = timeit(fast, args.repeat)
        else:
            t_fast = float("nan")
        t_slow = timeit(slow, args.repeat)
        ratio = t_slow / t_fast if t_fast > 0 else float("nan")
        print(f"{name:28s} {t_fast * 1e6:10.1f}us {t_slow * 1e6:10.1f}us {ratio:8.1f}x")

    t_fft = timeit(lambda: convolve_fast(kernel, field), args.repeat)
    print(f"{'fft convolution (reference)':28s} {'':>12s} {t_fft * 1e6:10.1f}us")


if __name__ == "__main__":
    main()
