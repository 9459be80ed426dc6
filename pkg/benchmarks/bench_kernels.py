"""Time the numba and numpy paths of the brute-force kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes JIT compilation (or cache load); it is timed
separately and excluded from the steady-state numbers.
"""

import argparse
import time

import numpy as np

from nilcomplete import _kernels as K

A3 = np.array([[-1, 3], [0, -1]])
A5 = np.array([[-1, 5], [0, -1]])

CASES = [
    ("intertwiners m=5", lambda f: f(A3, A5, 5), K.intertwiners_numba, K.intertwiners_numpy),
    ("unit_square_table m=20", lambda f: f(20), K.unit_square_table_numba, K.unit_square_table_numpy),
    ("unit_roots m=20", lambda f: f(17, 20), K.unit_roots_numba, K.unit_roots_numpy),
]


def best_of(call, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        call()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<24}{'numba first':>13}{'numba':>11}{'numpy':>11}{'speedup':>9}")
    for name, call, fast, slow in CASES:
        if K.HAVE_NUMBA:
            t = time.perf_counter()
            call(fast)
            first = time.perf_counter() - t
            t_fast = best_of(lambda: call(fast), args.repeat)
        else:
            first = t_fast = float("nan")
        t_slow = best_of(lambda: call(slow), args.repeat)
        print(f"{name:<24}{first:>12.4f}s{t_fast:>10.4f}s{t_slow:>10.4f}s{t_slow / t_fast:>8.1f}x")


if __name__ == "__main__":
    main()
