"""Time the numba and numpy Fourier-sum kernels on identical inputs.

    python benchmarks/bench_kernels.py [--terms 25000000] [--repeat 3]

The numba timing excludes the first (compiling) call.
"""

import argparse
import time

import numpy as np

from logtangent._kernels import HAVE_NUMBA, fourier_sum
from logtangent.logtan import fourier_period_table
from logtangent.numkernel import RationalAngle


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=25_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    for angle in (RationalAngle(1, 8), RationalAngle(1, 4), RationalAngle(2, 7)):
        period = fourier_period_table(angle)
        np_val, np_t = best_of(lambda: fourier_sum(period, args.terms, "numpy"), args.repeat)
        line = f"T-series {str(angle):>4}  terms={args.terms:,}  numpy {np_t:7.3f}s"
        if HAVE_NUMBA:
            fourier_sum(period, 10, "numba")  # compile
            nb_val, nb_t = best_of(lambda: fourier_sum(period, args.terms, "numba"), args.repeat)
            line += f"  numba {nb_t:7.3f}s  speedup {np_t / nb_t:5.1f}x  |diff| {abs(nb_val - np_val):.1e}"
        else:
            line += "  numba unavailable"
        print(line)


if __name__ == "__main__":
    main()
