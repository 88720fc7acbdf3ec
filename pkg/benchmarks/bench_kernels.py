"""Time the numba and numpy kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The first numba call per signature includes compilation, so it is run once
as a warm-up before timing.
"""

import argparse
import time

import numpy as np

from lsb2adic import _kernels
from lsb2adic.gf import field_for, mul_matrix, trace_vector
from lsb2adic.seq import lsb_of

MSEQ_CASES = [(3, 10), (7, 6), (31, 4), (5, 9)]
AC_CASES = [(3, 7), (7, 4), (31, 2), (5, 6)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not available (or disabled); only the numpy column is meaningful")

    print(f"{'kernel':<8} {'p':>3} {'n':>3} {'N':>9} {'numba s':>10} {'numpy s':>10} {'ratio':>8}")
    for p, n in MSEQ_CASES:
        c = field_for(p, n)
        args_ = (mul_matrix(c, c.alpha), trace_vector(c), p, c.N)
        _kernels.mseq_numba(*args_)
        tn = best_of(lambda: _kernels.mseq_numba(*args_), args.repeat)
        tp = best_of(lambda: _kernels.mseq_numpy(*args_), args.repeat)
        assert np.array_equal(_kernels.mseq_numba(*args_), _kernels.mseq_numpy(*args_))
        print(f"{'mseq':<8} {p:>3} {n:>3} {c.N:>9} {tn:>10.4f} {tp:>10.4f} {tp / tn:>8.1f}")

    for p, n in AC_CASES:
        bits = lsb_of(field_for(p, n)).bits
        _kernels.ac_profile_numba(bits)
        tn = best_of(lambda: _kernels.ac_profile_numba(bits), args.repeat)
        tp = best_of(lambda: _kernels.ac_profile_numpy(bits), args.repeat)
        print(f"{'ac':<8} {p:>3} {n:>3} {bits.size:>9} {tn:>10.4f} {tp:>10.4f} {tp / tn:>8.1f}")


if __name__ == "__main__":
    main()
