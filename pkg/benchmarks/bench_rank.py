"""Modular rank: numba kernel vs the pure-numpy fallback.

Run: python3 benchmarks/bench_rank.py [size ...]
"""

import sys
import time

import numpy as np

from hairycalc import _kernels
from hairycalc.linalg import random_primes


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main(sizes):
    p = random_primes(1, seed=7)[0]
    rng = np.random.default_rng(0)
    # warm up the jit so compile time is not charged to the first size
    _kernels.rank_mod(np.eye(3, dtype=np.int64), p, backend="numba")
    print("%6s %6s %12s %12s %8s" % ("size", "rank", "numba_s", "numpy_s", "speedup"))
    for n in sizes:
        # rank-deficient: last quarter of rows are combinations of the others
        a = rng.integers(0, p, size=(n, n), dtype=np.int64)
        k = n - n // 4
        mix = rng.integers(0, 5, size=(n - k, k), dtype=np.int64)
        a[k:] = (mix @ a[:k]) % p
        r1, t1 = timed(_kernels.rank_mod, a, p, "numba")
        r2, t2 = timed(_kernels.rank_mod, a, p, "numpy")
        if r1 != r2:
            raise SystemExit("backends disagree at size %d: %d vs %d" % (n, r1, r2))
        print("%6d %6d %12.5f %12.5f %8.1f" % (n, r1, t1, t2, t2 / t1 if t1 else float("nan")))


if __name__ == "__main__":
    main([int(x) for x in sys.argv[1:]] or [50, 100, 200, 400])
