"""Compare the compiled and pure-Python bitmask kernels.

    python benchmarks/bench_kernels.py [--sizes 12 14 16 18] [--repeat 3]

Each size uses a random graph with about two in-edges per vertex.  Both
backends must return identical results; the table reports best-of-repeat
wall time and the speedup.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from graphreg import _kernels_py

try:
    from graphreg import _kernels as _fast
except ImportError:
    _fast = None


def random_pred(rng: random.Random, n: int, degree: int = 2) -> list[int]:
    pred = [0] * n
    for v in range(n):
        for _ in range(rng.randint(0, degree)):
            pred[v] |= 1 << rng.randrange(n)
    return pred


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 12, 14, 16, 18])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    if _fast is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    print(f"{'kernel':<10} {'n':>3} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        pred = random_pred(rng, n)
        slow = _kernels_py.hs_scan(pred, n)
        fast = _fast.hs_scan(pred, n)
        assert slow == fast, f"hs_scan disagrees at n={n}"
        tp = best_time(lambda: _kernels_py.hs_scan(pred, n), args.repeat)
        tc = best_time(lambda: _fast.hs_scan(pred, n), args.repeat)
        print(f"{'hs_scan':<10} {n:>3} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
        seeds = [rng.getrandbits(n) for _ in range(2000)]
        assert [_kernels_py.closure_mask(pred, n, s) for s in seeds] == [
            _fast.closure_mask(pred, n, s) for s in seeds
        ]
        tp = best_time(lambda: [_kernels_py.closure_mask(pred, n, s) for s in seeds], args.repeat)
        tc = best_time(lambda: [_fast.closure_mask(pred, n, s) for s in seeds], args.repeat)
        print(f"{'closure':<10} {n:>3} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
