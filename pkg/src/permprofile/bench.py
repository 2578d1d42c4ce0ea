"""Benchmark the compiled counting kernel against the pure-Python fallback.

Run with:  python -m permprofile.bench [--quick]
"""

from __future__ import annotations

import argparse
import time
from math import comb, factorial

import numpy as np

from . import kernels

CASES = [
    # (n, k, batch)
    (40, 2, 200),
    (60, 3, 50),
    (120, 3, 20),
    (40, 4, 20),
    (80, 4, 5),
    (30, 5, 5),
]


def _time_backend(impl, perms: np.ndarray, k: int, repeats: int) -> float:
    out = np.zeros((perms.shape[0], factorial(k)), dtype=np.int64)
    best = float("inf")
    for _ in range(repeats):
        out[:] = 0
        t0 = time.perf_counter()
        impl.profile_counts_batch(perms, k, out)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="fewer and smaller cases")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    cases = CASES[:2] if args.quick else CASES
    try:
        fast = kernels.backend_for("cython")
    except ImportError:
        fast = None
    slow = kernels.backend_for("python")

    print(f"active backend: {kernels.BACKEND}")
    print(f"{'n':>5} {'k':>2} {'batch':>6} {'subsets/perm':>13} "
          f"{'python':>12} {'cython':>12} {'speedup':>8}")
    for n, k, batch in cases:
        perms = np.stack([rng.permutation(n) for _ in range(batch)]).astype(np.int64)
        t_slow = _time_backend(slow, perms, k, repeats=1)
        if fast is not None:
            t_fast = _time_backend(fast, perms, k, repeats=3)
            ratio = f"{t_slow / t_fast:8.1f}x"
            fast_s = f"{t_fast:10.4f} s"
        else:
            ratio, fast_s = "     n/a", "   not built"
        print(f"{n:>5} {k:>2} {batch:>6} {comb(n, k):>13} "
              f"{t_slow:10.4f} s {fast_s} {ratio}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
