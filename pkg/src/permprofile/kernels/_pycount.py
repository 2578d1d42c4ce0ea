"""Pure-Python pattern-counting kernel.

This is the fallback used when the compiled extension is unavailable, and
it deliberately takes the simple route: walk every k-subset of positions
with itertools and rank the induced pattern from scratch.  It is the
independent reference the compiled odometer is checked against.
"""

from itertools import combinations
from math import factorial

import numpy as np

MAX_K = 7


def profile_counts(perm: np.ndarray, k: int, out: np.ndarray) -> None:
    """Count induced k-patterns of one permutation.

    perm: int64 values (any distinct integers) in position order.
    out: int64[k!] accumulator, assumed zeroed by the caller.
    """
    weights = [factorial(k - 1 - i) for i in range(k)]
    values = perm.tolist()
    for sub in combinations(values, k):
        rank = 0
        for i in range(k):
            vi = sub[i]
            smaller_after = 0
            for j in range(i + 1, k):
                if sub[j] < vi:
                    smaller_after += 1
            rank += smaller_after * weights[i]
        out[rank] += 1


def profile_counts_batch(perms: np.ndarray, k: int, out: np.ndarray) -> None:
    """Row-wise profile_counts over a batch of permutations."""
    for b in range(perms.shape[0]):
        profile_counts(perms[b], k, out[b])
