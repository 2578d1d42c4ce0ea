"""Shared oracles for the test suite.

The oracles here recompute quantities from first principles (itertools
enumeration, classical formulas) so the tested code paths never check
themselves.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np
import pytest


def brute_pattern_rank(values) -> int:
    """Lex rank of the relative order of distinct values, via sorting."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    sigma = [0] * len(values)
    for rank, i in enumerate(order, start=1):
        sigma[i] = rank
    ordered = sorted(permutations(range(1, len(values) + 1)))
    return ordered.index(tuple(sigma))


def brute_profile_counts(one_line, k) -> list[int]:
    """Profile counts via itertools, independent of the kernels package."""
    out = [0] * factorial(k)
    for sub in combinations(one_line, k):
        out[brute_pattern_rank(sub)] += 1
    return out


def brute_second_moment(k, n) -> list[list[Fraction]]:
    """E[P P^T] by direct averaging, independent of the moments module."""
    kk = factorial(k)
    total = [[Fraction(0)] * kk for _ in range(kk)]
    c = comb(n, k)
    for p in permutations(range(1, n + 1)):
        counts = brute_profile_counts(p, k)
        for a in range(kk):
            if not counts[a]:
                continue
            for b in range(kk):
                if counts[b]:
                    total[a][b] += Fraction(counts[a] * counts[b], c * c)
    f = factorial(n)
    return [[x / f for x in row] for row in total]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240801)
