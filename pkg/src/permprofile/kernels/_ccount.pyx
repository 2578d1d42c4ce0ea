# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pattern-counting kernel.

Enumerates the k-subsets of positions with an explicit combination
odometer and maintains the lexicographic pattern rank incrementally: when
a position is appended at depth d, its contribution to the rank is
sum over earlier depths j of (k-1-j)! * [value at j > new value], an O(k)
update per enumerated node.  Counting a full profile is O(k * C(n, k)).
"""

import numpy as np

cimport numpy as cnp

MAX_K = 7


cdef void _count_row(const cnp.int64_t* perm, Py_ssize_t n, int k,
                     cnp.int64_t* counts, const cnp.int64_t* wt) noexcept nogil:
    cdef Py_ssize_t pos[8]
    cdef cnp.int64_t vals[8]
    cdef cnp.int64_t rp[8]
    cdef int d, j
    cdef Py_ssize_t p
    cdef cnp.int64_t v, delta

    d = 0
    pos[0] = 0
    while d >= 0:
        p = pos[d]
        if p > n - k + d:
            d -= 1
            if d >= 0:
                pos[d] += 1
            continue
        v = perm[p]
        delta = 0
        for j in range(d):
            if vals[j] > v:
                delta += wt[j]
        vals[d] = v
        rp[d] = (rp[d - 1] + delta) if d > 0 else delta
        if d == k - 1:
            counts[rp[d]] += 1
            pos[d] += 1
        else:
            pos[d + 1] = p + 1
            d += 1


def profile_counts(cnp.int64_t[::1] perm, int k, cnp.int64_t[::1] out):
    """Count induced k-patterns of one permutation into out (int64[k!])."""
    cdef cnp.int64_t wt[8]
    cdef int i
    cdef cnp.int64_t f
    if not (1 <= k <= MAX_K) or k > perm.shape[0]:
        raise ValueError("need 1 <= k <= min(n, 7)")
    f = 1
    for i in range(k):
        wt[k - 1 - i] = f
        f *= i + 1
    with nogil:
        _count_row(&perm[0], perm.shape[0], k, &out[0], wt)


def profile_counts_batch(cnp.int64_t[:, ::1] perms, int k, cnp.int64_t[:, ::1] out):
    """Row-wise profile_counts over a batch of permutations."""
    cdef cnp.int64_t wt[8]
    cdef int i
    cdef cnp.int64_t f
    cdef Py_ssize_t b, n = perms.shape[1]
    if not (1 <= k <= MAX_K) or k > n:
        raise ValueError("need 1 <= k <= min(n, 7)")
    f = 1
    for i in range(k):
        wt[k - 1 - i] = f
        f *= i + 1
    with nogil:
        for b in range(perms.shape[0]):
            _count_row(&perms[b, 0], n, k, &out[b, 0], wt)
