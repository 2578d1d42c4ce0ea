"""Exact second moments of the random k-profile and their diagonalization.

The pipeline: average the outer product of profile densities over all of
S_n for n = k, ..., 2k (exact rationals); interpolate each entry of
C(n,k) * E[P P^T] as a polynomial in n of degree <= k; conjugate by the
orthogonal basis of matrix elements; then read off the limit of
n^((r+s)/2) * entry / C(n,k) for blocks r, s purely by degree arithmetic.
The result is an exactly-verified limit matrix: off-diagonal entries must
vanish and diagonal entries must be strictly positive, with no floating
point anywhere.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice, permutations as iter_permutations
from math import comb, factorial
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DegreeViolation, Diverges, TooLarge
from .qfield import ZERO, QNum, qdot
from .ratpoly import RatPoly, binomial_poly, lagrange
from .reps import BasisMatrix, build_basis

# exhaustive S_n enumeration cost grows like n! * C(n,k); n = 11, 12 are
# hours of work and sit behind the long-run flag, beyond that is refused
DEFAULT_N_CAP = 10
LONG_RUN_N_CAP = 12

_CHUNK_ROWS = 1 << 15

CACHE_ENV = "PERMPROFILE_CACHE_DIR"


def _cache_path(cache_dir, k: int, n: int) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    if not cache_dir:
        return None
    return Path(cache_dir) / f"moment_gram_k{k}_n{n}.json"


def _perm_chunks(n: int, chunk: int):
    stream = iter_permutations(range(n))
    while True:
        block = list(islice(stream, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64)


def _gram_chunk(rows: np.ndarray, k: int, gram: np.ndarray) -> None:
    counts = kernels.profile_counts_batch(rows, k).astype(np.float64)
    gram += counts.T @ counts


def _gram_for_prefix(args) -> np.ndarray:
    k, n, first = args
    kk = factorial(k)
    gram = np.zeros((kk, kk), dtype=np.float64)
    rest = [v for v in range(n) if v != first]
    stream = iter_permutations(rest)
    while True:
        block = list(islice(stream, _CHUNK_ROWS))
        if not block:
            break
        rows = np.empty((len(block), n), dtype=np.int64)
        rows[:, 0] = first
        rows[:, 1:] = block
        _gram_chunk(rows, k, gram)
    return gram


def profile_gram(k: int, n: int, threads: int = 1) -> np.ndarray:
    """Sum over all of S_n of the outer product of profile count vectors.

    Accumulated in float64 BLAS products and returned as exact int64: every
    intermediate value is an integer below n! * C(n,k)^2 < 2^53 for the
    supported range, so the float arithmetic is exact.
    """
    assert factorial(n) * comb(n, k) ** 2 < 2**53
    kk = factorial(k)
    if threads > 1 and n >= 8:
        from concurrent.futures import ProcessPoolExecutor

        gram = np.zeros((kk, kk), dtype=np.float64)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_gram_for_prefix, [(k, n, f) for f in range(n)]):
                gram += part
    else:
        gram = np.zeros((kk, kk), dtype=np.float64)
        for rows in _perm_chunks(n, _CHUNK_ROWS):
            _gram_chunk(rows, k, gram)
    out = gram.astype(np.int64)
    assert (out == gram).all(), "float accumulation left the exact-integer range"
    return out


_GRAM_MEMO: dict[tuple[int, int], np.ndarray] = {}


def _load_or_compute_gram(k, n, cache_dir, threads) -> np.ndarray:
    if (k, n) in _GRAM_MEMO:
        return _GRAM_MEMO[(k, n)]
    path = _cache_path(cache_dir, k, n)
    if path is not None and path.exists():
        data = json.loads(path.read_text())
        if data.get("k") == k and data.get("n") == n:
            gram = np.asarray(data["gram"], dtype=np.int64)
            _GRAM_MEMO[(k, n)] = gram
            return gram
    gram = profile_gram(k, n, threads=threads)
    _GRAM_MEMO[(k, n)] = gram
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps({"k": k, "n": n, "gram": gram.tolist()}) + "\n"
        )
    return gram


def exact_second_moment(
    k: int,
    n: int,
    long_run: bool = False,
    cache_dir: str | None = None,
    threads: int = 1,
) -> list[list[Fraction]]:
    """E[P P^T] for a uniform permutation of S_n, as exact rationals.

    Computed directly by averaging the density outer product over all n!
    permutations; denominators divide n! * C(n,k)^2.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k > kernels.MAX_K:
        raise TooLarge(f"k={k} beyond supported pattern size {kernels.MAX_K}")
    cap = LONG_RUN_N_CAP if long_run else DEFAULT_N_CAP
    if n > cap:
        raise TooLarge(
            f"n={n} exceeds the enumeration cap {cap}"
            + ("" if long_run else " (pass long_run=True for n <= 12)")
        )
    gram = _load_or_compute_gram(k, n, cache_dir, threads)
    den = factorial(n) * comb(n, k) ** 2
    return [[Fraction(int(x), den) for x in row] for row in gram]


@dataclass(frozen=True)
class MomentMatrix:
    """C(n,k) * E[P P^T] with every entry an exact polynomial in n."""

    k: int
    entries: tuple[tuple[RatPoly, ...], ...]

    @property
    def size(self) -> int:
        return factorial(self.k)

    def evaluate(self, n: int) -> list[list[Fraction]]:
        return [[p(n) for p in row] for row in self.entries]

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "entries": [
                [p.to_strings() for p in row] for row in self.entries
            ],
        }


def interpolate_moments(
    k: int,
    long_run: bool = False,
    cache_dir: str | None = None,
    threads: int = 1,
) -> MomentMatrix:
    """Entrywise polynomial extrapolation of C(n,k) * E[P P^T].

    Values at the k+1 nodes n = k, ..., 2k determine each entry exactly,
    because it is a polynomial in n of degree at most k.  A higher-degree
    interpolant signals a bug upstream (DegreeViolation).
    """
    nodes = list(range(k, 2 * k + 1))
    grams = {
        n: _load_or_compute_gram(k, n, cache_dir, threads)
        for n in nodes
        if _check_node_cap(k, n, long_run)
    }
    kk = factorial(k)
    rows = []
    for a in range(kk):
        row = []
        for b in range(kk):
            pts = [
                (n, Fraction(int(grams[n][a, b]), factorial(n) * comb(n, k)))
                for n in nodes
            ]
            poly = lagrange(pts)
            if poly.degree > k:
                raise DegreeViolation(
                    f"entry ({a},{b}) interpolated to degree {poly.degree} > {k}"
                )
            row.append(poly)
        rows.append(tuple(row))
    return MomentMatrix(k, tuple(rows))


def _check_node_cap(k: int, n: int, long_run: bool) -> bool:
    cap = LONG_RUN_N_CAP if long_run else DEFAULT_N_CAP
    if n > cap:
        raise TooLarge(
            f"interpolating k={k} needs S_{n} enumeration beyond the cap {cap}"
            + ("" if long_run else "; rerun with the long-run flag")
        )
    return True


@dataclass(frozen=True)
class ConjugatedMoments:
    """U^T (C(n,k) E[P P^T]) U with exact polynomial entries, block-tagged.

    entry (a, b) pairs basis columns from blocks (block[a], block[b]); its
    normalized limit carries the symbolic factor n^((r+s)/2), so no radical
    arithmetic in n is ever performed.
    """

    k: int
    labels: tuple
    block: tuple[int, ...]
    entries: tuple[tuple[RatPoly, ...], ...]


def conjugate_and_normalize(moments: MomentMatrix, basis: BasisMatrix) -> ConjugatedMoments:
    """Conjugate the polynomial moment matrix by the orthogonal basis."""
    if basis.k != moments.k:
        raise ValueError("basis and moments have different k")
    kk = moments.size
    max_deg = max(
        (p.degree for row in moments.entries for p in row if p), default=-1
    )
    by_degree = []
    for d in range(max_deg + 1):
        w_d = [
            [moments.entries[a][b].coefficient(d) for b in range(kk)]
            for a in range(kk)
        ]
        if all(not c for row in w_d for c in row):
            by_degree.append(None)
            continue
        # T = W_d U, then Q_d = U^T T
        t_cols = [
            [qdot(w_d[s], basis.columns[c]) for s in range(kk)] for c in range(kk)
        ]
        q_d = [
            [qdot(basis.columns[a], t_cols[b]) for b in range(kk)]
            for a in range(kk)
        ]
        by_degree.append(q_d)
    entries = tuple(
        tuple(
            RatPoly(
                [
                    (by_degree[d][a][b] if by_degree[d] is not None else ZERO)
                    for d in range(max_deg + 1)
                ]
            )
            for b in range(kk)
        )
        for a in range(kk)
    )
    return ConjugatedMoments(moments.k, basis.labels, basis.block, entries)


def normalized_limit(poly: RatPoly, r: int, s: int, k: int) -> QNum:
    """lim_n n^((r+s)/2) * poly(n) / C(n,k), exactly, by degree arithmetic.

    Zero when deg < k - (r+s)/2; k! times the top coefficient when equal
    (only possible for even r+s); Diverges beyond, which would contradict
    the scaling the whole construction guarantees, i.e. a bug.
    """
    deg = poly.degree
    if deg < 0:
        return ZERO
    margin = 2 * k - (r + s)  # = 2 * max allowed degree
    if 2 * deg < margin:
        return ZERO
    if 2 * deg == margin:
        c = poly.coeffs[deg]
        if not isinstance(c, QNum):
            c = QNum.from_rational(c)
        return factorial(k) * c
    raise Diverges(
        f"degree {deg} entry in blocks ({r},{s}) exceeds the scaling bound"
    )


@dataclass(frozen=True)
class DiagonalLimit:
    label: tuple
    block: int
    limit: QNum
    positive: bool
    rational: bool


@dataclass(frozen=True)
class LimitReport:
    """Exact verdict on the limiting second-moment matrix of the normalized
    profile: PASS iff every off-diagonal limit is structurally zero and
    every diagonal limit is strictly positive.  No tolerances anywhere."""

    k: int
    passed: bool
    diagonal: tuple[DiagonalLimit, ...]
    violations: tuple[dict, ...]
    checked_pairs: int

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "result": "PASS" if self.passed else "FAIL",
            "checked_pairs": self.checked_pairs,
            "diagonal": [
                {
                    "partition": list(d.label[0]),
                    "i": d.label[1],
                    "j": d.label[2],
                    "block": d.block,
                    "limit": str(d.limit),
                    "limit_json": d.limit.to_json_dict(),
                    "positive": d.positive,
                    "rational": d.rational,
                }
                for d in self.diagonal
            ],
            "offdiagonal": (
                {"certificate": "all off-diagonal limits exactly zero"}
                if not self.violations
                else {"counterexamples": list(self.violations)}
            ),
        }


def verify_diagonalization(
    k: int,
    long_run: bool = False,
    cache_dir: str | None = None,
    threads: int = 1,
    generator_file: str | None = None,
) -> LimitReport:
    """Run the full exact pipeline for one k and report the limit matrix.

    Also flags, per diagonal entry, whether the limit is rational (no
    radical part); empirically they all are, but the report only asserts
    positivity and off-diagonal vanishing.
    """
    basis = build_basis(k, generator_file)
    moments = interpolate_moments(k, long_run=long_run, cache_dir=cache_dir, threads=threads)
    conj = conjugate_and_normalize(moments, basis)
    kk = moments.size
    diag = []
    violations = []
    checked = 0
    for a in range(kk):
        for b in range(a, kk):
            r, s = conj.block[a], conj.block[b]
            limit = normalized_limit(conj.entries[a][b], r, s, k)
            checked += 1
            if a == b:
                diag.append(
                    DiagonalLimit(
                        label=conj.labels[a],
                        block=r,
                        limit=limit,
                        positive=limit.sign() == 1,
                        rational=limit.is_rational(),
                    )
                )
            elif not limit.is_zero():
                violations.append(
                    {
                        "row": list(map(str, conj.labels[a])),
                        "col": list(map(str, conj.labels[b])),
                        "limit": str(limit),
                    }
                )
    passed = not violations and all(d.positive for d in diag)
    return LimitReport(k, passed, tuple(diag), tuple(violations), checked)


def cov_limit(
    k: int,
    long_run: bool = False,
    cache_dir: str | None = None,
    threads: int = 1,
) -> list[list[Fraction]]:
    """The limit of n * cov[P] as an exact rational matrix.

    Extracted as k! times the degree-(k-1) coefficient of the centered
    polynomial matrix C(n,k) (E[P P^T] - u u^T); the degree-k terms cancel
    exactly, which is checked.
    """
    moments = interpolate_moments(k, long_run=long_run, cache_dir=cache_dir, threads=threads)
    mean_sq = binomial_poly(k).scale(Fraction(1, factorial(k) ** 2))
    kk = moments.size
    out = []
    for a in range(kk):
        row = []
        for b in range(kk):
            centered = moments.entries[a][b] - mean_sq
            if centered.degree > k - 1:
                raise Diverges(f"centered entry ({a},{b}) has degree {centered.degree}")
            row.append(factorial(k) * centered.coefficient(k - 1))
        out.append(row)
    return out


def rational_rank(matrix: list[list[Fraction]]) -> int:
    """Rank of an exact rational matrix by Gaussian elimination."""
    m = [list(map(Fraction, row)) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    col = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col]:
                factor = m[r][col]
                m[r] = [x - factor * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def pair_union_second_moment(k: int, n: int) -> list[list[Fraction]]:
    """Independent oracle for E[N N^T]: sum over pairs of k-subsets.

    For each pair (A, B) of position subsets the joint pattern probability
    is found by enumerating the |A u B|! relative orders of the union.
    Feasible only for small k and n; used to cross-check the S_n
    enumeration route.
    """
    from itertools import combinations

    kk = factorial(k)
    total = [[Fraction(0)] * kk for _ in range(kk)]
    positions = list(range(n))
    from .perms import pattern_rank

    for sub_a in combinations(positions, k):
        for sub_b in combinations(positions, k):
            union = sorted(set(sub_a) | set(sub_b))
            m = len(union)
            where = {p: i for i, p in enumerate(union)}
            idx_a = [where[p] for p in sub_a]
            idx_b = [where[p] for p in sub_b]
            for omega in iter_permutations(range(1, m + 1)):
                ra = pattern_rank([omega[i] for i in idx_a])
                rb = pattern_rank([omega[i] for i in idx_b])
                total[ra][rb] += Fraction(1, factorial(m))
    c2 = comb(n, k) ** 2
    return [[x / c2 for x in row] for row in total]
