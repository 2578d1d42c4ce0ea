"""Permutations, pattern extraction, k-profiles, and sampling.

A permutation of size n is stored in one-line notation with values 1..n.
The k entries of a permutation at any increasing positions induce a
*pattern*: the permutation in S_k with the same relative order.  The
*k-profile* counts every pattern over all C(n, k) position subsets; its
coordinates are indexed by the lexicographic order of S_k throughout the
package (123, 132, 213, 231, 312, 321 for k = 3).

Composition convention: products read left to right, (a * b)(i) = b(a(i)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from . import kernels
from .errors import BadPositions, DegeneratePoints, NotABijection, TooLarge

# plain subset enumeration is O(k * C(n,k)); refuse anything bigger
DEFAULT_SUBSET_BUDGET = 10**9


def pattern_rank(values) -> int:
    """Lexicographic rank in S_k of the pattern induced by distinct values."""
    k = len(values)
    rank = 0
    for i in range(k):
        smaller_after = sum(1 for j in range(i + 1, k) if values[j] < values[i])
        rank += smaller_after * factorial(k - 1 - i)
    return rank


def pattern_unrank(k: int, index: int) -> tuple[int, ...]:
    """Inverse of pattern_rank: the permutation of 1..k at this lex rank."""
    if not 0 <= index < factorial(k):
        raise ValueError(f"rank {index} out of range for k={k}")
    available = list(range(1, k + 1))
    out = []
    for i in range(k):
        f = factorial(k - 1 - i)
        q, index = divmod(index, f)
        out.append(available.pop(q))
    return tuple(out)


class Permutation:
    """A permutation of {1,...,n} in one-line notation."""

    __slots__ = ("_img",)

    def __init__(self, images):
        img = tuple(int(v) for v in images)
        n = len(img)
        if n == 0:
            raise NotABijection("empty permutation")
        seen = [False] * n
        for v in img:
            if not 1 <= v <= n or seen[v - 1]:
                raise NotABijection(f"{list(img)} is not a bijection on 1..{n}")
            seen[v - 1] = True
        self._img = img

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse whitespace- or comma-separated one-line notation (1-based)."""
        tokens = text.replace(",", " ").split()
        if not tokens:
            raise NotABijection("no values given")
        try:
            values = [int(t) for t in tokens]
        except ValueError as exc:
            raise NotABijection(f"non-integer value in {text!r}") from exc
        return cls(values)

    @property
    def images(self) -> tuple[int, ...]:
        return self._img

    @property
    def n(self) -> int:
        return len(self._img)

    def __call__(self, i: int) -> int:
        """Image of i under the permutation (1-based)."""
        return self._img[i - 1]

    def __len__(self):
        return len(self._img)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Left-to-right composition: apply self first, then other."""
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("sizes differ")
        return Permutation(other._img[v - 1] for v in self._img)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self._img):
            inv[v - 1] = i + 1
        return Permutation(inv)

    def reverse(self) -> "Permutation":
        """Positions reversed: the permutation read right to left."""
        return Permutation(self._img[::-1])

    def complement(self) -> "Permutation":
        """Values flipped: i -> n + 1 - self(i)."""
        return Permutation(self.n + 1 - v for v in self._img)

    def zero_based(self) -> np.ndarray:
        return np.asarray(self._img, dtype=np.int64) - 1

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self):
        return hash(self._img)

    def __str__(self):
        return " ".join(map(str, self._img))

    def __repr__(self):
        return f"Permutation({list(self._img)!r})"


@dataclass(frozen=True)
class PatternId:
    """A pattern in S_k identified by its lexicographic rank."""

    k: int
    index: int

    def perm(self) -> Permutation:
        return Permutation(pattern_unrank(self.k, self.index))

    @classmethod
    def of_values(cls, values) -> "PatternId":
        return cls(len(values), pattern_rank(values))

    def __str__(self):
        return "".join(map(str, pattern_unrank(self.k, self.index)))


def pattern_of(perm: Permutation, positions) -> PatternId:
    """The k-pattern induced by perm at strictly increasing positions (1-based)."""
    pos = tuple(int(a) for a in positions)
    if not pos:
        raise BadPositions("no positions given")
    if any(b <= a for a, b in zip(pos, pos[1:])):
        raise BadPositions(f"positions {pos} not strictly increasing")
    if pos[0] < 1 or pos[-1] > perm.n:
        raise BadPositions(f"positions {pos} out of range 1..{perm.n}")
    return PatternId.of_values([perm(a) for a in pos])


@dataclass(frozen=True)
class Profile:
    """Exact pattern counts of one permutation: counts[r] is the number of
    k-subsets inducing the pattern of lex rank r; they sum to C(n, k)."""

    k: int
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if sum(self.counts) != comb(self.n, self.k):
            raise ValueError("counts do not sum to C(n, k)")

    @property
    def subsets(self) -> int:
        return comb(self.n, self.k)

    def densities(self) -> list[Fraction]:
        c = self.subsets
        return [Fraction(x, c) for x in self.counts]

    def density_floats(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.float64) / self.subsets


def profile(perm: Permutation, k: int, budget: int = DEFAULT_SUBSET_BUDGET) -> Profile:
    """Exact k-profile by enumerating all C(n, k) position subsets."""
    n = perm.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k > kernels.MAX_K:
        raise TooLarge(f"k={k} beyond supported pattern size {kernels.MAX_K}")
    if comb(n, k) > budget:
        raise TooLarge(
            f"C({n},{k}) = {comb(n, k)} exceeds the subset budget {budget}; "
            "use profile_sampled for an estimate"
        )
    counts = kernels.profile_counts(perm.zero_based(), k)
    return Profile(k, n, tuple(int(c) for c in counts))


@dataclass(frozen=True)
class SampledProfile:
    """Unbiased density estimates from uniformly sampled k-subsets.

    Always flagged approximate unless produced with the exhaustive flag,
    in which case it equals the exact profile densities.
    """

    k: int
    n: int
    samples: int
    densities_hat: tuple[float, ...]
    stderr: tuple[float, ...]
    exhaustive: bool

    @property
    def approximate(self) -> bool:
        return not self.exhaustive


def profile_sampled(
    perm: Permutation,
    k: int,
    samples: int,
    rng: np.random.Generator,
    exhaustive: bool = False,
) -> SampledProfile:
    """Estimate pattern densities from `samples` uniform k-subsets.

    Each subset's pattern indicator is an unbiased estimator of the density
    vector.  With exhaustive=True the estimate is replaced by the exact
    profile (samples is ignored beyond validation).
    """
    n = perm.n
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if exhaustive:
        exact = profile(perm, k)
        dens = tuple(float(x) for x in exact.density_floats())
        return SampledProfile(k, n, exact.subsets, dens, (0.0,) * len(dens), True)
    if not 1 <= k <= min(n, kernels.MAX_K):
        raise ValueError(f"need 1 <= k <= min(n, {kernels.MAX_K})")
    counts = np.zeros(factorial(k), dtype=np.int64)
    values = np.asarray(perm.images, dtype=np.int64)
    for _ in range(samples):
        pos = np.sort(rng.choice(n, size=k, replace=False))
        counts[pattern_rank(values[pos])] += 1
    p_hat = counts / samples
    stderr = np.sqrt(p_hat * (1.0 - p_hat) / samples)
    return SampledProfile(k, n, samples, tuple(p_hat), tuple(stderr), False)


def sample_uniform(n: int, rng: np.random.Generator) -> Permutation:
    """A uniform random permutation of size n (Fisher-Yates shuffle)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation(rng.permutation(n) + 1)


def perm_of_points(points) -> Permutation:
    """The permutation induced by a generic set of plane points.

    For points (y_i, z_i) with all y distinct and all z distinct, returns
    the unique pi such that the point with the i-th smallest y has the
    pi(i)-th smallest z.  Symmetric under reordering the input.
    """
    pts = [(float(y), float(z)) for y, z in points]
    if not pts:
        raise DegeneratePoints("no points given")
    ys = [y for y, _ in pts]
    zs = [z for _, z in pts]
    if len(set(ys)) != len(ys):
        raise DegeneratePoints("tied y-coordinates")
    if len(set(zs)) != len(zs):
        raise DegeneratePoints("tied z-coordinates")
    z_rank = {z: r + 1 for r, z in enumerate(sorted(zs))}
    by_y = sorted(pts)
    return Permutation(z_rank[z] for _, z in by_y)


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    """All of S_n in lexicographic order (n small)."""
    from itertools import permutations as iperm

    return tuple(Permutation(p) for p in iperm(range(1, n + 1)))


def subset_average_density(perm: Permutation, k: int) -> list[Fraction]:
    """Average of the per-subset pattern indicator over all k-subsets.

    Test oracle for the sampling estimator's unbiasedness; equals the exact
    densities by definition, computed here without the counting kernel.
    """
    n = perm.n
    total = [0] * factorial(k)
    for sub in combinations(perm.images, k):
        total[pattern_rank(sub)] += 1
    c = comb(n, k)
    return [Fraction(t, c) for t in total]
