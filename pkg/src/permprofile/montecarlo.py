"""Stochastic checks of the profile's per-block scaling and decorrelation.

Beyond exhaustive-enumeration sizes, projections of the random profile are
estimated by sampling uniform permutations.  Sampling is reproducible and
order-independent: sample i draws from its own counter-based stream keyed
(master seed, i), so the result is byte-identical for a fixed seed no
matter how samples are chunked over threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb, log
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InsufficientData, TooLarge

# per-sample profile cost cap: keeps a full scaling run in minutes
DEFAULT_SAMPLE_BUDGET = 10**7

# host sizes chosen so C(n, k) stays under the budget
DEFAULT_GRIDS = {
    2: (20, 40, 80, 160),
    3: (20, 40, 80, 160),
    4: (15, 30, 60, 120),
    5: (10, 20, 40, 60),
    6: (10, 20, 30, 40),
}

_CHUNK = 2048
_MASK64 = (1 << 64) - 1


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """The dedicated random stream of one sample (counter-based split)."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _check_budget(k: int, n: int, budget: int) -> None:
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    cost = comb(n, k)
    if cost > budget:
        raise TooLarge(
            f"profile cost C({n},{k}) = {cost} exceeds the per-sample budget {budget}"
        )


def projection_samples(
    k: int,
    vectors: np.ndarray,
    n: int,
    samples: int,
    seed: int,
    threads: int = 1,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> np.ndarray:
    """Per-sample values of <v, P> for each row v of ``vectors``.

    Returns a (samples, len(vectors)) float array whose row i comes from
    the profile of the uniform permutation drawn by stream (seed, i).
    """
    _check_budget(k, n, budget)
    vecs = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    if vecs.shape[1] != math.factorial(k):
        raise ValueError(f"projection vectors must have length {math.factorial(k)}")
    out = np.empty((samples, vecs.shape[0]), dtype=np.float64)
    vt = vecs.T
    subsets = float(comb(n, k))

    def run_range(lo: int, hi: int) -> None:
        perms = np.empty((hi - lo, n), dtype=np.int64)
        for i in range(lo, hi):
            perms[i - lo] = sample_rng(seed, i).permutation(n)
        counts = kernels.profile_counts_batch(perms, k)
        # divide after the dot: integer-valued sums stay exact in float64,
        # so constant projections (e.g. the all-ones direction) come out
        # bit-identical across samples
        out[lo:hi] = (counts.astype(np.float64) @ vt) / subsets

    bounds = list(range(0, samples, _CHUNK)) + [samples]
    ranges = [(lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda r: run_range(*r), ranges))
    else:
        for lo, hi in ranges:
            run_range(lo, hi)
    return out


@dataclass(frozen=True)
class MomentEstimate:
    """Empirical mean and second moment of one profile projection."""

    k: int
    n: int
    samples: int
    seed: int
    mean: float
    second_moment: float
    stderr: float  # standard error of the second moment

    @property
    def rel_stderr(self) -> float:
        if self.second_moment == 0.0:
            return 0.0 if self.stderr == 0.0 else float("inf")
        return self.stderr / abs(self.second_moment)


def estimate_projection_moment(
    k: int,
    v: Sequence[float],
    n: int,
    samples: int,
    seed: int,
    threads: int = 1,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> MomentEstimate:
    """Empirical moments of <v, P> over independent uniform permutations."""
    if samples < 2:
        raise ValueError("need samples >= 2")
    x = projection_samples(k, np.asarray(v, dtype=np.float64), n, samples, seed,
                           threads=threads, budget=budget)[:, 0]
    sq = x * x
    return MomentEstimate(
        k=k,
        n=n,
        samples=samples,
        seed=seed,
        mean=float(x.mean()),
        second_moment=float(sq.mean()),
        stderr=float(sq.std(ddof=1) / math.sqrt(samples)),
    )


@dataclass(frozen=True)
class McConfig:
    """One scaling run: a projection vector, a host-size grid, a seed."""

    k: int
    v: tuple[float, ...]
    n_grid: tuple[int, ...]
    samples: int
    seed: int
    r_target: int | None = None
    threads: int = 1
    budget: int = DEFAULT_SAMPLE_BUDGET

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ValueError("n_grid must be strictly increasing")
        if self.samples < 2:
            raise ValueError("need samples >= 2")


@dataclass(frozen=True)
class ScalingReport:
    """Per-size moments of one projection plus the fitted log-log slope."""

    config: McConfig
    rows: tuple[MomentEstimate, ...]
    slope: float
    slope_stderr: float
    used_sizes: tuple[int, ...]

    @property
    def ci95(self) -> tuple[float, float]:
        return (self.slope - 1.96 * self.slope_stderr, self.slope + 1.96 * self.slope_stderr)

    def to_json_dict(self) -> dict:
        lo, hi = self.ci95
        return {
            "k": self.config.k,
            "seed": self.config.seed,
            "samples": self.config.samples,
            "target_exponent": (
                -self.config.r_target if self.config.r_target is not None else None
            ),
            "rows": [
                {
                    "n": r.n,
                    "mean": r.mean,
                    "second_moment": r.second_moment,
                    "stderr": r.stderr,
                }
                for r in self.rows
            ],
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "ci95": [lo, hi],
            "used_sizes": list(self.used_sizes),
        }

    def to_csv(self) -> str:
        lines = ["n,mean,second_moment,stderr"]
        for r in self.rows:
            lines.append(f"{r.n},{r.mean!r},{r.second_moment!r},{r.stderr!r}")
        return "\n".join(lines) + "\n"


MAX_REL_STDERR = 0.2  # grid points noisier than this do not enter the fit


def fit_scaling_exponent(rows: Sequence[MomentEstimate]) -> tuple[float, float, tuple[int, ...]]:
    """Least-squares slope of log(second moment) against log(n).

    Only rows with relative standard error below 20% are used; fewer than
    three such rows raises InsufficientData.
    """
    usable = [r for r in rows if r.second_moment > 0 and r.rel_stderr < MAX_REL_STDERR]
    if len(usable) < 3:
        raise InsufficientData(
            f"only {len(usable)} usable grid points (need >= 3); increase samples"
        )
    xs = np.array([log(r.n) for r in usable])
    ys = np.array([log(r.second_moment) for r in usable])
    xm, ym = xs.mean(), ys.mean()
    sxx = float(((xs - xm) ** 2).sum())
    slope = float(((xs - xm) * (ys - ym)).sum() / sxx)
    resid = ys - (ym + slope * (xs - xm))
    dof = len(usable) - 2
    se = math.sqrt(float((resid**2).sum()) / dof / sxx) if dof > 0 else 0.0
    return slope, se, tuple(r.n for r in usable)


def scaling_report(config: McConfig) -> ScalingReport:
    """Run estimate_projection_moment over the grid and fit the exponent."""
    rows = tuple(
        estimate_projection_moment(
            config.k, config.v, n, config.samples, config.seed,
            threads=config.threads, budget=config.budget,
        )
        for n in config.n_grid
    )
    slope, se, used = fit_scaling_exponent(rows)
    return ScalingReport(config, rows, slope, se, used)


@dataclass(frozen=True)
class CrossCovEstimate:
    """Normalized covariance n^((r+s)/2) * cov(<u,P>, <v,P>) with stderr."""

    k: int
    n: int
    r: int
    s: int
    samples: int
    seed: int
    value: float
    stderr: float


def cross_cov_estimate(
    k: int,
    u: Sequence[float],
    r: int,
    v: Sequence[float],
    s: int,
    n: int,
    samples: int,
    seed: int,
    threads: int = 1,
    budget: int = DEFAULT_SAMPLE_BUDGET,
) -> CrossCovEstimate:
    """Estimate the normalized cross-covariance of two projections.

    For blocks r != s this should tend to zero as n grows; for u = v it
    estimates the corresponding normalized second moment.
    """
    if samples < 2:
        raise ValueError("need samples >= 2")
    vecs = np.vstack([np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64)])
    x = projection_samples(k, vecs, n, samples, seed, threads=threads, budget=budget)
    a, b = x[:, 0], x[:, 1]
    prods = (a - a.mean()) * (b - b.mean())
    cov = float(prods.sum() / (samples - 1))
    stderr = float(prods.std(ddof=1) / math.sqrt(samples))
    scale = float(n) ** ((r + s) / 2.0)
    return CrossCovEstimate(
        k=k, n=n, r=r, s=s, samples=samples, seed=seed,
        value=scale * cov, stderr=scale * stderr,
    )
