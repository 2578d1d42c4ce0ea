"""Nonparametric rank statistics expressed as pattern-profile projections.

Every statistic here depends on paired samples (y_i, z_i) only through the
permutation their ranks induce, and is computed exactly (rational, or in
the radical field for the 4- and 5-pattern statistics) from the pattern
profile of that permutation:

  kendall_tau        <sign, P_2>  on 2-patterns
  spearman_rho       a weighted pair of 3-pattern projections, identical
                     to the classical rank-correlation formula
  fisher_lee_delta   the signed 3-pattern sum (circular correlation)
  hoeffding_d        a 5-pattern projection (independence test)
  bkr_b              a second 5-pattern projection
  bergsma_dassios    a 4-pattern projection, also reported as its raw
                     eight-density form
  quasirandom_score  the same 4-pattern projection; a permutation sequence
                     is quasirandom iff it tends to zero

Null p-values are simulated under the uniform permutation with the same
counter-based seeding as the montecarlo module.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import TiesPresent, TooLarge
from .montecarlo import sample_rng
from .perms import Permutation, Profile, pattern_rank, perm_of_points, profile
from .qfield import QNum, qdot
from .reps import rep_table

# patterns whose density sum gives the raw Bergsma-Dassios statistic
EIGHT_DENSITY_PATTERNS = (
    "1234", "1243", "2134", "2143", "3412", "3421", "4312", "4321",
)


@dataclass(frozen=True)
class PairedSample:
    """Paired observations; ranks are taken per coordinate."""

    y: tuple[float, ...]
    z: tuple[float, ...]

    def __post_init__(self):
        if len(self.y) != len(self.z):
            raise ValueError("y and z must have equal length")

    @property
    def n(self) -> int:
        return len(self.y)

    def has_ties(self) -> bool:
        return len(set(self.y)) != len(self.y) or len(set(self.z)) != len(self.z)


def load_paired_csv(path, delimiter: str = ",", header: str = "auto") -> PairedSample:
    """Read two numeric columns into a PairedSample.

    header: "auto" drops a first row that does not parse as numbers;
    "yes"/"no" force the choice.  Blank or non-numeric (NaN) rows are
    rejected, never skipped.
    """
    rows = []
    with open(path, newline="") as fh:
        if delimiter == "whitespace":
            raw = [line.split() for line in fh]
        else:
            raw = list(csv.reader(fh, delimiter=delimiter))
    for lineno, row in enumerate(raw, start=1):
        row = [c.strip() for c in row]
        if lineno == 1 and header in ("auto", "yes"):
            if header == "yes":
                continue
            try:
                [float(c) for c in row[:2]]
            except ValueError:
                continue
        if len(row) < 2 or row[0] == "" or row[1] == "":
            raise ValueError(f"{path}: row {lineno} is blank or incomplete")
        try:
            y, z = float(row[0]), float(row[1])
        except ValueError as exc:
            raise ValueError(f"{path}: row {lineno} is not numeric") from exc
        if math.isnan(y) or math.isnan(z):
            raise ValueError(f"{path}: row {lineno} contains NaN")
        rows.append((y, z))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return PairedSample(tuple(y for y, _ in rows), tuple(z for _, z in rows))


def ranks_to_perm(
    sample: PairedSample,
    tie_policy: str = "error",
    rng: np.random.Generator | None = None,
) -> tuple[Permutation, bool]:
    """The permutation induced by the sample's ranks.

    Returns (permutation, ties_were_broken).  The default policy treats
    ties as an error, matching the continuous-distributions assumption;
    tie_policy="random" breaks them uniformly with the supplied generator
    and flags the fact.
    """
    if not sample.has_ties():
        return perm_of_points(zip(sample.y, sample.z)), False
    if tie_policy == "error":
        raise TiesPresent(
            "tied values in y or z; rerun with the random tie policy to break them"
        )
    if tie_policy != "random":
        raise ValueError(f"unknown tie policy {tie_policy!r}")
    if rng is None:
        raise ValueError("random tie policy needs a seeded generator")
    n = sample.n
    jitter_y = rng.permutation(n)
    jitter_z = rng.permutation(n)
    order_y = sorted(range(n), key=lambda i: (sample.y[i], int(jitter_y[i])))
    order_z = sorted(range(n), key=lambda i: (sample.z[i], int(jitter_z[i])))
    rank_z = [0] * n
    for r, i in enumerate(order_z):
        rank_z[i] = r + 1
    return Permutation(rank_z[i] for i in order_y), True


# -- projection vectors ------------------------------------------------------


@lru_cache(maxsize=None)
def matrix_element_vector(k: int, lam: tuple[int, ...], i: int, j: int) -> tuple[QNum, ...]:
    """Entry (i, j) (1-based) of one representation across S_k, lex order."""
    return rep_table(k, lam).entry_vector(i, j)


@lru_cache(maxsize=None)
def _rational_vector(k: int, lam: tuple[int, ...], i: int, j: int) -> tuple[Fraction, ...]:
    vec = matrix_element_vector(k, lam, i, j)
    return tuple(e.as_fraction() for e in vec)


@lru_cache(maxsize=None)
def _sign_vector(k: int) -> tuple[int, ...]:
    from itertools import permutations as iperm

    out = []
    for p in iperm(range(1, k + 1)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if p[a] > p[b])
        out.append(1 if inv % 2 == 0 else -1)
    return tuple(out)


def _profile_of(perm: Permutation, k: int) -> Profile:
    if perm.n < k:
        raise ValueError(f"statistic needs n >= {k}, got n={perm.n}")
    return profile(perm, k)


# -- statistics --------------------------------------------------------------


def kendall_tau(perm: Permutation) -> Fraction:
    """P_12 - P_21: concordant minus discordant pair proportion."""
    prof = _profile_of(perm, 2)
    return Fraction(prof.counts[0] - prof.counts[1], prof.subsets)


def spearman_rho(perm: Permutation) -> Fraction:
    """Rank correlation via 3-pattern projections.

    Equals the classical 1 - 6*sum(d_i^2)/(n(n^2-1)) identically, which the
    test suite verifies exhaustively.
    """
    n = perm.n
    dens = _profile_of(perm, 3).densities()
    v_std = _rational_vector(3, (2, 1), 2, 2)
    v_sgn = _sign_vector(3)
    proj_std = sum(a * b for a, b in zip(v_std, dens))
    proj_sgn = sum(a * b for a, b in zip(v_sgn, dens))
    return (
        Fraction(4 * n, 3 * n + 3) * proj_std
        - Fraction(n - 3, 3 * n + 3) * proj_sgn
    )


def fisher_lee_delta(perm: Permutation) -> Fraction:
    """Signed 3-pattern sum: same-orientation minus opposite-orientation
    triple proportions (circular rank correlation)."""
    dens = _profile_of(perm, 3).densities()
    return sum(s * d for s, d in zip(_sign_vector(3), dens))


def _qnum_projection(perm: Permutation, k: int, vector) -> QNum:
    dens = _profile_of(perm, k).densities()
    return qdot(vector, dens)


def hoeffding_d(perm: Permutation) -> QNum:
    """Hoeffding's independence statistic as a 5-pattern projection."""
    v1 = matrix_element_vector(5, (3, 2), 4, 4)
    v2 = matrix_element_vector(5, (2, 2, 1), 3, 3)
    w = tuple(Fraction(1, 2) * (a + b) for a, b in zip(v1, v2))
    return Fraction(1, 30) * _qnum_projection(perm, 5, w)


def bkr_b(perm: Permutation) -> QNum:
    """The Blum-Kiefer-Rosenblatt variant as a 5-pattern projection."""
    v1 = matrix_element_vector(5, (3, 2), 4, 4)
    v2 = matrix_element_vector(5, (2, 2, 1), 3, 3)
    w = tuple(Fraction(5, 2) * a - Fraction(3, 2) * b for a, b in zip(v1, v2))
    return _qnum_projection(perm, 5, w)


def bergsma_dassios(perm: Permutation) -> QNum:
    """The Bergsma-Dassios independence statistic as a 4-pattern projection."""
    return _qnum_projection(perm, 4, matrix_element_vector(4, (2, 2), 2, 2))


def bergsma_dassios_eight_density(perm: Permutation) -> Fraction:
    """The raw form: sum of the eight concordant-block 4-pattern densities."""
    prof = _profile_of(perm, 4)
    total = 0
    for pat in EIGHT_DENSITY_PATTERNS:
        total += prof.counts[pattern_rank([int(c) for c in pat])]
    return Fraction(total, prof.subsets)


def quasirandom_score(perm: Permutation) -> QNum:
    """The 4-pattern projection whose decay to zero along a sequence of
    permutations characterizes quasirandomness."""
    return bergsma_dassios(perm)


def qnum_abs(x: QNum) -> QNum:
    return -x if x.sign() < 0 else x


STATISTICS = {
    "tau": (2, kendall_tau),
    "rho": (3, spearman_rho),
    "delta": (3, fisher_lee_delta),
    "hoeffding_d": (5, hoeffding_d),
    "bkr_b": (5, bkr_b),
    "bergsma_dassios": (4, bergsma_dassios),
    "quasirandom": (4, quasirandom_score),
}


def _as_qnum(x) -> QNum:
    return x if isinstance(x, QNum) else QNum.from_rational(x)


def _abs_ge(a, b) -> bool:
    """Exact |a| >= |b| for rational/QNum values."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return abs(a) >= abs(b)
    diff = qnum_abs(_as_qnum(a)) - qnum_abs(_as_qnum(b))
    return diff.sign() >= 0


@dataclass(frozen=True)
class NullPValue:
    statistic: str
    n: int
    observed_abs_float: float
    samples: int
    seed: int
    exceedances: int
    p_value: Fraction


def null_pvalue(
    statistic: str,
    observed,
    n: int,
    samples: int,
    seed: int,
    max_profile_cost: int = 10**7,
) -> NullPValue:
    """Two-sided Monte Carlo p-value under the uniform-permutation null.

    Add-one estimator: (1 + #{|stat_sim| >= |observed|}) / (samples + 1);
    never reports zero.  Exceedance comparisons are exact, so point masses
    (e.g. tau = 1) are counted correctly.  Deterministic given the seed.
    """
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {sorted(STATISTICS)}")
    if samples < 100:
        raise ValueError("need samples >= 100 for a meaningful p-value")
    min_n, fn = STATISTICS[statistic]
    if n < min_n:
        raise ValueError(f"{statistic} needs n >= {min_n}")
    if math.comb(n, min_n) > max_profile_cost:
        raise TooLarge(f"per-sample profile cost C({n},{min_n}) over budget")
    exceed = 0
    for i in range(samples):
        sim_perm = Permutation(sample_rng(seed, i).permutation(n) + 1)
        if _abs_ge(fn(sim_perm), observed):
            exceed += 1
    return NullPValue(
        statistic=statistic,
        n=n,
        observed_abs_float=abs(float(observed)),
        samples=samples,
        seed=seed,
        exceedances=exceed,
        p_value=Fraction(1 + exceed, samples + 1),
    )


@dataclass(frozen=True)
class TestResult:
    """One evaluated statistic, exact, with optional simulated p-value."""

    name: str
    n: int
    value: object  # Fraction or QNum
    ties_broken: bool = False
    p_value: NullPValue | None = None
    extras: tuple[tuple[str, object], ...] = ()

    def to_json_dict(self) -> dict:
        out = {
            "statistic": self.name,
            "n": self.n,
            "value": {"value": str(self.value), "exact": True},
            "value_float": float(self.value),
            "ties_broken": self.ties_broken,
        }
        for key, val in self.extras:
            out[key] = {"value": str(val), "exact": True}
        if self.p_value is not None:
            out["p_value"] = {
                "value": str(self.p_value.p_value),
                "exact": False,
                "samples": self.p_value.samples,
                "seed": self.p_value.seed,
            }
        return out


def run_test(
    statistic: str,
    sample: PairedSample,
    tie_policy: str = "error",
    pvalue_samples: int = 0,
    seed: int | None = None,
) -> TestResult:
    """Evaluate one statistic on paired data, optionally with a null p-value."""
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {sorted(STATISTICS)}")
    rng = sample_rng(seed, 0) if seed is not None else None
    perm, broke = ranks_to_perm(sample, tie_policy=tie_policy, rng=rng)
    _, fn = STATISTICS[statistic]
    value = fn(perm)
    extras = ()
    if statistic == "bergsma_dassios":
        extras = (("eight_density_form", bergsma_dassios_eight_density(perm)),)
    pval = None
    if pvalue_samples:
        if seed is None:
            raise ValueError("p-value simulation needs a seed")
        pval = null_pvalue(statistic, value, perm.n, pvalue_samples, seed + 1)
    return TestResult(
        name=statistic, n=perm.n, value=value, ties_broken=broke,
        p_value=pval, extras=extras,
    )
