"""Command-line surface.

Subcommands: profile, decompose, moments, verify, mc, test, quasirandom.
Exact numbers serialize as strings ("19/54", "1/2 + 1/3√6") so no value is
corrupted by float formatting; floats appear only in text output and in
explicitly approximate fields.  Every randomized command takes --seed or
generates one, and always echoes it.

Exit codes: 0 success, 1 verification FAIL, 2 input error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

import numpy as np

from . import __version__
from .errors import (
    Diverges,
    InsufficientData,
    MissingGenerators,
    NotRepresentable,
    PermProfileError,
    TooLarge,
)
from . import montecarlo, moments, stats
from .perms import (
    DEFAULT_SUBSET_BUDGET,
    Permutation,
    profile,
    profile_sampled,
)
from .reps import build_basis

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

_INPUT_ERRORS = (
    ValueError,
    NotRepresentable,
    InsufficientData,
    Diverges,
    FileNotFoundError,
)


def exact(x) -> dict:
    return {"value": str(x), "exact": True}


def approx(x) -> dict:
    return {"value": float(x), "exact": False}


def _envelope(command: str, seed: int | None, payload: dict) -> dict:
    out = {"tool": "permprofile", "version": __version__, "command": command}
    if seed is not None:
        out["seed"] = seed
    out.update(payload)
    return out


def _emit(args, command: str, payload: dict, seed: int | None = None,
          text_fn=None, csv_fn=None) -> None:
    if args.format == "json":
        print(json.dumps(_envelope(command, seed, payload), indent=2))
    elif args.format == "csv" and csv_fn is not None:
        sys.stdout.write(csv_fn())
    else:
        if seed is not None:
            print(f"seed: {seed}")
        if text_fn is not None:
            text_fn()
        else:
            print(json.dumps(_envelope(command, seed, payload), indent=2))


def _need_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return secrets.randbelow(2**32)


# -- subcommands -------------------------------------------------------------


def cmd_profile(args) -> int:
    perm = Permutation.parse(args.perm)
    k = args.k
    if args.approx:
        seed = _need_seed(args)
        rng = montecarlo.sample_rng(seed, 0)
        est = profile_sampled(perm, k, args.samples, rng)
        payload = {
            "k": k,
            "n": perm.n,
            "approximate": True,
            "samples": est.samples,
            "densities": [approx(d) for d in est.densities_hat],
            "stderr": [approx(s) for s in est.stderr],
        }
        _emit(args, "profile", payload, seed=seed,
              text_fn=lambda: print(" ".join(f"{d:.6f}" for d in est.densities_hat)))
        return EXIT_OK
    prof = profile(perm, k, budget=args.budget)
    dens = prof.densities()
    payload = {
        "k": k,
        "n": perm.n,
        "approximate": False,
        "counts": [int(c) for c in prof.counts],
        "densities": [exact(d) for d in dens],
    }

    def text():
        pats = [_pattern_str(k, idx) for idx in range(len(dens))]
        for pat, c, d in zip(pats, prof.counts, dens):
            print(f"{pat}  N={c}  P={d}")

    _emit(args, "profile", payload, text_fn=text)
    return EXIT_OK


def _pattern_str(k: int, index: int) -> str:
    from .perms import pattern_unrank

    return "".join(map(str, pattern_unrank(k, index)))


def cmd_decompose(args) -> int:
    perm = Permutation.parse(args.perm)
    k = args.k
    basis = build_basis(k)
    dens = profile(perm, k, budget=args.budget).densities()
    from .qfield import qdot

    rows = []
    for c, (lam, i, j) in enumerate(basis.labels):
        r = basis.block[c]
        raw = qdot(basis.columns[c], dens)
        rows.append(
            {
                "partition": list(lam),
                "i": i,
                "j": j,
                "block": r,
                "projection": exact(raw),
                "projection_float": float(raw),
                "normalized_float": float(raw) * perm.n ** (r / 2.0),
            }
        )
    payload = {"k": k, "n": perm.n, "projections": rows}

    def text():
        for row in rows:
            lam = ".".join(map(str, row["partition"]))
            print(
                f"V{row['block']}  ({lam}; {row['i']},{row['j']})  "
                f"raw={row['projection']['value']}  "
                f"normalized={row['normalized_float']:.6g}"
            )

    _emit(args, "decompose", payload, text_fn=text)
    return EXIT_OK


def cmd_moments(args) -> int:
    if args.n is not None:
        mat = moments.exact_second_moment(
            args.k, args.n, long_run=args.long, cache_dir=args.cache_dir,
            threads=args.threads,
        )
        payload = {
            "k": args.k,
            "n": args.n,
            "matrix": [[exact(x) for x in row] for row in mat],
        }
        _emit(args, "moments", payload,
              text_fn=lambda: [print(" ".join(str(x) for x in row)) for row in mat])
        return EXIT_OK
    interp = moments.interpolate_moments(
        args.k, long_run=args.long, cache_dir=args.cache_dir, threads=args.threads
    )
    payload = {
        "k": args.k,
        "entries_are": "coefficients of C(n,k)*E[P P^T] entries, ascending degree",
        "polynomials": interp.to_json_dict()["entries"],
    }
    _emit(args, "moments", payload,
          text_fn=lambda: [
              print(f"({a},{b}): {interp.entries[a][b]}")
              for a in range(interp.size)
              for b in range(interp.size)
          ])
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.k >= 5 and not args.long:
        raise TooLarge(
            f"verify at k={args.k} enumerates S_{2 * args.k}; pass --long to confirm"
        )
    if args.k >= 6:
        print(
            "warning: k=6 needs exact moments of S_11 and S_12 (a multi-day "
            "CPU budget, best run distributed) and a generator plug-in file",
            file=sys.stderr,
        )
        if args.gen_file is None:
            raise MissingGenerators("k=6 requires --gen-file with generator matrices")
    report = moments.verify_diagonalization(
        args.k, long_run=args.long, cache_dir=args.cache_dir,
        threads=args.threads, generator_file=args.gen_file,
    )
    payload = report.to_json_dict()

    def text():
        print(f"k={args.k}: {'PASS' if report.passed else 'FAIL'} "
              f"({report.checked_pairs} limits checked)")
        for d in report.diagonal:
            lam = ".".join(map(str, d.label[0]))
            flag = "rational" if d.rational else "irrational"
            print(f"  V{d.block} ({lam}; {d.label[1]},{d.label[2]}): {d.limit}  [{flag}]")
        for v in report.violations:
            print(f"  OFF-DIAGONAL {v['row']} x {v['col']}: {v['limit']}")

    _emit(args, "verify", payload, text_fn=text)
    return EXIT_OK if report.passed else EXIT_FAIL


def _mc_vector(args, basis):
    if args.column is not None:
        c = args.column
        if not 0 <= c < basis.size:
            raise ValueError(f"--column {c} out of range 0..{basis.size - 1}")
    else:
        cols = basis.block_columns(args.block)
        if not cols:
            raise ValueError(f"no basis columns in block {args.block}")
        c = cols[0]
    vec = np.array([float(e) for e in basis.columns[c]])
    return c, vec


def cmd_mc(args) -> int:
    seed = _need_seed(args)
    basis = build_basis(args.k)
    col, vec = _mc_vector(args, basis)
    r = basis.block[col]
    grid = (
        tuple(int(x) for x in args.n.split(","))
        if args.n
        else montecarlo.DEFAULT_GRIDS[args.k]
    )
    config = montecarlo.McConfig(
        k=args.k, v=tuple(vec), n_grid=grid, samples=args.samples,
        seed=seed, r_target=r, threads=args.threads,
    )
    report = montecarlo.scaling_report(config)
    payload = report.to_json_dict()
    payload["column"] = col
    payload["column_label"] = {
        "partition": list(basis.labels[col][0]),
        "i": basis.labels[col][1],
        "j": basis.labels[col][2],
    }

    def text():
        print(f"k={args.k} column={col} block=V{r} target slope={-r}")
        for row in report.rows:
            print(
                f"  n={row.n:<5d} E<v,P>^2={row.second_moment:.6e} "
                f"(+- {row.stderr:.2e})"
            )
        lo, hi = report.ci95
        print(f"  fitted slope {report.slope:.3f}  ci95 [{lo:.3f}, {hi:.3f}]")

    _emit(args, "mc", payload, seed=seed, text_fn=text, csv_fn=report.to_csv)
    return EXIT_OK


def cmd_test(args) -> int:
    sample = stats.load_paired_csv(args.csv, delimiter=args.delimiter, header=args.header)
    seed = _need_seed(args) if (args.pvalue_samples or args.tie_policy == "random") else args.seed
    result = stats.run_test(
        args.statistic,
        sample,
        tie_policy=args.tie_policy,
        pvalue_samples=args.pvalue_samples,
        seed=seed,
    )
    payload = result.to_json_dict()

    def text():
        print(f"{result.name}(n={result.n}) = {result.value}  "
              f"(~ {float(result.value):.6g})")
        if result.ties_broken:
            print("  note: ties broken at random")
        if result.p_value is not None:
            print(f"  p-value ~ {float(result.p_value.p_value):.4g} "
                  f"({result.p_value.samples} null samples)")

    _emit(args, "test", payload, seed=seed, text_fn=text)
    return EXIT_OK


def cmd_quasirandom(args) -> int:
    perm = Permutation.parse(args.perm)
    score = stats.quasirandom_score(perm)
    magnitude = stats.qnum_abs(score)
    payload = {
        "n": perm.n,
        "score": exact(score),
        "abs_score": exact(magnitude),
        "abs_score_float": float(magnitude),
    }
    _emit(args, "quasirandom", payload,
          text_fn=lambda: print(f"score = {score}  |score| ~ {float(magnitude):.6g}"))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permprofile",
        description="Pattern profiles of permutations, their block decomposition, "
        "exact second-moment verification, and rank statistics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeded=False):
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--threads", type=int, default=1,
                       help="cap on worker parallelism")
        if seeded:
            p.add_argument("--seed", type=int, default=None,
                           help="random seed; generated and echoed if omitted")

    p = sub.add_parser("profile", help="exact or sampled k-profile of a permutation")
    p.add_argument("--perm", required=True, help="one-line notation, e.g. '4 1 2 5 3'")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--approx", action="store_true", help="sampled estimate instead of exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET,
                   help="max position subsets for the exact count")
    common(p, seeded=True)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("decompose", help="projections of the k-profile on all basis columns")
    p.add_argument("--perm", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    common(p)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("moments", help="exact second-moment matrix (fixed n) or its polynomials")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None,
                   help="host size; omit for the interpolated polynomial matrix")
    p.add_argument("--long", action="store_true", help="allow n in {11, 12}")
    p.add_argument("--cache-dir", default=os.environ.get(moments.CACHE_ENV))
    common(p)
    p.set_defaults(fn=cmd_moments)

    p = sub.add_parser("verify", help="exact diagonalization check of the limit matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--long", action="store_true",
                   help="required for k >= 5 (long exact enumeration, minutes to hours)")
    p.add_argument("--cache-dir", default=os.environ.get(moments.CACHE_ENV))
    p.add_argument("--gen-file", default=None,
                   help="generator plug-in JSON (required for k = 6)")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo scaling of one profile projection")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--block", type=int, default=1, help="pick the first column of this block")
    p.add_argument("--column", type=int, default=None, help="pick an absolute basis column")
    p.add_argument("--n", default=None, help="comma-separated host sizes")
    p.add_argument("--samples", type=int, default=20000)
    common(p, seeded=True)
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("test", help="evaluate a rank statistic on paired CSV data")
    p.add_argument("--csv", required=True)
    p.add_argument("--statistic", required=True, choices=sorted(stats.STATISTICS))
    p.add_argument("--delimiter", default=",")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    p.add_argument("--tie-policy", choices=("error", "random"), default="error")
    p.add_argument("--pvalue-samples", type=int, default=0)
    common(p, seeded=True)
    p.set_defaults(fn=cmd_test)

    p = sub.add_parser("quasirandom", help="quasirandomness score of a permutation")
    p.add_argument("--perm", required=True)
    common(p)
    p.set_defaults(fn=cmd_quasirandom)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PermProfileError, *_INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
