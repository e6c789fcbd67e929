"""Command-line workbench.

Subcommands: sort, predict, experiment, distribution, constants, optimal-m,
savings.  Exit codes: 0 success, 1 validation error, 2 I/O error.  Output
files default into $DUALPIVOT_OUT (falling back to the working directory)
when a bare filename is given.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import analytic, distribution, harness
from .costmodel import derive_costs
from .sortcore import dual_pivot_sort


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we use 1
        raise CliError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise CliError(f"expected comma-separated integers, got {text!r}") from exc


def _out_path(path: str) -> str:
    if os.path.dirname(path):
        return path
    return os.path.join(harness.default_output_dir(), path)


def build_parser() -> _Parser:
    parser = _Parser(prog="dualpivot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="one instrumented run")
    p.add_argument("--n", type=int, help="sort a random permutation of 1..n")
    p.add_argument("--keys", type=str, help="comma-separated keys to sort")
    p.add_argument("--m", type=int, default=7, help="insertionsort cutoff")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("predict", help="expected cost for one (measure, M, n)")
    p.add_argument("--measure", choices=analytic.MEASURES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "asymptotic"), default="exact")

    p = sub.add_parser("experiment", help="seeded Monte Carlo sweep to CSV")
    p.add_argument("--sizes", type=str, default="1000,10000,100000")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--m", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)

    p = sub.add_parser("distribution", help="cost law: exact, sampled, or fixpoint")
    p.add_argument("--measure", choices=analytic.MEASURES, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=3, help="input size (exact/montecarlo)")
    p.add_argument("--mode", choices=("exact", "montecarlo", "fixpoint"), required=True)
    p.add_argument("--depth", type=int, default=30, help="fixpoint truncation depth")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)

    p = sub.add_parser("constants", help="limit-law constants, closed form vs quadrature")

    p = sub.add_parser("optimal-m", help="cutoff minimizing the linear cost term")
    p.add_argument("--measure", choices=analytic.MEASURES, required=True)
    p.add_argument("--max-m", type=int, default=64)

    p = sub.add_parser("savings", help="relative bytecode savings of one cutoff over another")
    p.add_argument("--m-a", type=int, required=True)
    p.add_argument("--m-b", type=int, required=True)
    p.add_argument("--sizes", type=str, default="100,1000,10000")
    return parser


def _cmd_sort(args) -> int:
    if (args.n is None) == (args.keys is None):
        raise CliError("provide exactly one of --n or --keys")
    if args.keys is not None:
        keys = _int_list(args.keys)
    else:
        if args.n < 0:
            raise CliError("--n must be >= 0")
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        keys = harness.random_permutation(args.n, rng).tolist()
    if args.m < 1:
        raise CliError("--m must be >= 1")
    _, trace, _ = dual_pivot_sort(keys, cutoff=args.m)
    fv = trace.frequency_vector()
    cv = derive_costs(fv)
    print(f"n={len(keys)} M={args.m}")
    print("frequencies:", " ".join(f"{k}={v}" for k, v in fv.as_dict().items()))
    print(f"costs: comparisons={cv.comparisons} swaps={cv.swaps} "
          f"writes={cv.write_accesses} bytecodes={cv.bytecodes}")
    return 0


def _cmd_predict(args) -> int:
    if args.m < 1 or args.n < 0:
        raise CliError("need --m >= 1 and --n >= 0")
    if args.mode == "exact":
        value = analytic.expected_cost(args.measure, args.m, args.n, mode="exact")
        print(f"E[{args.measure}] n={args.n} M={args.m} exact = {value} "
              f"(= {float(value):.10g})")
    else:
        value = analytic.expected_cost(args.measure, args.m, args.n, mode="asymptotic")
        c1, c2 = analytic.leading_terms(args.measure, args.m)
        print(f"E[{args.measure}] n={args.n} M={args.m} asymptotic = {value:.10g} "
              f"({harness.format_leading_terms(c1, c2)})")
    return 0


def _cmd_experiment(args) -> int:
    config = harness.ExperimentConfig(
        sizes=tuple(_int_list(args.sizes)),
        trials=args.trials,
        cutoff=args.m,
        seed=args.seed,
        out=_out_path(args.out),
    )
    stats = harness.run_experiment(config)
    for s in stats:
        parts = [f"n={s.n}"]
        for m in analytic.MEASURES:
            parts.append(f"{m}: mean={s.means[m]:.6g} pred={s.predicted_mean[m]:.6g}")
        print("  ".join(parts))
    print(f"wrote {config.out}")
    return 0


def _cmd_distribution(args) -> int:
    out = _out_path(args.out)
    if args.mode == "exact":
        pmf = distribution.exact_distribution(args.measure, args.m, args.n)
        harness.emit_pmf_csv(pmf, out)
        print(f"exact law of {args.measure} at n={args.n}, M={args.m}: "
              f"{len(pmf.values)} support points, mean={float(pmf.mean()):.6g}")
    else:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        if args.mode == "montecarlo":
            costs = harness.sample_costs(args.n, args.trials, args.m, rng)
            col = analytic.MEASURES.index(args.measure)
            samples = np.array([
                distribution.normalize(c, args.n, args.measure, args.m, exact=False)
                for c in costs[:, col]
            ])
        else:
            samples = distribution.sample_fixed_point_batch(
                args.measure, args.depth, args.trials, rng)
        lefts, width, counts = harness.histogram(samples, args.bins)
        try:
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("bin_left,bin_width,count\n")
                for left, c in zip(lefts, counts):
                    fh.write(f"{left!r},{width!r},{c}\n")
        except OSError as exc:
            raise OSError(f"cannot write histogram to {out}: {exc}") from exc
        print(f"{args.mode} histogram of normalized {args.measure}: "
              f"{len(counts)} bins, sample var={samples.var(ddof=1):.6g}")
    print(f"wrote {out}")
    return 0


def _cmd_constants(args) -> int:
    lc = distribution.limit_constants()
    pairs = [
        ("sigma2_cmps", lc.sigma2_cmps, distribution.variance_by_quadrature("cmps")),
        ("sigma2_swaps", lc.sigma2_swaps, distribution.variance_by_quadrature("swaps")),
        ("sigma2_bytecodes", lc.sigma2_bytecodes,
         distribution.variance_by_quadrature("bytecodes", 1e-6)),
        ("cov_cmps_swaps", lc.cov_cmps_swaps, distribution.covariance_by_quadrature()),
        ("correlation", lc.correlation, distribution.correlation_by_quadrature()),
    ]
    print(f"{'constant':<18} {'closed form':>16} {'quadrature':>16}")
    for name, closed, quad in pairs:
        print(f"{name:<18} {closed:>16.10f} {quad:>16.10f}")
    return 0


def _cmd_optimal_m(args) -> int:
    if not 1 <= args.max_m <= 256:
        raise CliError("--max-m must be in [1, 256]")
    m, coeff = analytic.optimal_cutoff(args.measure, range(1, args.max_m + 1))
    print(f"optimal M for {args.measure}: {m} (linear coefficient {coeff:.6f})")
    return 0


def _cmd_savings(args) -> int:
    if args.m_a < 1 or args.m_b < 1:
        raise CliError("cutoffs must be >= 1")
    sizes = _int_list(args.sizes)
    for n, s in zip(sizes, harness.savings_curve(args.m_a, args.m_b, sizes)):
        print(f"n={n}: {100.0 * s:.2f}% bytecode savings (M={args.m_a} vs M={args.m_b})")
    return 0


_COMMANDS = {
    "sort": _cmd_sort,
    "predict": _cmd_predict,
    "experiment": _cmd_experiment,
    "distribution": _cmd_distribution,
    "constants": _cmd_constants,
    "optimal-m": _cmd_optimal_m,
    "savings": _cmd_savings,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
