"""Seeded Monte Carlo experiments and reporting.

Runs batches of instrumented sorts on pseudo-random permutations, folds the
per-run costs into mergeable streaming statistics, and writes deterministic
CSV next to the analytic predictions.  Streams are derived from a Philox
seed sequence split per size and per fixed-width chunk of trials, so results
are byte-identical no matter how chunks are scheduled.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import analytic, distribution, fastpath
from .costmodel import DEFAULT_WEIGHTS

__all__ = [
    "ExperimentConfig",
    "SampleStats",
    "CLASSIC_REFERENCE",
    "OUTPUT_DIR_ENV",
    "random_permutation",
    "run_experiment",
    "run_enumerated_experiment",
    "merge_stats",
    "emit_csv",
    "emit_pmf_csv",
    "report_summary",
    "savings_curve",
    "format_leading_terms",
    "histogram",
    "sample_costs",
]

OUTPUT_DIR_ENV = "DUALPIVOT_OUT"
_CHUNK = 256  # trials per RNG stream; fixed so threading cannot reorder draws

# Reference constants for classic single-pivot quicksort (comparison column
# of the summary table; M = 6 there, swaps quoted at M = 1).  These are
# external reference data, not reproduced by this package.
CLASSIC_REFERENCE = {
    "cmps": (2.0, -2.3045),
    "swaps": (1.0 / 3.0, -0.585373),
    "writes": (2.0 / 3.0, 0.316953),
    "bytecodes": (18.0, 6.21488),
    "sd_cmps": 0.648278,
    "sd_swaps": 0.0237251,
    "sd_bytecodes": 3.52723,
    "correlation": -0.86404,
    "M": 6,
}


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...]
    trials: int
    cutoff: int = 7
    seed: int = 0
    measures: tuple[str, ...] = analytic.MEASURES
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        if any(n < 2 for n in self.sizes):
            raise ValueError("sizes must all be >= 2")
        unknown = set(self.measures) - set(analytic.MEASURES)
        if unknown:
            raise ValueError(f"unknown measures: {sorted(unknown)}")


@dataclass
class SampleStats:
    """Streaming mean/variance per measure for one input size (Welford)."""

    n: int
    count: int = 0
    means: dict[str, float] = field(default_factory=dict)
    m2s: dict[str, float] = field(default_factory=dict)
    predicted_mean: dict[str, float] = field(default_factory=dict)
    predicted_var: dict[str, float] = field(default_factory=dict)

    def add(self, costs: dict[str, float]) -> None:
        self.count += 1
        for m, x in costs.items():
            mean = self.means.get(m, 0.0)
            delta = x - mean
            mean += delta / self.count
            self.means[m] = mean
            self.m2s[m] = self.m2s.get(m, 0.0) + delta * (x - mean)

    def variance(self, measure: str) -> float | None:
        """Unbiased sample variance; undefined below two observations."""
        if self.count < 2:
            return None
        return self.m2s[measure] / (self.count - 1)

    def se_mean(self, measure: str) -> float | None:
        var = self.variance(measure)
        if var is None:
            return None
        return math.sqrt(var / self.count)


def merge_stats(a: SampleStats, b: SampleStats) -> SampleStats:
    """Combine two disjoint accumulators; associative up to float rounding."""
    if a.n != b.n:
        raise ValueError("cannot merge stats for different sizes")
    if a.count == 0:
        return replace(b)
    if b.count == 0:
        return replace(a)
    total = a.count + b.count
    means, m2s = {}, {}
    for m in a.means:
        delta = b.means[m] - a.means[m]
        means[m] = a.means[m] + delta * b.count / total
        m2s[m] = a.m2s[m] + b.m2s[m] + delta * delta * a.count * b.count / total
    return SampleStats(n=a.n, count=total, means=means, m2s=m2s,
                       predicted_mean=dict(a.predicted_mean) or dict(b.predicted_mean),
                       predicted_var=dict(a.predicted_var) or dict(b.predicted_var))


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random permutation of 1..n (Fisher-Yates via numpy)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return rng.permutation(np.arange(1, n + 1, dtype=np.int64))


_WEIGHT_VEC = np.array(
    [DEFAULT_WEIGHTS[k] for k in
     [str(i) for i in range(1, 21)] + [f"i{i}" for i in range(1, 9)]],
    dtype=np.int64)


def _costs_from_counters(cnt: np.ndarray) -> dict[str, float]:
    return {
        "cmps": float(cnt[fastpath.IDX_CMPS]),
        "swaps": float(cnt[fastpath.IDX_SWAPS]),
        "writes": float(cnt[fastpath.IDX_WRITES]),
        "bytecodes": float(np.dot(_WEIGHT_VEC, cnt[:28])),
    }


def sample_costs(n: int, trials: int, cutoff: int, rng: np.random.Generator) -> np.ndarray:
    """Cost samples for `trials` fresh permutations; shape (trials, 4).

    Columns follow analytic.MEASURES order.
    """
    out = np.empty((trials, 4))
    for t in range(trials):
        perm = random_permutation(n, rng)
        _, cnt, _ = fastpath.dual_pivot_counts(perm, cutoff)
        costs = _costs_from_counters(cnt)
        out[t] = [costs[m] for m in analytic.MEASURES]
    return out


def _predictions(n: int, cutoff: int, measures) -> tuple[dict, dict]:
    pred_mean = {m: analytic.expected_cost_float(m, cutoff, n) for m in measures}
    pred_var = {m: distribution.variance_by_quadrature(m, 1e-6) * n * n
                for m in measures}
    return pred_mean, pred_var


def run_experiment(config: ExperimentConfig) -> list[SampleStats]:
    """Monte Carlo sweep: per size, `trials` sorts of fresh random
    permutations, streamed into SampleStats with analytic predictions."""
    root = np.random.SeedSequence(config.seed)
    size_seeds = root.spawn(len(config.sizes))
    results = []
    for size, size_seed in zip(config.sizes, size_seeds):
        n_chunks = (config.trials + _CHUNK - 1) // _CHUNK
        chunk_seeds = size_seed.spawn(n_chunks)
        chunks = []
        for c, chunk_seed in enumerate(chunk_seeds):
            rng = np.random.Generator(np.random.Philox(chunk_seed))
            todo = min(_CHUNK, config.trials - c * _CHUNK)
            stats = SampleStats(n=size)
            for _ in range(todo):
                perm = random_permutation(size, rng)
                _, cnt, _ = fastpath.dual_pivot_counts(perm, config.cutoff)
                costs = _costs_from_counters(cnt)
                stats.add({m: costs[m] for m in config.measures})
            chunks.append(stats)
        merged = chunks[0]
        for other in chunks[1:]:
            merged = merge_stats(merged, other)
        merged.predicted_mean, merged.predicted_var = _predictions(
            size, config.cutoff, config.measures)
        results.append(merged)
    if config.out:
        emit_csv(results, config.out, config.measures)
    return results


def run_enumerated_experiment(n: int, cutoff: int) -> tuple[SampleStats, dict[str, Fraction]]:
    """Run every one of the n! permutations once (n <= 8).

    Returns float SampleStats plus the exact rational means, which equal the
    analytic expectations identically.
    """
    if n > 8:
        raise ValueError("enumerated experiments are capped at n = 8")
    stats = SampleStats(n=n)
    totals = {m: Fraction(0) for m in analytic.MEASURES}
    count = 0
    for perm in permutations(range(1, n + 1)):
        arr = np.array(perm, dtype=np.int64)
        _, cnt, _ = fastpath.dual_pivot_counts(arr, cutoff)
        costs = _costs_from_counters(cnt)
        stats.add(costs)
        for m in analytic.MEASURES:
            totals[m] += int(costs[m])
        count += 1
    exact_means = {m: totals[m] / count for m in analytic.MEASURES}
    stats.predicted_mean, stats.predicted_var = _predictions(
        n, cutoff, analytic.MEASURES)
    return stats, exact_means


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, ".")


def emit_csv(stats: list[SampleStats], path, measures=analytic.MEASURES) -> None:
    """Write experiment stats using the fixed schema
    n, then mean/var/pred_mean/pred_var/se_mean per measure."""
    header = ["n"]
    for m in measures:
        header += [f"mean_{m}", f"var_{m}", f"pred_mean_{m}",
                   f"pred_var_{m}", f"se_mean_{m}"]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for s in stats:
                row = [str(s.n)]
                for m in measures:
                    row += [
                        _fmt(s.means.get(m)),
                        _fmt(s.variance(m)),
                        _fmt(s.predicted_mean.get(m)),
                        _fmt(s.predicted_var.get(m)),
                        _fmt(s.se_mean(m)),
                    ]
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write experiment CSV to {path}: {exc}") from exc


def emit_pmf_csv(pmf, path) -> None:
    """Write an exact pmf as value,probability_numerator,probability_denominator."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("value,probability_numerator,probability_denominator\n")
            for value, num, den in pmf.csv_rows():
                fh.write(f"{value},{num},{den}\n")
    except OSError as exc:
        raise OSError(f"cannot write pmf CSV to {path}: {exc}") from exc


def histogram(samples: np.ndarray, bins: int | None = None):
    """(left_edges, width, counts) with Freedman-Diaconis binning by default."""
    samples = np.asarray(samples, dtype=float)
    if bins is None:
        q75, q25 = np.percentile(samples, [75, 25])
        iqr = q75 - q25
        if iqr <= 0:
            bins = 10
        else:
            width = 2.0 * iqr / len(samples) ** (1.0 / 3.0)
            bins = max(1, int(math.ceil((samples.max() - samples.min()) / width)))
    counts, edges = np.histogram(samples, bins=bins)
    return edges[:-1], edges[1] - edges[0], counts


def format_leading_terms(c_lead: float, c_lin: float) -> str:
    sign = "-" if c_lin < 0 else "+"
    return f"{c_lead:g} n ln n {sign} {abs(c_lin):g} n"




def report_summary(m_dual: int = 7, m_classic: int = 6) -> str:
    """Side-by-side leading terms: computed dual-pivot vs classic reference."""
    lc = distribution.limit_constants()
    rows = []
    dual_name = f"dual-pivot (M={m_dual})"
    classic_name = f"classic (M={m_classic}, reference)"
    header = f"{'cost measure':<28}  {dual_name:<34}  {classic_name:<34}"
    rows.append(header)
    rows.append("-" * len(header))

    def add(label, dual, classic):
        rows.append(f"{label:<28}  {dual:<34}  {classic:<34}")

    add("comparisons", format_leading_terms(*analytic.leading_terms("cmps", m_dual)),
        format_leading_terms(*CLASSIC_REFERENCE["cmps"]))
    add("  std dev", f"{math.sqrt(lc.sigma2_cmps):.6g} n",
        f"{CLASSIC_REFERENCE['sd_cmps']:g} n")
    add("swaps (M=1)", format_leading_terms(*analytic.leading_terms("swaps", 1)),
        format_leading_terms(*CLASSIC_REFERENCE["swaps"]))
    add("  std dev", f"{math.sqrt(lc.sigma2_swaps):.6g} n",
        f"{CLASSIC_REFERENCE['sd_swaps']:g} n")
    add("write accesses", format_leading_terms(*analytic.leading_terms("writes", m_dual)),
        format_leading_terms(*CLASSIC_REFERENCE["writes"]))
    add("bytecodes", format_leading_terms(*analytic.leading_terms("bytecodes", m_dual)),
        format_leading_terms(*CLASSIC_REFERENCE["bytecodes"]))
    add("  std dev", f"{math.sqrt(lc.sigma2_bytecodes):.6g} n",
        f"{CLASSIC_REFERENCE['sd_bytecodes']:g} n")
    add("corr(cmps, swaps)", f"{lc.correlation:.6g}",
        f"{CLASSIC_REFERENCE['correlation']:g}")
    rows.append("classic column is embedded reference data, not recomputed")
    return "\n".join(rows)


def savings_curve(m_a: int, m_b: int, n_list, route: str = "exact") -> list[float]:
    """Relative expected-bytecode savings of cutoff m_a over m_b per size."""
    return [analytic.bytecode_savings(m_a, m_b, n, route=route) for n in n_list]
