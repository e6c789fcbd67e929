"""Instrumented sorter: hand traces, properties, and exhaustive step laws."""

from fractions import Fraction as F
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualpivot.costmodel import block_counts, derive_costs, verify_step
from dualpivot.distribution import hypergeometric_pmf
from dualpivot.sortcore import (
    BlockTrace,
    classic_sort,
    dual_pivot_sort,
    insertion_sort,
)
from dualpivot import fastpath


def freq(trace):
    return trace.frequency_vector()


def test_empty_input_is_base_case():
    out, trace, steps = dual_pivot_sort([], cutoff=1, collect_steps=True)
    assert out == []
    fv = freq(trace)
    assert fv.R == 1 and fv.A == 0
    assert trace.comparisons == 0
    assert steps == []
    # blocks 1, 2, 20 are the only entries of a trivial call
    assert trace.qs_blocks == [1, 1] + [0] * 17 + [1]
    assert derive_costs(fv).bytecodes == 6


def test_hand_trace_312():
    out, trace, steps = dual_pivot_sort([3, 1, 2], cutoff=1, collect_steps=True)
    assert out == [1, 2, 3]
    fv = freq(trace)
    assert (fv.A, fv.B, fv.R, fv.C1, fv.S1) == (1, 1, 4, 1, 1)
    assert (fv.C3, fv.C4, fv.S3, fv.F) == (0, 0, 0, 0)
    cv = derive_costs(fv)
    assert (cv.comparisons, cv.swaps, cv.write_accesses, cv.bytecodes) == (2, 3, 6, 118)
    (step,) = steps
    assert (step.P, step.Q, step.delta) == (2, 3, 0)
    assert step.k == step.Q + step.delta and step.g == step.Q - 1
    assert verify_step(step) == []


def test_hand_trace_132_exercises_crossing_branch():
    out, trace, steps = dual_pivot_sort([1, 3, 2], cutoff=1, collect_steps=True)
    assert out == [1, 2, 3]
    fv = freq(trace)
    assert (fv.F, fv.C1, fv.C3, fv.C4) == (1, 1, 1, 1)
    assert (fv.S1, fv.S3) == (0, 0)
    assert derive_costs(fv).comparisons == 5
    (step,) = steps
    assert step.delta == 1 and step.large_pivot_displaced
    assert verify_step(step) == []


def test_two_element_runs_match_toll_specials():
    # comparisons 1 (block 3 only), swaps 2, writes 4; bytecodes average 189/2
    bc = []
    for keys in ([1, 2], [2, 1]):
        out, trace, _ = dual_pivot_sort(keys, cutoff=1)
        assert out == [1, 2]
        cv = derive_costs(freq(trace))
        assert (cv.comparisons, cv.swaps, cv.write_accesses) == (1, 2, 4)
        bc.append(cv.bytecodes)
    assert F(sum(bc), 2) == F(189, 2)


def test_insertion_sort_examples():
    trace = BlockTrace()
    assert insertion_sort([], trace) == []
    assert trace.is_blocks[1] == 1  # the single i <= right check

    trace = BlockTrace()
    assert insertion_sort([1, 2, 3], trace) == [1, 2, 3]
    assert trace.comparisons == 2
    assert trace.writes == 2  # each element rewrites itself via block i7

    # mean comparisons over both orders of {1,2} equals D~ + E~ = 1
    total = 0
    for keys in ([1, 2], [2, 1]):
        trace = BlockTrace()
        assert insertion_sort(keys, trace) == [1, 2]
        total += trace.comparisons
    assert F(total, 2) == 1


@pytest.mark.parametrize("n", range(0, 7))
def test_insertion_sort_frequencies_exhaustive(n):
    """Per-call frequency means match I~=1, G~=n+[n=0], D~=n-H_n, E~=C(n,2)/2."""
    from math import comb

    from dualpivot.analytic import harmonic

    tot = [0, 0, 0, 0]
    count = 0
    for perm in permutations(range(1, n + 1)):
        trace = BlockTrace()
        assert insertion_sort(perm, trace) == sorted(perm)
        fv = freq(trace)
        tot[0] += fv.IS_I
        tot[1] += fv.IS_G
        tot[2] += fv.IS_D
        tot[3] += fv.IS_E
        count += 1
    assert F(tot[0], count) == 1
    assert F(tot[1], count) == n + (1 if n == 0 else 0)
    assert F(tot[2], count) == n - harmonic(n)
    assert F(tot[3], count) == F(comb(n, 2), 2)


@given(
    keys=st.lists(st.integers(min_value=-(2 ** 40), max_value=2 ** 40), max_size=120),
    cutoff=st.integers(min_value=1, max_value=12),
)
@settings(max_examples=150, deadline=None)
def test_sorting_correctness_property(keys, cutoff):
    out, trace, _ = dual_pivot_sort(keys, cutoff=cutoff)
    assert out == sorted(keys)
    # cross-check the dual accounting on every generated input
    fv = freq(trace)
    cv = derive_costs(fv)
    assert cv.comparisons == trace.comparisons
    assert cv.swaps == trace.swaps
    assert cv.write_accesses == trace.writes
    assert block_counts(fv) == trace.block_count_dict()


@pytest.mark.parametrize("keys", [
    [], [5], [1, 1, 1, 1, 1], list(range(64)), list(range(64, 0, -1)),
    [3, 3, 1, 2, 2, 1, 3], [0] * 17 + [1] * 17,
])
@pytest.mark.parametrize("cutoff", [1, 2, 7, 46])
def test_sorting_adversarial_inputs(keys, cutoff):
    out, _, _ = dual_pivot_sort(keys, cutoff=cutoff)
    assert out == sorted(keys)


def test_step_records_verify_on_random_runs():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(2, 80))
        cutoff = int(rng.integers(1, 9))
        perm = rng.permutation(np.arange(1, n + 1)).tolist()
        _, _, steps = dual_pivot_sort(perm, cutoff=cutoff, collect_steps=True)
        for step in steps:
            assert verify_step(step) == []


def _top_level_steps(n, cutoff=1):
    """Top partitioning step of every permutation of size n, via the kernel."""
    for perm in permutations(range(1, n + 1)):
        arr = np.array(perm, dtype=np.int64)
        _, _, rec = fastpath.dual_pivot_counts(arr, cutoff, collect_steps=True)
        yield fastpath.records_to_steps(rec[:1])[0]


@pytest.mark.parametrize("n", range(2, 9))
def test_s1_is_hypergeometric_given_pivot_ranks(n):
    """Grouped by (P, Q), s1 follows HypG(P-1, Q-2, n-2) exactly."""
    from collections import Counter
    from math import factorial, comb

    by_pq = {}
    for step in _top_level_steps(n):
        by_pq.setdefault((step.P, step.Q), Counter())[step.s1] += 1
    assert len(by_pq) == comb(n, 2)
    for (p, q), counter in by_pq.items():
        group = sum(counter.values())
        assert group == factorial(n) // comb(n, 2)
        for s1_val in range(0, n):
            expected = hypergeometric_pmf(p - 1, q - 2, n - 2, s1_val)
            assert F(counter.get(s1_val, 0), group) == expected


@pytest.mark.parametrize("n", range(3, 9))
def test_delta_mean_is_one_third(n):
    from math import factorial

    total = sum(step.delta for step in _top_level_steps(n))
    assert F(total, factorial(n)) == F(1, 3)


@pytest.mark.parametrize("n", range(3, 9))
def test_toll_distributions_given_subproblem_sizes(n):
    """Conditional on (I1,I2,I3): delta ~ Bern(I3/(n-2)),
    c4 - delta ~ HypG(I1+I2, I3, n-2), s1 ~ HypG(I1, I1+I2, n-2), and the
    size vector itself is uniform over compositions of n-2."""
    from collections import Counter
    from math import factorial, comb

    by_sizes = {}
    for step in _top_level_steps(n):
        key = step.subproblem_sizes
        rec = by_sizes.setdefault(key, {"delta": Counter(), "c4d": Counter(),
                                        "s1": Counter(), "count": 0})
        rec["delta"][step.delta] += 1
        rec["c4d"][step.c4 - step.delta] += 1
        rec["s1"][step.s1] += 1
        rec["count"] += 1

    n_compositions = comb(n, 2)  # compositions of n-2 into three parts
    assert len(by_sizes) == n_compositions
    uniform_count = factorial(n) // n_compositions
    for (i1, i2, i3), rec in by_sizes.items():
        assert i1 + i2 + i3 == n - 2
        group = rec["count"]
        assert group == uniform_count  # every pivot pair equally likely
        assert F(rec["delta"][1], group) == F(i3, n - 2)
        for j in range(0, n):
            assert F(rec["c4d"].get(j, 0), group) == \
                hypergeometric_pmf(i1 + i2, i3, n - 2, j)
            assert F(rec["s1"].get(j, 0), group) == \
                hypergeometric_pmf(i1, i1 + i2, n - 2, j)


def test_fastpath_matches_reference_tracer():
    rng = np.random.default_rng(7)
    for _ in range(120):
        n = int(rng.integers(0, 70))
        cutoff = int(rng.integers(1, 10))
        perm = rng.permutation(np.arange(1, n + 1, dtype=np.int64))
        srt, cnt, rec = fastpath.dual_pivot_counts(perm.copy(), cutoff,
                                                   collect_steps=True)
        out, trace, steps = dual_pivot_sort(perm.tolist(), cutoff=cutoff,
                                            collect_steps=True)
        assert srt.tolist() == out
        assert list(cnt[:20]) == trace.qs_blocks
        assert list(cnt[20:28]) == trace.is_blocks
        assert (cnt[28], cnt[29], cnt[30]) == (
            trace.comparisons, trace.swaps, trace.writes)
        assert fastpath.records_to_steps(rec) == steps


def test_fastpath_duplicates_sort_correctly():
    rng = np.random.default_rng(23)
    for _ in range(80):
        n = int(rng.integers(0, 60))
        arr = rng.integers(0, 6, size=n).astype(np.int64)
        srt, _, _ = fastpath.dual_pivot_counts(arr.copy(), int(rng.integers(1, 9)))
        assert srt.tolist() == sorted(arr.tolist())


def test_classic_sort_basics():
    assert classic_sort([1]) == ([1], 0, 0)
    srt, cmps, _ = classic_sort([2, 1], cutoff=1)
    assert srt == [1, 2] and cmps >= 1
    rng = np.random.default_rng(11)
    for _ in range(60):
        keys = rng.integers(-50, 50, size=int(rng.integers(0, 100))).tolist()
        srt, _, _ = classic_sort(keys, cutoff=int(rng.integers(1, 10)))
        assert srt == sorted(keys)
    # compiled kernel agrees with the reference
    for _ in range(60):
        n = int(rng.integers(0, 90))
        cutoff = int(rng.integers(1, 10))
        perm = rng.permutation(np.arange(1, n + 1, dtype=np.int64))
        ref = classic_sort(perm.tolist(), cutoff=cutoff)
        fast = fastpath.classic_counts(perm.copy(), cutoff)
        assert (fast[0].tolist(), fast[1], fast[2]) == ref


def test_cutoff_validation():
    with pytest.raises(ValueError):
        dual_pivot_sort([1, 2], cutoff=0)
    with pytest.raises(ValueError):
        classic_sort([1, 2], cutoff=0)
