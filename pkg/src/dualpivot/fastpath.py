"""Compiled kernels for bulk instrumented runs.

Mirrors sortcore's reference implementation with numba-jitted loops so the
Monte Carlo experiments (10^4 sorts of 10^5 keys) finish in minutes.  The
counter layout is one flat int64 array: slots 0..19 are quicksort blocks
1..20, slots 20..27 insertionsort blocks i1..i8, then comparisons, swaps,
writes.  Step records use one row of 16 ints per partitioning step.

Agreement with the pure-Python reference is asserted run-for-run in the
test suite; if numba is unavailable the same code runs uncompiled.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


N_COUNTERS = 31
IDX_CMPS, IDX_SWAPS, IDX_WRITES = 28, 29, 30

REC_FIELDS = ("n_sub", "P", "Q", "delta", "k", "g", "l",
              "c1", "c3", "c4", "s1", "s3", "f", "s_at_k", "sm_at_g",
              "large_pivot_displaced")
REC_WIDTH = len(REC_FIELDS)


@njit(cache=True)
def _is_range(a, left, right, cnt):
    cnt[20] += 1  # i1
    i = left + 1
    while True:
        cnt[21] += 1  # i2
        if i > right:
            break
        cnt[22] += 1  # i3
        j = i - 1
        v = a[i]
        while True:
            cnt[23] += 1  # i4
            cnt[28] += 1
            if not (v < a[j]):
                break
            cnt[24] += 1  # i5
            a[j + 1] = a[j]
            cnt[30] += 1
            j -= 1
            if j < left:
                cnt[25] += 1  # i6
                break
        cnt[26] += 1  # i7
        a[j + 1] = v
        cnt[30] += 1
        i += 1
    cnt[27] += 1  # i8


@njit(cache=True)
def _dp_kernel(a, M, cnt, rec, collect, scratch):
    n = a.shape[0]
    nrec = 0
    stack = np.empty((2 * n + 8, 2), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n - 1
    top = 1
    while top > 0:
        top -= 1
        left = stack[top, 0]
        right = stack[top, 1]
        cnt[0] += 1  # block 1
        if right - left < M:
            cnt[1] += 1  # block 2
            if M >= 2:
                _is_range(a, left, right, cnt)
            cnt[19] += 1  # block 20
            continue

        n_sub = right - left + 1
        if collect:
            for t in range(n_sub):
                scratch[t] = a[left + t]

        cnt[2] += 1  # block 3
        cnt[28] += 1
        if a[left] > a[right]:
            cnt[3] += 1  # block 4
            p = a[right]
            q = a[left]
        else:
            cnt[4] += 1  # block 5
            p = a[left]
            q = a[right]

        cnt[5] += 1  # block 6
        l = left + 1
        g = right - 1
        k = l

        c1 = 0
        c3 = 0
        c4 = 0
        s1 = 0
        s3 = 0
        f = 0
        while True:
            cnt[6] += 1  # block 7
            if k > g:
                break
            cnt[7] += 1  # block 8
            c1 += 1
            cnt[28] += 1
            ak = a[k]
            if ak < p:
                cnt[8] += 1  # block 9
                s1 += 1
                a[k] = a[l]
                a[l] = ak
                cnt[30] += 2
                cnt[29] += 1
                l += 1
            else:
                cnt[9] += 1  # block 10
                cnt[28] += 1
                if ak >= q:
                    while True:
                        cnt[10] += 1  # block 11
                        c3 += 1
                        cnt[28] += 1
                        if not (a[g] > q):
                            break
                        cnt[11] += 1  # block 12
                        if not (k < g):
                            f += 1
                            break
                        cnt[12] += 1  # block 13
                        g -= 1
                    cnt[13] += 1  # block 14
                    c4 += 1
                    cnt[28] += 1
                    ag = a[g]
                    if ag >= p:
                        cnt[14] += 1  # block 15
                        a[k] = ag
                        a[g] = ak
                        cnt[30] += 2
                        cnt[29] += 1
                    else:
                        cnt[15] += 1  # block 16
                        s3 += 1
                        a[k] = a[l]
                        a[l] = ag
                        a[g] = ak
                        cnt[30] += 3
                        cnt[29] += 2
                        l += 1
                    cnt[16] += 1  # block 17
                    g -= 1
            cnt[17] += 1  # block 18
            k += 1

        cnt[18] += 1  # block 19
        if collect:
            # ranks and scan counts from the pre-step snapshot
            P = 1
            Q = 1
            for t in range(n_sub):
                if scratch[t] < p:
                    P += 1
                if scratch[t] < q:
                    Q += 1
            k_loc = k - left + 1
            g_loc = g - left + 1
            l_loc = l - left + 1
            delta = k_loc - Q
            s_at_k = 0
            for t in range(1, Q - 1 + delta):
                if scratch[t] < p:
                    s_at_k += 1
            sm_at_g = 0
            for t in range(Q - 1, n_sub - 1):
                if scratch[t] < q:
                    sm_at_g += 1
            rec[nrec, 0] = n_sub
            rec[nrec, 1] = P
            rec[nrec, 2] = Q
            rec[nrec, 3] = delta
            rec[nrec, 4] = k_loc
            rec[nrec, 5] = g_loc
            rec[nrec, 6] = l_loc
            rec[nrec, 7] = c1
            rec[nrec, 8] = c3
            rec[nrec, 9] = c4
            rec[nrec, 10] = s1
            rec[nrec, 11] = s3
            rec[nrec, 12] = f
            rec[nrec, 13] = s_at_k
            rec[nrec, 14] = sm_at_g
            rec[nrec, 15] = 1 if scratch[Q - 1] > q else 0
            nrec += 1

        l -= 1
        g += 1
        a[left] = a[l]
        a[l] = p
        a[right] = a[g]
        a[g] = q
        cnt[30] += 4
        cnt[29] += 2

        stack[top, 0] = g + 1
        stack[top, 1] = right
        stack[top + 1, 0] = l + 1
        stack[top + 1, 1] = g - 1
        stack[top + 2, 0] = left
        stack[top + 2, 1] = l - 1
        top += 3

        cnt[19] += 1  # block 20
    return nrec


@njit(cache=True)
def _classic_kernel(a, cutoff):
    n = a.shape[0]
    cmps = 0
    swaps = 0
    stack = np.empty((2 * n + 8, 2), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n - 1
    top = 1
    while top > 0:
        top -= 1
        left = stack[top, 0]
        right = stack[top, 1]
        size = right - left + 1
        if size <= cutoff or size <= 1:
            for i in range(left + 1, right + 1):
                v = a[i]
                j = i - 1
                while j >= left:
                    cmps += 1
                    if a[j] <= v:
                        break
                    a[j + 1] = a[j]
                    swaps += 1
                    j -= 1
                a[j + 1] = v
            continue
        pivot = a[right]
        i = left - 1
        for j in range(left, right):
            cmps += 1
            if a[j] <= pivot:
                i += 1
                if i != j:
                    tmp = a[i]
                    a[i] = a[j]
                    a[j] = tmp
                    swaps += 1
        if i + 1 != right:
            tmp = a[i + 1]
            a[i + 1] = a[right]
            a[right] = tmp
            swaps += 1
        stack[top, 0] = i + 2
        stack[top, 1] = right
        stack[top + 1, 0] = left
        stack[top + 1, 1] = i
        top += 2
    return cmps, swaps


@njit(cache=True)
def _fixpoint_kernel(measure_id, depth, n_samples, weight_floor, seed):
    """DFS evaluation of the truncated fixed-point tree, one row per sample.

    measure_id: 0 cmps, 1 swaps, 2 bytecodes, 3 writes.
    """
    np.random.seed(seed)
    out = np.empty(n_samples)
    stack_w = np.empty(2 * depth + 4)
    stack_d = np.empty(2 * depth + 4, np.int64)
    for s in range(n_samples):
        total = 0.0
        top = 0
        if depth > 0:
            stack_w[0] = 1.0
            stack_d[0] = depth
            top = 1
        while top > 0:
            top -= 1
            w = stack_w[top]
            remaining = stack_d[top]
            u1 = np.random.random()
            u2 = np.random.random()
            if u1 <= u2:
                lo, hi = u1, u2
            else:
                lo, hi = u2, u1
            d1 = lo
            d2 = hi - lo
            d3 = 1.0 - hi
            xl = 0.0
            if d1 > 0.0:
                xl += d1 * np.log(d1)
            if d2 > 0.0:
                xl += d2 * np.log(d2)
            if d3 > 0.0:
                xl += d3 * np.log(d3)
            if measure_id == 0:
                b = 1.0 + (d1 + d2) * (d2 + 2.0 * d3) + 1.9 * xl
            elif measure_id == 1:
                b = d1 + (d1 + d2) * d3 + 0.6 * xl
            elif measure_id == 2:
                b = 24.0 + (d3 - 9.0) * d2 - 2.0 * d3 * (5.0 * d3 + 2.0) + 21.7 * xl
            else:
                b = d1 + d1 * (d1 + d2) + 2.0 * (d1 + d2) * d3 + 1.1 * xl
            total += w * b
            if remaining > 1:
                cw = w * d1
                if cw >= weight_floor:
                    stack_w[top] = cw
                    stack_d[top] = remaining - 1
                    top += 1
                cw = w * d2
                if cw >= weight_floor:
                    stack_w[top] = cw
                    stack_d[top] = remaining - 1
                    top += 1
                cw = w * d3
                if cw >= weight_floor:
                    stack_w[top] = cw
                    stack_d[top] = remaining - 1
                    top += 1
        out[s] = total
    return out


_EMPTY_REC = np.empty((0, REC_WIDTH), np.int64)
_EMPTY_SCRATCH = np.empty(0, np.int64)


def dual_pivot_counts(a: np.ndarray, cutoff: int, collect_steps: bool = False):
    """Sort int64 array a in place; return (counters, step records or None)."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a = np.ascontiguousarray(a, dtype=np.int64)
    cnt = np.zeros(N_COUNTERS, np.int64)
    if collect_steps:
        rec = np.empty((a.shape[0] // 2 + 2, REC_WIDTH), np.int64)
        scratch = np.empty(max(1, a.shape[0]), np.int64)
        nrec = _dp_kernel(a, cutoff, cnt, rec, True, scratch)
        return a, cnt, rec[:nrec]
    _dp_kernel(a, cutoff, cnt, _EMPTY_REC, False, _EMPTY_SCRATCH)
    return a, cnt, None


def classic_counts(a: np.ndarray, cutoff: int):
    """Classic-quicksort baseline counts: returns (sorted, cmps, swaps)."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a = np.ascontiguousarray(a, dtype=np.int64)
    cmps, swaps = _classic_kernel(a, cutoff)
    return a, int(cmps), int(swaps)


def counters_to_trace(cnt: np.ndarray):
    """Lift a flat counter array into a sortcore.BlockTrace."""
    from .sortcore import BlockTrace

    return BlockTrace(
        qs_blocks=[int(c) for c in cnt[:20]],
        is_blocks=[int(c) for c in cnt[20:28]],
        comparisons=int(cnt[IDX_CMPS]),
        swaps=int(cnt[IDX_SWAPS]),
        writes=int(cnt[IDX_WRITES]),
    )


def records_to_steps(rec: np.ndarray):
    """Lift step-record rows into sortcore.PartitionStepRecord objects."""
    from .sortcore import PartitionStepRecord

    out = []
    for row in rec:
        kwargs = {name: int(v) for name, v in zip(REC_FIELDS, row)}
        kwargs["large_pivot_displaced"] = bool(kwargs["large_pivot_displaced"])
        out.append(PartitionStepRecord(**kwargs))
    return out


def verify_records_array(rec: np.ndarray) -> int:
    """Vectorized verify_step over step-record rows; returns violation count."""
    n_sub, P, Q = rec[:, 0], rec[:, 1], rec[:, 2]
    delta, k, g, l = rec[:, 3], rec[:, 4], rec[:, 5], rec[:, 6]
    c1, c3, c4 = rec[:, 7], rec[:, 8], rec[:, 9]
    s1, s3, f = rec[:, 10], rec[:, 11], rec[:, 12]
    s_at_k, sm_at_g, large = rec[:, 13], rec[:, 14], rec[:, 15]
    bad = (
        ((delta != 0) & (delta != 1))
        | (k != Q + delta)
        | (g != Q - 1)
        | (l != P + 1)
        | (delta != large)
        | (c1 != Q - 2 + delta)
        | (c3 != n_sub - Q)
        | (c4 != delta + sm_at_g)
        | (s1 != s_at_k)
        | (s3 != P - 1 - s_at_k)
        | (f != delta)
    )
    return int(np.count_nonzero(bad))
