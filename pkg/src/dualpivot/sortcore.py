"""Instrumented reference sorters.

``dual_pivot_sort`` is a faithful, block-instrumented rendering of the
two-pivot partitioning scheme shipped in the Java 7 runtime: pivots are the
outermost elements, three pointers k/g/l sweep the subarray, and subarrays of
at most ``cutoff`` elements go to insertionsort.  Every entry into one of the
20 quicksort basic blocks (or 8 insertionsort blocks) bumps a counter, and
key comparisons, swaps and array writes are counted independently so the two
accountings can be cross-checked per run.

Conventions that matter for the counts:

* index comparisons (k <= g, k < g, j >= left) are never key comparisons;
* the out-of-order pivot exchange (blocks 4/5) happens in locals, zero writes;
* block 16's double swap is realized with three writes (and counts 2 swaps);
* block 19 places both pivots: 2 swaps, 4 writes;
* with cutoff 1 the insertionsort branch is compiled out, so trivial calls
  touch only the size check and return blocks.

Recursion is organized on an explicit stack, popping subranges in the same
left / middle / right order the recursive formulation uses; counters are
order-independent either way.  Inputs may contain duplicates (the sorter is
correct for them), but step records are only meaningful for distinct keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .costmodel import IS_BLOCK_IDS, QS_BLOCK_IDS, FrequencyVector

__all__ = [
    "BlockTrace",
    "PartitionStepRecord",
    "dual_pivot_sort",
    "insertion_sort",
    "classic_sort",
]

# qs_blocks/is_blocks are indexed by block number - 1.
_B = {name: i for i, name in enumerate(QS_BLOCK_IDS)}
_I = {name: i for i, name in enumerate(IS_BLOCK_IDS)}


@dataclass
class BlockTrace:
    """Per-block entry counters plus independent cost counters."""

    qs_blocks: list[int] = field(default_factory=lambda: [0] * 20)
    is_blocks: list[int] = field(default_factory=lambda: [0] * 8)
    comparisons: int = 0
    swaps: int = 0
    writes: int = 0

    def frequency_vector(self) -> FrequencyVector:
        qs, isb = self.qs_blocks, self.is_blocks
        return FrequencyVector(
            A=qs[2],
            B=qs[3],
            R=qs[0],
            F=qs[11] - qs[12],  # block 12 minus block 13 entries
            C1=qs[7],
            C3=qs[10],
            C4=qs[13],
            S1=qs[8],
            S3=qs[15],
            IS_I=isb[0],
            IS_G=isb[1],
            IS_D=(isb[1] - isb[0]) - isb[5],  # (G - I) minus goto entries
            IS_E=isb[4],
        )

    def block_count_dict(self) -> dict[str, int]:
        counts = {str(i + 1): c for i, c in enumerate(self.qs_blocks)}
        counts.update({f"i{i + 1}": c for i, c in enumerate(self.is_blocks)})
        return counts


@dataclass
class PartitionStepRecord:
    """Observables of a single partitioning step, in local coordinates.

    Pivot ranks P, Q and pointers k, g, l are 1-based positions within the
    subarray; the pointer values are the ones at the moment the main loop is
    left.  s_at_k counts small elements initially sitting in the range pointer
    k scans, sm_at_g counts small-or-medium elements initially in pointer g's
    range.  large_pivot_displaced records whether the element that started at
    the large pivot's final rank exceeds the large pivot.
    """

    n_sub: int
    P: int
    Q: int
    delta: int
    k: int
    g: int
    l: int
    c1: int
    c3: int
    c4: int
    s1: int
    s3: int
    f: int
    s_at_k: int
    sm_at_g: int
    large_pivot_displaced: bool

    @property
    def subproblem_sizes(self) -> tuple[int, int, int]:
        """(I1, I2, I3): sizes of the small / medium / large subproblems."""
        return self.P - 1, self.Q - self.P - 1, self.n_sub - self.Q


def _insertion_sort_range(a, left, right, trace):
    """Sort a[left..right] inclusive, tracing insertionsort blocks i1..i8."""
    isb = trace.is_blocks
    isb[_I["i1"]] += 1
    i = left + 1
    while True:
        isb[_I["i2"]] += 1
        if i > right:
            break
        isb[_I["i3"]] += 1
        j = i - 1
        v = a[i]
        while True:
            isb[_I["i4"]] += 1
            trace.comparisons += 1
            if not (v < a[j]):
                break  # comparison failed: straight to block i7
            isb[_I["i5"]] += 1
            a[j + 1] = a[j]
            trace.writes += 1
            j -= 1
            if j < left:
                isb[_I["i6"]] += 1
                break
        isb[_I["i7"]] += 1
        a[j + 1] = v
        trace.writes += 1
        i += 1
    isb[_I["i8"]] += 1


def insertion_sort(segment, trace: BlockTrace | None = None) -> list:
    """Sort a standalone segment with the instrumented insertionsort."""
    if trace is None:
        trace = BlockTrace()
    a = list(segment)
    _insertion_sort_range(a, 0, len(a) - 1, trace)
    return a


def _rank(snapshot, value) -> int:
    """1-based rank of value among the (distinct) snapshot keys."""
    return 1 + sum(1 for x in snapshot if x < value)


def _partition(a, left, right, trace, steps):
    """One partitioning step on a[left..right]; returns the child ranges."""
    qs = trace.qs_blocks
    snapshot = a[left:right + 1] if steps is not None else None

    qs[_B["3"]] += 1
    trace.comparisons += 1
    if a[left] > a[right]:
        qs[_B["4"]] += 1
        p, q = a[right], a[left]
    else:
        qs[_B["5"]] += 1
        p, q = a[left], a[right]

    qs[_B["6"]] += 1
    l = left + 1
    g = right - 1
    k = l

    c1 = c3 = c4 = s1 = s3 = f = 0
    while True:
        qs[_B["7"]] += 1
        if k > g:
            break
        qs[_B["8"]] += 1
        c1 += 1
        trace.comparisons += 1
        ak = a[k]
        if ak < p:
            qs[_B["9"]] += 1
            s1 += 1
            a[k] = a[l]
            a[l] = ak
            trace.writes += 2
            trace.swaps += 1
            l += 1
        else:
            qs[_B["10"]] += 1
            trace.comparisons += 1
            if ak >= q:
                while True:
                    qs[_B["11"]] += 1
                    c3 += 1
                    trace.comparisons += 1
                    if not (a[g] > q):
                        break
                    qs[_B["12"]] += 1
                    if not (k < g):
                        f += 1  # inner loop left on the pointer check
                        break
                    qs[_B["13"]] += 1
                    g -= 1
                qs[_B["14"]] += 1
                c4 += 1
                trace.comparisons += 1
                ag = a[g]
                if ag >= p:
                    qs[_B["15"]] += 1
                    a[k] = ag
                    a[g] = ak
                    trace.writes += 2
                    trace.swaps += 1
                else:
                    # two swaps realized with three writes
                    qs[_B["16"]] += 1
                    s3 += 1
                    a[k] = a[l]
                    a[l] = ag
                    a[g] = ak
                    trace.writes += 3
                    trace.swaps += 2
                    l += 1
                qs[_B["17"]] += 1
                g -= 1
        qs[_B["18"]] += 1
        k += 1

    qs[_B["19"]] += 1
    if steps is not None:
        n_sub = right - left + 1
        P = _rank(snapshot, p)
        Q = _rank(snapshot, q)
        k_loc, g_loc, l_loc = k - left + 1, g - left + 1, l - left + 1
        k_scan = snapshot[1:Q - 1 + (k_loc - Q)]  # positions 2 .. Q-1+delta
        g_scan = snapshot[Q - 1:n_sub - 1]        # positions Q .. n_sub-1
        steps.append(PartitionStepRecord(
            n_sub=n_sub,
            P=P,
            Q=Q,
            delta=k_loc - Q,
            k=k_loc,
            g=g_loc,
            l=l_loc,
            c1=c1, c3=c3, c4=c4, s1=s1, s3=s3, f=f,
            s_at_k=sum(1 for x in k_scan if x < p),
            sm_at_g=sum(1 for x in g_scan if x < q),
            large_pivot_displaced=snapshot[Q - 1] > q,
        ))

    l -= 1
    g += 1
    a[left] = a[l]
    a[l] = p
    a[right] = a[g]
    a[g] = q
    trace.writes += 4
    trace.swaps += 2
    return (left, l - 1), (l + 1, g - 1), (g + 1, right)


def dual_pivot_sort(keys, cutoff: int = 1, collect_steps: bool = False):
    """Sort with the instrumented dual-pivot quicksort.

    Returns (sorted list, BlockTrace, step records or None).  ``cutoff`` is
    the largest subarray size handled by insertionsort; cutoff 1 means the
    insertionsort branch is compiled out entirely.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    a = list(keys)
    trace = BlockTrace()
    steps: list[PartitionStepRecord] | None = [] if collect_steps else None
    qs = trace.qs_blocks
    stack = [(0, len(a) - 1)]
    while stack:
        left, right = stack.pop()
        qs[_B["1"]] += 1
        if right - left < cutoff:
            qs[_B["2"]] += 1
            if cutoff >= 2:
                _insertion_sort_range(a, left, right, trace)
        else:
            lo, mid, hi = _partition(a, left, right, trace, steps)
            stack.append(hi)
            stack.append(mid)
            stack.append(lo)
        qs[_B["20"]] += 1
    return a, trace, steps


def classic_sort(keys, cutoff: int = 1):
    """Single-pivot quicksort baseline; returns (sorted, comparisons, swaps).

    Last element is the pivot, partitioning is the textbook single-scan
    scheme, subarrays of at most ``cutoff`` elements go to insertionsort
    (whose shifts are tallied as swaps).  Only the 2 n ln n comparison
    leading term is relied on; lower-order constants are not calibrated to
    any published variant.
    """
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    a = list(keys)
    comparisons = 0
    swaps = 0
    stack = [(0, len(a) - 1)]
    while stack:
        left, right = stack.pop()
        n = right - left + 1
        if n <= cutoff or n <= 1:
            for i in range(left + 1, right + 1):
                v = a[i]
                j = i - 1
                while j >= left:
                    comparisons += 1
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
            comparisons += 1
            if a[j] <= pivot:
                i += 1
                if i != j:
                    a[i], a[j] = a[j], a[i]
                    swaps += 1
        if i + 1 != right:
            a[i + 1], a[right] = a[right], a[i + 1]
            swaps += 1
        stack.append((i + 2, right))
        stack.append((left, i))
    return a, comparisons, swaps
