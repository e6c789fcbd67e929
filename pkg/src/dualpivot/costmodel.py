"""Linear cost identities over basic-block frequencies.

Nine quicksort frequencies (A, B, R, F, C1, C3, C4, S1, S3) plus four
insertionsort frequencies (I, G, D, E) determine all 28 block counts of the
instrumented sorter by flow conservation, and the four cost measures by fixed
linear combinations.  Bytecode weights per block are data: the shipped default
table can be replaced by any text file of ``block_id=weight`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

__all__ = [
    "FrequencyVector",
    "CostVector",
    "InvalidFrequencies",
    "DEFAULT_WEIGHTS",
    "QS_BLOCK_IDS",
    "IS_BLOCK_IDS",
    "block_counts",
    "derive_costs",
    "verify_step",
    "load_weights",
]


class InvalidFrequencies(ValueError):
    """A frequency vector that violates flow conservation."""


# Bytecode instructions per basic block.  Blocks 1..20 are the quicksort
# blocks, i1..i8 the insertionsort blocks.  Block 2 is the insertionsort call
# site; its cost is carried entirely by the i-blocks, so it has weight 0.
DEFAULT_WEIGHTS: dict[str, int] = {
    "1": 5, "2": 0, "3": 7, "4": 8, "5": 9, "6": 10, "7": 3, "8": 7,
    "9": 12, "10": 3, "11": 5, "12": 3, "13": 2, "14": 5, "15": 6,
    "16": 14, "17": 5, "18": 2, "19": 42, "20": 1,
    "i1": 8, "i2": 3, "i3": 8, "i4": 5, "i5": 12, "i6": 1, "i7": 8, "i8": 2,
}

QS_BLOCK_IDS = tuple(str(i) for i in range(1, 21))
IS_BLOCK_IDS = tuple(f"i{i}" for i in range(1, 9))


@dataclass(frozen=True)
class FrequencyVector:
    """The thirteen primary block frequencies of one (or many summed) runs."""

    A: int = 0
    B: int = 0
    R: int = 0
    F: int = 0
    C1: int = 0
    C3: int = 0
    C4: int = 0
    S1: int = 0
    S3: int = 0
    IS_I: int = 0
    IS_G: int = 0
    IS_D: int = 0
    IS_E: int = 0

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class CostVector:
    comparisons: int
    swaps: int
    write_accesses: int
    bytecodes: int


def block_counts(fv: FrequencyVector) -> dict[str, int]:
    """Expand a frequency vector into all 28 per-block execution counts.

    Raises InvalidFrequencies if any derived count would be negative, which
    is exactly the flow-conservation requirement (S1 <= C1, S3 <= C4,
    F <= C4 <= C3, B <= A, IS_D <= IS_G - IS_I, ...).
    """
    counts = {
        "1": fv.R,
        "2": fv.R - fv.A,
        "3": fv.A,
        "4": fv.B,
        "5": fv.A - fv.B,
        "6": fv.A,
        "7": fv.A + fv.C1,
        "8": fv.C1,
        "9": fv.S1,
        "10": fv.C1 - fv.S1,
        "11": fv.C3,
        "12": fv.C3 - fv.C4 + fv.F,
        "13": fv.C3 - fv.C4,
        "14": fv.C4,
        "15": fv.C4 - fv.S3,
        "16": fv.S3,
        "17": fv.C4,
        "18": fv.C1,
        "19": fv.A,
        "20": fv.R,
        "i1": fv.IS_I,
        "i2": fv.IS_G,
        "i3": fv.IS_G - fv.IS_I,
        "i4": fv.IS_E + fv.IS_D,
        "i5": fv.IS_E,
        "i6": fv.IS_G - fv.IS_I - fv.IS_D,
        "i7": fv.IS_G - fv.IS_I,
        "i8": fv.IS_I,
    }
    bad = [k for k, v in counts.items() if v < 0]
    if bad:
        raise InvalidFrequencies(f"negative derived block counts: {bad}")
    return counts


def derive_costs(fv: FrequencyVector, weights: dict[str, int] | None = None) -> CostVector:
    """Map block frequencies to the four cost measures.

    comparisons:  C1 + (C1 - S1) + C3 + C4 + A, plus D + E from insertionsort
    swaps:        S1 + (C4 - S3) + 2*S3 + 2*A  (insertionsort shifts, not swaps)
    writes:       2*S1 + 2*(C4 - S3) + 3*S3 + 4*A + E + (G - I)
    bytecodes:    weighted sum of all block counts (default weight table)
    """
    counts = block_counts(fv)  # validates flow conservation
    if weights is None:
        weights = DEFAULT_WEIGHTS
    comparisons = 2 * fv.C1 - fv.S1 + fv.C3 + fv.C4 + fv.A + fv.IS_D + fv.IS_E
    swaps = fv.S1 + fv.C4 + fv.S3 + 2 * fv.A
    writes = 2 * fv.S1 + 2 * fv.C4 + fv.S3 + 4 * fv.A + fv.IS_E + fv.IS_G - fv.IS_I
    bytecodes = sum(weights[k] * c for k, c in counts.items())
    return CostVector(comparisons, swaps, writes, bytecodes)


def verify_step(record) -> list[str]:
    """Check every per-step identity on a PartitionStepRecord.

    Returns a list of human-readable violations; empty means the record is
    consistent.  Violations are data, not exceptions.
    """
    r = record
    violations = []
    if r.delta not in (0, 1):
        violations.append(f"delta={r.delta} not in {{0,1}}")
    if r.k != r.Q + r.delta:
        violations.append(f"k={r.k} != Q+delta={r.Q + r.delta}")
    if r.g != r.Q - 1:
        violations.append(f"g={r.g} != Q-1={r.Q - 1}")
    if r.l != r.P + 1:
        violations.append(f"l={r.l} != P+1={r.P + 1}")
    if r.delta != int(r.large_pivot_displaced):
        violations.append(
            f"delta={r.delta} but element at large pivot's final rank "
            f"{'exceeds' if r.large_pivot_displaced else 'does not exceed'} it"
        )
    if r.c1 != r.Q - 2 + r.delta:
        violations.append(f"c1={r.c1} != Q-2+delta={r.Q - 2 + r.delta}")
    if r.c3 != r.n_sub - r.Q:
        violations.append(f"c3={r.c3} != n_sub-Q={r.n_sub - r.Q}")
    if r.c4 != r.delta + r.sm_at_g:
        violations.append(f"c4={r.c4} != delta+sm@G={r.delta + r.sm_at_g}")
    if r.s1 != r.s_at_k:
        violations.append(f"s1={r.s1} != s@K={r.s_at_k}")
    if r.s3 != r.P - 1 - r.s_at_k:
        violations.append(f"s3={r.s3} != P-1-s@K={r.P - 1 - r.s_at_k}")
    if r.f != r.delta:
        violations.append(f"f={r.f} != delta={r.delta}")
    return violations


def load_weights(path) -> dict[str, int]:
    """Read a ``block_id=weight`` text file; '#' starts a comment line."""
    weights = dict(DEFAULT_WEIGHTS)
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'block=weight', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULT_WEIGHTS:
                raise ValueError(f"{path}:{lineno}: unknown block id {key!r}")
            weights[key] = int(value)
            seen.add(key)
    return weights
