"""Limit-distribution machinery for the normalized sorting costs.

The normalized cost (C_n - E[C_n]) / n converges to the unique centered,
square-integrable fixed point of

    X  =d=  D1 X' + D2 X'' + D3 X''' + b(D1, D2, D3),

where (D1, D2, D3) are the spacings two iid uniforms cut from [0, 1]
(uniform on the 2-simplex, density 2) and b is a measure-specific centered
coefficient function.  Squaring and taking expectations gives the asymptotic
variance sigma^2 = 2 E[b(D)^2], which this module evaluates two independent
ways: the published closed forms in pi^2, and adaptive quadrature over the
simplex.  A truncated sampler draws from the fixed point directly, and an
exhaustive enumerator provides exact small-n cost laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

import numpy as np
from scipy import integrate

from . import analytic
from .costmodel import derive_costs
from .sortcore import dual_pivot_sort

__all__ = [
    "Spacings",
    "LimitConstants",
    "FixPointCoefficient",
    "Pmf",
    "QuadratureError",
    "limit_constants",
    "fixpoint_coefficient",
    "hypergeometric_pmf",
    "hypergeometric_moments",
    "simplex_expectation",
    "variance_by_quadrature",
    "covariance_by_quadrature",
    "correlation_by_quadrature",
    "sample_spacings",
    "sample_fixed_point",
    "sample_fixed_point_batch",
    "exact_distribution",
    "normalize",
]

_F = Fraction


class QuadratureError(RuntimeError):
    """Requested tolerance could not be certified by the quadrature."""


@dataclass(frozen=True)
class Spacings:
    """The three sub-interval lengths two uniform pivots cut from [0, 1]."""

    d1: float
    d2: float
    d3: float

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) < 0 or abs(self.d1 + self.d2 + self.d3 - 1.0) > 1e-12:
            raise ValueError("spacings must be non-negative and sum to 1")


@dataclass(frozen=True)
class LimitConstants:
    sigma2_cmps: float
    sigma2_swaps: float
    sigma2_bytecodes: float
    cov_cmps_swaps: float
    correlation: float


def limit_constants() -> LimitConstants:
    """Closed-form variance/covariance constants of the limit laws."""
    pi2 = math.pi ** 2
    s_c = 2231 / 360 - 361 / 600 * pi2
    s_s = 7 / 10 - 3 / 50 * pi2
    s_bc = 1_469_983 / 1800 - 47_089 / 600 * pi2
    cov = 28 / 15 - 19 / 100 * pi2
    return LimitConstants(
        sigma2_cmps=s_c,
        sigma2_swaps=s_s,
        sigma2_bytecodes=s_bc,
        cov_cmps_swaps=cov,
        correlation=cov / math.sqrt(s_c * s_s),
    )


def _xlnx(x):
    """x ln x extended continuously by 0 at x = 0 (scalar or array)."""
    if isinstance(x, np.ndarray):
        out = np.zeros_like(x, dtype=float)
        positive = x > 0.0
        out[positive] = x[positive] * np.log(x[positive])
        return out
    return x * math.log(x) if x > 0.0 else 0.0


def _sum_xlnx(d1, d2, d3):
    return _xlnx(d1) + _xlnx(d2) + _xlnx(d3)


def _b_cmps(d1, d2, d3):
    return 1.0 + (d1 + d2) * (d2 + 2 * d3) + 1.9 * _sum_xlnx(d1, d2, d3)


def _b_swaps(d1, d2, d3):
    return d1 + (d1 + d2) * d3 + 0.6 * _sum_xlnx(d1, d2, d3)


def _b_bytecodes(d1, d2, d3):
    return 24.0 + (d3 - 9.0) * d2 - 2.0 * d3 * (5.0 * d3 + 2.0) + 21.7 * _sum_xlnx(d1, d2, d3)


def _b_writes(d1, d2, d3):
    # derived the same way as the published three: L2 limit of the
    # partitioning write toll over n, centered by the 11/10 x ln x term
    return d1 + d1 * (d1 + d2) + 2.0 * (d1 + d2) * d3 + 1.1 * _sum_xlnx(d1, d2, d3)


_B_COEFFS: dict[str, Callable] = {
    "cmps": _b_cmps,
    "swaps": _b_swaps,
    "bytecodes": _b_bytecodes,
    "writes": _b_writes,
}


@dataclass(frozen=True)
class FixPointCoefficient:
    """Measure tag plus its centered coefficient function b(d1, d2, d3)."""

    measure: str
    b: Callable

    def __call__(self, d1, d2, d3):
        return self.b(d1, d2, d3)


def fixpoint_coefficient(measure: str) -> FixPointCoefficient:
    """The centered coefficient function of the measure's fixed point."""
    try:
        return FixPointCoefficient(measure, _B_COEFFS[measure])
    except KeyError:
        raise ValueError(f"unknown measure {measure!r}") from None


# --------------------------------------------------------------------------
# Hypergeometric utilities

def hypergeometric_pmf(k: int, r: int, N: int, j: int) -> Fraction:
    """P[HypG(k, r, N) = j]: red balls in k draws from r red among N."""
    if not (0 <= k <= N and 0 <= r <= N):
        raise ValueError(f"need 0 <= k, r <= N, got k={k}, r={r}, N={N}")
    if j < max(0, k - (N - r)) or j > min(k, r):
        return _F(0)
    return _F(comb(r, j) * comb(N - r, k - j), comb(N, k))


def hypergeometric_moments(k: int, r: int, N: int) -> tuple[Fraction, Fraction]:
    """(mean, variance) of HypG(k, r, N)."""
    if not (0 <= k <= N and 0 <= r <= N):
        raise ValueError(f"need 0 <= k, r <= N, got k={k}, r={r}, N={N}")
    if N == 0:
        return _F(0), _F(0)
    mean = _F(k * r, N)
    if N == 1:
        return mean, _F(0)
    var = _F(k * r * (N - r) * (N - k), N * N * (N - 1))
    return mean, var


# --------------------------------------------------------------------------
# Simplex quadrature

def simplex_expectation(g, tolerance: float = 1e-8) -> float:
    """E[g(D1, D2, D3)] = 2 * int_0^1 int_0^{1-x} g(x, y, 1-x-y) dy dx.

    Nested adaptive Gauss-Kronrod quadrature; nodes are interior so the
    x ln x corner behavior never evaluates at an exact corner.  Raises
    QuadratureError when the reported error estimate exceeds tolerance.
    """
    opts = {"epsabs": tolerance / 10.0, "epsrel": 1e-12, "limit": 200}
    value, abserr = integrate.nquad(
        lambda y, x: g(x, y, 1.0 - x - y),
        [lambda x: (0.0, 1.0 - x), (0.0, 1.0)],
        opts=[opts, opts],
    )
    value *= 2.0
    abserr *= 2.0
    if abserr > tolerance:
        raise QuadratureError(
            f"quadrature error estimate {abserr:.3e} exceeds tolerance {tolerance:.3e}")
    return value


def variance_by_quadrature(measure: str, tolerance: float = 1e-8) -> float:
    """sigma^2 of the limit law: 2 E[b(D)^2], by quadrature."""
    b = fixpoint_coefficient(measure)
    return 2.0 * simplex_expectation(lambda x, y, z: b(x, y, z) ** 2, tolerance)


def covariance_by_quadrature(tolerance: float = 1e-8) -> float:
    """Limit covariance of comparisons and swaps: 2 E[b_C(D) b_S(D)]."""
    return 2.0 * simplex_expectation(
        lambda x, y, z: _b_cmps(x, y, z) * _b_swaps(x, y, z), tolerance)


def correlation_by_quadrature(tolerance: float = 1e-8) -> float:
    cov = covariance_by_quadrature(tolerance)
    var_c = variance_by_quadrature("cmps", tolerance)
    var_s = variance_by_quadrature("swaps", tolerance)
    return cov / math.sqrt(var_c * var_s)


# --------------------------------------------------------------------------
# Fixed-point sampling

def sample_spacings(rng: np.random.Generator) -> Spacings:
    """Spacings as order statistics of two independent uniforms."""
    u1 = rng.random()
    u2 = rng.random()
    lo, hi = (u1, u2) if u1 <= u2 else (u2, u1)
    return Spacings(lo, hi - lo, 1.0 - hi)


# Subtrees whose accumulated weight drops below this floor are truncated to
# zero.  The pruned frontier is a stopping line of the additive martingale
# sum(weights) with expectation 1, so the variance deficit of the sampled law
# is bounded by the floor itself (the exact full-depth deficit would be
# 2^-depth); 5e-3 keeps it far inside the 2% validation band while making the
# expected node count per sample a few thousand instead of 3^depth.
DEFAULT_WEIGHT_FLOOR = 5e-3


def sample_fixed_point(measure: str, depth: int, rng: np.random.Generator,
                       weight_floor: float = DEFAULT_WEIGHT_FLOOR) -> float:
    """One draw from the depth-truncated fixed-point expansion.

    Depth 0 is identically 0; depth 1 is b(D); deeper levels recurse with
    independent spacings and independent subtrees, truncating both at the
    given depth and below the subtree weight floor.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    b = fixpoint_coefficient(measure)
    total = 0.0
    stack = [(1.0, depth)]
    while stack:
        weight, remaining = stack.pop()
        if remaining <= 0:
            continue
        u1, u2 = rng.random(), rng.random()
        lo, hi = (u1, u2) if u1 <= u2 else (u2, u1)
        d1, d2, d3 = lo, hi - lo, 1.0 - hi
        total += weight * b(d1, d2, d3)
        if remaining > 1:
            for d in (d1, d2, d3):
                child = weight * d
                if child >= weight_floor:
                    stack.append((child, remaining - 1))
    return total


_MEASURE_IDS = {"cmps": 0, "swaps": 1, "bytecodes": 2, "writes": 3}


def sample_fixed_point_batch(measure: str, depth: int, size: int,
                             rng: np.random.Generator,
                             weight_floor: float = DEFAULT_WEIGHT_FLOOR) -> np.ndarray:
    """Batch of fixed-point samples; jitted DFS kernel when available."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if measure not in _MEASURE_IDS:
        raise ValueError(f"unknown measure {measure!r}")
    from . import fastpath

    if fastpath.HAVE_NUMBA:
        seed = int(rng.integers(0, 2 ** 31 - 1))
        return fastpath._fixpoint_kernel(
            _MEASURE_IDS[measure], depth, size, weight_floor, seed)
    b = fixpoint_coefficient(measure)
    acc = np.zeros(size)
    idx = np.arange(size, dtype=np.int64)
    w = np.ones(size)
    for level in range(depth):
        if idx.size == 0:
            break
        u1 = rng.random(idx.size)
        u2 = rng.random(idx.size)
        lo = np.minimum(u1, u2)
        hi = np.maximum(u1, u2)
        d1, d2, d3 = lo, hi - lo, 1.0 - hi
        acc += np.bincount(idx, weights=w * b(d1, d2, d3), minlength=size)
        if level == depth - 1:
            break
        cw = np.concatenate((w * d1, w * d2, w * d3))
        ci = np.concatenate((idx, idx, idx))
        keep = cw >= weight_floor
        idx, w = ci[keep], cw[keep]
    return acc


# --------------------------------------------------------------------------
# Exact small-n laws

@dataclass(frozen=True)
class Pmf:
    """Exact probability mass function with rational probabilities."""

    values: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if list(self.values) != sorted(self.values):
            raise ValueError("support must be sorted ascending")
        if sum(self.probs, _F(0)) != 1:
            raise ValueError("probabilities must sum to 1 exactly")

    def mean(self) -> Fraction:
        return sum((v * p for v, p in zip(self.values, self.probs)), _F(0))

    def variance(self) -> Fraction:
        m = self.mean()
        return sum((p * (v - m) ** 2 for v, p in zip(self.values, self.probs)), _F(0))

    def csv_rows(self):
        """Rows of (value, probability_numerator, probability_denominator)."""
        for v, p in zip(self.values, self.probs):
            yield v, p.numerator, p.denominator


_SIZE_CAP = 10


@lru_cache(maxsize=64)
def _enumerate_costs(M: int, n: int) -> dict[str, Pmf]:
    from itertools import permutations

    counters = {m: {} for m in analytic.MEASURES}
    total = 0
    for perm in permutations(range(1, n + 1)):
        _, trace, _ = dual_pivot_sort(perm, cutoff=M)
        cv = derive_costs(trace.frequency_vector())
        for m, c in (("cmps", cv.comparisons), ("swaps", cv.swaps),
                     ("writes", cv.write_accesses), ("bytecodes", cv.bytecodes)):
            counters[m][c] = counters[m].get(c, 0) + 1
        total += 1
    pmfs = {}
    for m, counter in counters.items():
        values = tuple(sorted(counter))
        probs = tuple(_F(counter[v], total) for v in values)
        pmfs[m] = Pmf(values, probs)
    return pmfs


def exact_distribution(measure: str, M: int, n: int) -> Pmf:
    """Exact cost law over all n! equiprobable permutations (n <= 10)."""
    if measure not in analytic.MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if M < 1:
        raise ValueError("cutoff M must be >= 1")
    if n < 0 or n > _SIZE_CAP:
        raise ValueError(f"size cap exceeded: need 0 <= n <= {_SIZE_CAP}")
    return _enumerate_costs(M, n)[measure]


def normalize(cost, n: int, measure: str, M: int, exact: bool = True):
    """Normalized cost (cost - E[cost_n]) / n, with 0 at n = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return _F(0) if exact else 0.0
    if exact:
        return (_F(cost) - analytic.expected_cost(measure, M, n)) / n
    return (float(cost) - analytic.expected_cost_float(measure, M, n)) / n
