"""Dual-pivot quicksort workbench.

Instrumented reference sorters, exact average-case cost analysis, limit
distribution constants and samplers, and a seeded Monte Carlo harness.
"""

from .costmodel import (
    CostVector,
    FrequencyVector,
    InvalidFrequencies,
    block_counts,
    derive_costs,
    load_weights,
    verify_step,
)
from .sortcore import (
    BlockTrace,
    PartitionStepRecord,
    classic_sort,
    dual_pivot_sort,
    insertion_sort,
)
from .analytic import (
    EULER_GAMMA,
    MEASURES,
    ClosedFormSolution,
    ExpectationTable,
    LinearToll,
    OutOfPublishedRange,
    TollShapeMismatch,
    bytecode_savings,
    closed_form,
    expected_cost,
    expected_cost_float,
    expected_frequency,
    harmonic,
    insertionsort_frequencies,
    leading_terms,
    linear_coefficient,
    optimal_cutoff,
    published_expected_cost,
    solve_recurrence,
)
from .distribution import (
    FixPointCoefficient,
    LimitConstants,
    Pmf,
    Spacings,
    covariance_by_quadrature,
    exact_distribution,
    hypergeometric_moments,
    hypergeometric_pmf,
    limit_constants,
    normalize,
    sample_fixed_point,
    sample_fixed_point_batch,
    simplex_expectation,
    variance_by_quadrature,
)
from .harness import (
    ExperimentConfig,
    SampleStats,
    emit_csv,
    emit_pmf_csv,
    random_permutation,
    report_summary,
    run_experiment,
    savings_curve,
)

__version__ = "0.1.0"
