"""Meta-evaluation: human error rates, correlations, ensembling, distillation."""

from .correlation import (
    CorrelationReport,
    HumanErrorVector,
    ReportCategory,
    build_herr,
    category_breakdown,
    category_error_vector,
    correlate,
    element_error_flags,
    herr_sentence,
    latest_judgments,
    paired_vectors,
    pearson,
    williams_test,
)
from .ensemble import (
    NormalizationStats,
    abstractive_subset,
    best_subset,
    combine_with_coverage,
    compute_stats,
    distill_targets,
    ensemble,
    macs_mixture,
    subset_stability,
    znormalize,
)

__all__ = [
    "CorrelationReport",
    "HumanErrorVector",
    "NormalizationStats",
    "ReportCategory",
    "abstractive_subset",
    "best_subset",
    "build_herr",
    "category_breakdown",
    "category_error_vector",
    "combine_with_coverage",
    "compute_stats",
    "correlate",
    "distill_targets",
    "element_error_flags",
    "ensemble",
    "herr_sentence",
    "latest_judgments",
    "macs_mixture",
    "paired_vectors",
    "pearson",
    "subset_stability",
    "williams_test",
    "znormalize",
]
