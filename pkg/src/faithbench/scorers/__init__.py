"""Faithfulness metric scorers over alignments and sidecar artifacts."""

from .primitives import (
    BertScoreResult,
    bartscore_sentence,
    bartscore_summary_level,
    bertscore,
    ctc_fake_fraction,
    ctc_score,
    factscore,
    factscore_summary,
    hr_binary,
    hr_soft,
    redress_score,
    summac_align,
    summac_greedy,
)
from .runner import (
    FAMILY_ORIENTATION,
    Granularity,
    MetricFamily,
    MetricSpec,
    MetricVector,
    MissingArtifactError,
    metric_vector_from_dict,
    score_metric,
)
from .similarity import cosine_matrix

__all__ = [
    "BertScoreResult",
    "FAMILY_ORIENTATION",
    "Granularity",
    "MetricFamily",
    "MetricSpec",
    "MetricVector",
    "MissingArtifactError",
    "bartscore_sentence",
    "bartscore_summary_level",
    "bertscore",
    "cosine_matrix",
    "ctc_fake_fraction",
    "ctc_score",
    "factscore",
    "factscore_summary",
    "hr_binary",
    "hr_soft",
    "metric_vector_from_dict",
    "redress_score",
    "score_metric",
    "summac_align",
    "summac_greedy",
]
