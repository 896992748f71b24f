"""Source-summary alignment strategies and their statistics."""

from .strategies import (
    AlignmentResult,
    DEFAULT_GAIN_CAP,
    DEFAULT_TOPK,
    Strategy,
    align_bs_gain,
    align_bs_topk,
    align_entity_chain,
    align_full_budget,
    align_rouge_gain,
    align_rouge_topk,
    align_top_section,
    alignment_from_dict,
    alignment_stats,
)

__all__ = [
    "AlignmentResult",
    "DEFAULT_GAIN_CAP",
    "DEFAULT_TOPK",
    "Strategy",
    "align_bs_gain",
    "align_bs_topk",
    "align_entity_chain",
    "align_full_budget",
    "align_rouge_gain",
    "align_rouge_topk",
    "align_top_section",
    "alignment_from_dict",
    "alignment_stats",
]
