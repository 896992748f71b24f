"""Per-sentence and per-summary extractiveness over an admission's source."""

from __future__ import annotations

from .corpus.index import iter_refs
from .corpus.model import Admission, SummaryRecord
from .lexical.fragments import coverage, density, extractive_fragments
from .lexical.text import tokenize
from .scorers.runner import MetricVector


def source_tokens(admission: Admission) -> list[str]:
    tokens: list[str] = []
    for _, text in iter_refs(admission):
        tokens.extend(tokenize(text))
    return tokens


def sentence_extractiveness(summary: SummaryRecord, admission: Admission):
    """(coverage, density) per sentence against the whole source."""
    source = source_tokens(admission)
    stats = {}
    for sent in summary.sentences:
        toks = tokenize(sent.text)
        if not toks:
            continue  # untokenizable sentence carries no extractiveness signal
        frags = extractive_fragments(toks, source)
        stats[(summary.summary_id, sent.sent_idx)] = (coverage(frags), density(frags))
    return stats


def summary_density(summary: SummaryRecord, admission: Admission) -> float:
    toks = [t for sent in summary.sentences for t in tokenize(sent.text)]
    if not toks:
        raise ValueError(f"summary {summary.summary_id!r} has no tokens")
    return density(extractive_fragments(toks, source_tokens(admission)))


def coverage_vector(pairs) -> MetricVector:
    """Coverage MetricVector over (summary, admission) pairs."""
    values = {}
    for summary, admission in pairs:
        for key, (cov, _) in sentence_extractiveness(summary, admission).items():
            values[key] = cov
    return MetricVector(metric_name="coverage", values=values)
