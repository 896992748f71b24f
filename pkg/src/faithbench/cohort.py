"""Evaluation-cohort construction and oracle section ranking.

Pipeline: trim outliers on note count and reference length, bin summaries
by extractive density into (usually ten) quantile bins, then draw a
seeded stratified sample from each bin.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass

import numpy as np

from .corpus.model import Admission, SummaryRecord
from .lexical.rouge import RougeVariant, rouge_ids
from .lexical.text import encode, tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CohortSpec:
    trim_fraction: float = 0.10
    bins: int = 10
    samples_per_bin: int | None = None
    total_samples: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.trim_fraction < 0.5:
            raise ValueError(f"trim_fraction {self.trim_fraction} outside [0, 0.5)")
        if self.bins < 1:
            raise ValueError("bins must be >= 1")


def note_count_key(admission: Admission) -> int:
    return len(admission.notes)


def reference_length_key(summaries_by_admission: dict[str, SummaryRecord]):
    """Key function: total token count of the admission's reference summary."""

    def key(admission: Admission) -> int:
        summary = summaries_by_admission[admission.admission_id]
        return sum(len(s.text.split()) for s in summary.sentences)

    return key


def trim_outliers(items, key, trim_fraction: float = 0.10) -> list:
    """Drop floor(trim_fraction * n) items from each tail of the key ordering.

    Survivors keep their original relative order; boundary ties resolve by
    original position (stable sort).
    """
    items = list(items)
    if not items:
        raise ValueError("nothing to trim")
    if not 0 <= trim_fraction < 0.5:
        raise ValueError(f"trim_fraction {trim_fraction} outside [0, 0.5)")
    cut = math.floor(trim_fraction * len(items))
    if cut == 0:
        return items
    order = sorted(range(len(items)), key=lambda i: (key(items[i]), i))
    dropped = set(order[:cut]) | set(order[-cut:])
    return [item for i, item in enumerate(items) if i not in dropped]


def density_bins(ordered_ids, densities, bins: int) -> dict[str, int]:
    """Assign ids to quantile bins of (near-)equal count by density.

    Bin 0 holds the lowest densities; when the count does not divide
    evenly the lower bins take the extra item. Ties keep input order.
    """
    ids = list(ordered_ids)
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if len(ids) < bins:
        logger.warning(
            "%d summaries for %d bins; each summary becomes its own bin", len(ids), bins
        )
        order = sorted(range(len(ids)), key=lambda i: (densities[ids[i]], i))
        return {ids[i]: rank for rank, i in enumerate(order)}
    order = sorted(range(len(ids)), key=lambda i: (densities[ids[i]], i))
    base, extra = divmod(len(ids), bins)
    assignment: dict[str, int] = {}
    position = 0
    for b in range(bins):
        size = base + (1 if b < extra else 0)
        for i in order[position : position + size]:
            assignment[ids[i]] = b
        position += size
    return assignment


def allocate_samples(n_bins: int, samples_per_bin=None, total=None) -> list[int]:
    """Per-bin draw counts: either a flat count or a total spread over bins
    (extra draws go to the lowest bins)."""
    if (samples_per_bin is None) == (total is None):
        raise ValueError("specify exactly one of samples_per_bin or total")
    if samples_per_bin is not None:
        if samples_per_bin < 1:
            raise ValueError("samples_per_bin must be >= 1")
        return [samples_per_bin] * n_bins
    base, extra = divmod(total, n_bins)
    return [base + (1 if b < extra else 0) for b in range(n_bins)]


def stratified_sample(assignment: dict[str, int], counts: list[int], seed: int) -> list[str]:
    """Seeded uniform without-replacement draw of counts[b] ids from bin b.

    Bins smaller than their request contribute everything, with a notice.
    """
    rng = random.Random(seed)
    members: dict[int, list[str]] = {}
    for sid, b in assignment.items():
        members.setdefault(b, []).append(sid)
    selected: list[str] = []
    for b in sorted(members):
        pool = members[b]
        want = counts[b] if b < len(counts) else 0
        if want >= len(pool):
            if want > len(pool):
                logger.info("bin %d holds %d < %d requested; taking all", b, len(pool), want)
            selected.extend(pool)
        else:
            selected.extend(rng.sample(pool, want))
    return selected


def build_cohort(admissions, summaries_by_admission, densities, spec: CohortSpec):
    """Full pipeline: two-pass trim, density deciles, stratified sample.

    Returns (selected summary ids, bin assignment, trimmed admissions).
    """
    trimmed = trim_outliers(admissions, note_count_key, spec.trim_fraction)
    trimmed = trim_outliers(
        trimmed, reference_length_key(summaries_by_admission), spec.trim_fraction
    )
    ids = [summaries_by_admission[a.admission_id].summary_id for a in trimmed]
    assignment = density_bins(ids, densities, spec.bins)
    n_bins = max(assignment.values()) + 1 if assignment else 0
    counts = allocate_samples(n_bins, spec.samples_per_bin, spec.total_samples)
    selected = stratified_sample(assignment, counts, spec.seed)
    return selected, assignment, trimmed


def oracle_section_rank(admission: Admission, reference: SummaryRecord, k: int):
    """Rank sections by mean ROUGE-{1,2} recall of the reference against them.

    Returns (ranked section list, token coverage of the top-k union), where
    each entry is (note_id, section_idx, score) and coverage is the clipped
    fraction of reference tokens found in the union of the top-k sections.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sections = []
    for note in admission.notes:
        for sec_idx, section in enumerate(note.sections):
            sections.append((note.note_id, sec_idx, " ".join(section.sentences)))
    if not sections:
        raise ValueError(f"admission {admission.admission_id} has no sections")

    vocab: dict[str, int] = {}
    ref_tokens = [t for s in reference.sentences for t in tokenize(s.text)]
    ref_ids = encode(ref_tokens, vocab)

    scored = []
    for position, (note_id, sec_idx, text) in enumerate(sections):
        sec_ids = encode(tokenize(text), vocab)
        recall = (
            rouge_ids(sec_ids, ref_ids, RougeVariant.R1).recall
            + rouge_ids(sec_ids, ref_ids, RougeVariant.R2).recall
        ) / 2.0
        scored.append((-recall, position, note_id, sec_idx))
    scored.sort()
    ranked = [(note_id, sec_idx, -neg) for neg, _, note_id, sec_idx in scored]

    top = scored[:k]
    union_ids = (
        np.concatenate(
            [encode(tokenize(sections[pos][2]), vocab) for _, pos, _, _ in top]
        )
        if top
        else np.empty(0, dtype=np.int32)
    )
    coverage = (
        rouge_ids(union_ids, ref_ids, RougeVariant.R1).recall if len(ref_ids) else 0.0
    )
    return ranked, coverage
