"""Source-summary alignment strategies.

Every strategy maps one summary sentence (or, for the section strategy, a
whole summary) to a deduplicated subset of source sentences, addressed by
the representative refs of the index's unique sentences. All tie-breaks
are fixed so identical inputs always produce identical alignments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..corpus.index import SourceIndex, lookup_cuis, source_key
from ..corpus.ingest import SidecarBundle
from ..corpus.model import SourceSentenceRef, SummaryRecord, SummarySentence
from ..entities import RelationTable, expand_synonyms
from ..lexical.rouge import RougeVariant, rouge_avg_f1_ids, rouge_ids
from ..lexical.text import encode_against, tokenize
from ..scorers.similarity import cosine_matrix

DEFAULT_TOPK = 5
DEFAULT_GAIN_CAP = 10
DEFAULT_BS_TAU_PER_TOKEN = 0.05


class Strategy(str, Enum):
    ROUGE_GAIN = "rouge-gain"
    BS_GAIN = "bs-gain"
    ROUGE_TOPK = "rouge-topk"
    BS_TOPK = "bs-topk"
    TOP_SECTION = "top-section"
    ENTITY_CHAIN = "entity-chain"
    FULL_BUDGET = "full-budget"


@dataclass(frozen=True)
class AlignmentResult:
    summary_id: str
    sent_idx: int
    strategy: Strategy
    refs: tuple[SourceSentenceRef, ...]
    params: dict = field(default_factory=dict, hash=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "summary_id": self.summary_id,
            "sent_idx": self.sent_idx,
            "strategy": self.strategy.value,
            "refs": [r.as_dict() for r in self.refs],
            "params": self.params,
        }


def alignment_from_dict(raw: dict) -> AlignmentResult:
    return AlignmentResult(
        summary_id=raw["summary_id"],
        sent_idx=int(raw["sent_idx"]),
        strategy=Strategy(raw["strategy"]),
        refs=tuple(
            SourceSentenceRef(r["note_id"], int(r["section_idx"]), int(r["sent_idx"]))
            for r in raw["refs"]
        ),
        params=dict(raw.get("params", {})),
    )


def _sentence_ids(sent: SummarySentence, index: SourceIndex) -> np.ndarray:
    return encode_against(tokenize(sent.text), index.vocab)


def _refs_for_uids(index: SourceIndex, uids) -> tuple[SourceSentenceRef, ...]:
    return tuple(index.sentence(uid).ref for uid in uids)


def align_rouge_topk(
    sent: SummarySentence, index: SourceIndex, k: int = DEFAULT_TOPK, *, summary_id: str = ""
) -> AlignmentResult:
    """The k source sentences with the highest mean ROUGE-{1,2,L} F1."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sent_ids = _sentence_ids(sent, index)
    scored = [
        (rouge_avg_f1_ids(sent_ids, u.token_ids), u.uid) for u in index.unique_sentences
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    uids = [uid for _, uid in scored[:k]]
    return AlignmentResult(
        summary_id, sent.sent_idx, Strategy.ROUGE_TOPK, _refs_for_uids(index, uids), {"k": k}
    )


def _concat_ids(index: SourceIndex, uids) -> np.ndarray:
    """Token ids of a sentence set, concatenated in source order."""
    if not uids:
        return np.empty(0, dtype=np.int32)
    return np.concatenate([index.sentence(uid).token_ids for uid in sorted(uids)])


def align_rouge_gain(
    sent: SummarySentence,
    index: SourceIndex,
    cap: int = DEFAULT_GAIN_CAP,
    *,
    summary_id: str = "",
) -> AlignmentResult:
    """Greedy set growth maximizing the marginal mean-ROUGE gain.

    Stops as soon as the best marginal gain is <= 0, or at ``cap``.
    """
    sent_ids = _sentence_ids(sent, index)
    chosen: list[int] = []
    current = 0.0
    while len(chosen) < cap:
        best_gain, best_uid = 0.0, None
        for u in index.unique_sentences:
            if u.uid in chosen:
                continue
            score = rouge_avg_f1_ids(sent_ids, _concat_ids(index, chosen + [u.uid]))
            gain = score - current
            if gain > best_gain:
                best_gain, best_uid = gain, u.uid
        if best_uid is None:
            break
        chosen.append(best_uid)
        current += best_gain
    return AlignmentResult(
        summary_id,
        sent.sent_idx,
        Strategy.ROUGE_GAIN,
        _refs_for_uids(index, chosen),
        {"cap": cap},
    )


def _source_embeddings(index: SourceIndex, sidecar: SidecarBundle) -> list[np.ndarray]:
    return [
        sidecar.embedding(source_key(index.admission_id, u.ref))
        for u in index.unique_sentences
    ]


def _bertscore_f1(hyp: np.ndarray, ref: np.ndarray) -> float:
    sim = cosine_matrix(hyp, ref)
    p = float(sim.max(axis=1).mean())
    r = float(sim.max(axis=0).mean())
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def align_bs_topk(
    sent: SummarySentence,
    index: SourceIndex,
    sidecar: SidecarBundle,
    k: int = DEFAULT_TOPK,
    *,
    summary_id: str,
) -> AlignmentResult:
    """Top-k source sentences by token-embedding BERTScore F1."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    hyp = sidecar.embedding(f"sum::{summary_id}::{sent.sent_idx}")
    scored = [
        (_bertscore_f1(hyp, ref_mat), u.uid)
        for u, ref_mat in zip(index.unique_sentences, _source_embeddings(index, sidecar))
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    uids = [uid for _, uid in scored[:k]]
    return AlignmentResult(
        summary_id, sent.sent_idx, Strategy.BS_TOPK, _refs_for_uids(index, uids), {"k": k}
    )


def align_bs_gain(
    sent: SummarySentence,
    index: SourceIndex,
    sidecar: SidecarBundle,
    cap: int = DEFAULT_GAIN_CAP,
    tau_per_token: float = DEFAULT_BS_TAU_PER_TOKEN,
    stop_mode: str = "absolute",
    *,
    summary_id: str,
) -> AlignmentResult:
    """Coverage-weighted greedy growth over embedding similarities.

    Each summary token carries a coverage weight starting at 1; a candidate
    scores the weighted sum of its per-token max similarities. After a pick,
    weights drop to min(c, 1 - maxsim) so covered tokens stop attracting
    more sentences. Stops when the best weighted score falls below
    tau_per_token * token_count (absolute mode) or below that fraction of
    the first pick's score (relative mode), or at ``cap``.
    """
    if stop_mode not in ("absolute", "relative"):
        raise ValueError(f"unknown stop_mode {stop_mode!r}")
    hyp = sidecar.embedding(f"sum::{summary_id}::{sent.sent_idx}")
    n_tokens = hyp.shape[0]
    # per-candidate vector of each hyp token's best similarity
    maxsims = [
        cosine_matrix(hyp, mat).max(axis=1) for mat in _source_embeddings(index, sidecar)
    ]
    weights = np.ones(n_tokens)
    chosen: list[int] = []
    threshold = tau_per_token * n_tokens
    first_score = None
    while len(chosen) < cap and len(chosen) < len(index):
        best_score, best_uid = -np.inf, None
        for u in index.unique_sentences:
            if u.uid in chosen:
                continue
            score = float(weights @ maxsims[u.uid])
            if score > best_score:
                best_score, best_uid = score, u.uid
        if best_uid is None:
            break
        if stop_mode == "relative" and first_score is not None:
            if best_score < tau_per_token * first_score:
                break
        elif best_score < threshold:
            break
        if first_score is None:
            first_score = best_score
        chosen.append(best_uid)
        weights = np.clip(np.minimum(weights, 1.0 - maxsims[best_uid]), 0.0, 1.0)
    return AlignmentResult(
        summary_id,
        sent.sent_idx,
        Strategy.BS_GAIN,
        _refs_for_uids(index, chosen),
        {"cap": cap, "tau_per_token": tau_per_token, "stop_mode": stop_mode},
    )


def align_entity_chain(
    sent: SummarySentence,
    index: SourceIndex,
    relations: RelationTable | None = None,
    synonym_threshold: float = 0.5,
    *,
    summary_id: str = "",
) -> AlignmentResult:
    """All source sentences sharing at least one (synonym-expanded) CUI."""
    cuis = {cui for element in sent.elements for cui in element.cuis}
    if relations is not None and cuis:
        cuis = expand_synonyms(cuis, relations, threshold=synonym_threshold)
    uids = lookup_cuis(index, cuis)
    return AlignmentResult(
        summary_id,
        sent.sent_idx,
        Strategy.ENTITY_CHAIN,
        _refs_for_uids(index, uids),
        {"synonym_threshold": synonym_threshold},
    )


def align_top_section(summary: SummaryRecord, index: SourceIndex) -> list[AlignmentResult]:
    """One best section for the whole summary; every sentence aligns to it.

    The winning section maximizes the mean over summary sentences of the
    average ROUGE-{1,2,L} F1 against the section's full text.
    """
    sentences_ids = [_sentence_ids(s, index) for s in summary.sentences]
    sections = []  # (note_idx, sec_idx, concatenated ids, sentence refs)
    for note_idx, note in enumerate(index.admission.notes):
        for sec_idx, section in enumerate(note.sections):
            refs = [
                SourceSentenceRef(note.note_id, sec_idx, i)
                for i in range(len(section.sentences))
            ]
            ids = (
                np.concatenate([index.sentence(index.uid_of(r)).token_ids for r in refs])
                if refs
                else np.empty(0, dtype=np.int32)
            )
            sections.append((note_idx, sec_idx, ids, refs))

    best = None  # (score, position) — position breaks ties toward document order
    for position, (_, _, ids, _) in enumerate(sections):
        mean_score = (
            float(np.mean([rouge_avg_f1_ids(s, ids) for s in sentences_ids]))
            if sentences_ids
            else 0.0
        )
        if best is None or mean_score > best[0]:
            best = (mean_score, position)

    refs: tuple[SourceSentenceRef, ...] = ()
    params: dict = {}
    if best is not None:
        _, _, _, section_refs = sections[best[1]]
        seen: set[int] = set()
        ordered = []
        for r in section_refs:
            uid = index.uid_of(r)
            if uid not in seen:
                seen.add(uid)
                ordered.append(index.sentence(uid).ref)
        refs = tuple(ordered)
        note_idx, sec_idx, _, _ = sections[best[1]]
        params = {
            "note_id": index.admission.notes[note_idx].note_id,
            "section_idx": sec_idx,
            "mean_score": best[0],
        }
    return [
        AlignmentResult(summary.summary_id, s.sent_idx, Strategy.TOP_SECTION, refs, params)
        for s in summary.sentences
    ]


def align_full_budget(
    sent: SummarySentence, index: SourceIndex, token_budget: int, *, summary_id: str = ""
) -> AlignmentResult:
    """Highest mean ROUGE-{1,2} sentences until the token budget is hit.

    The best-scoring sentence is always admitted even if it alone exceeds
    the budget; after that, admission stops at the first overflow.
    """
    if token_budget < 1:
        raise ValueError(f"token_budget must be >= 1, got {token_budget}")
    sent_ids = _sentence_ids(sent, index)
    scored = []
    for u in index.unique_sentences:
        score = (
            rouge_ids(sent_ids, u.token_ids, RougeVariant.R1).f1
            + rouge_ids(sent_ids, u.token_ids, RougeVariant.R2).f1
        ) / 2.0
        scored.append((score, u.uid))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    chosen: list[int] = []
    used = 0
    for _, uid in scored:
        n = len(index.sentence(uid).tokens)
        if chosen and used + n > token_budget:
            break
        chosen.append(uid)
        used += n
    return AlignmentResult(
        summary_id,
        sent.sent_idx,
        Strategy.FULL_BUDGET,
        _refs_for_uids(index, chosen),
        {"token_budget": token_budget},
    )


def alignment_stats(alignments) -> dict[Strategy, float]:
    """Mean number of aligned source sentences per strategy."""
    alignments = list(alignments)
    if not alignments:
        raise ValueError("no alignments to summarize")
    totals: dict[Strategy, list[int]] = {}
    for a in alignments:
        totals.setdefault(a.strategy, []).append(len(a.refs))
    return {s: sum(counts) / len(counts) for s, counts in totals.items()}
