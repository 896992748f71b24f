"""Per-sentence faithfulness scoring primitives.

All scorers are deterministic functions of externally produced artifacts
(embeddings, token log-likelihoods, NLI probabilities, relation triples);
every metric is oriented so that higher means more faithful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .similarity import cosine_matrix

# SummaC label scores: contradiction, neutral, entailment
_NLI_LABEL_SCORES = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class BertScoreResult:
    precision: float
    recall: float
    f1: float


def bertscore(hyp: np.ndarray, refs: list[np.ndarray]) -> BertScoreResult:
    """Greedy soft-alignment scores over token embeddings.

    ``refs`` are encoded per section/sentence and concatenated here;
    precision averages each hypothesis token's best match, recall each
    reference token's best match.
    """
    if not refs:
        raise ValueError("bertscore needs at least one reference matrix")
    ref = np.vstack([np.asarray(r, dtype=np.float64) for r in refs])
    sim = cosine_matrix(np.asarray(hyp, dtype=np.float64), ref)
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return BertScoreResult(precision, recall, f1)


def bartscore_sentence(logprobs) -> float:
    """Length-normalized log-likelihood: the mean per-token value."""
    arr = np.asarray(logprobs, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty log-likelihood array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("log-likelihoods must be finite")
    if arr.max() > 0:
        raise ValueError("log-likelihoods must be <= 0")
    return float(arr.mean())


def bartscore_summary_level(logprobs, boundaries) -> list[float]:
    """Per-sentence means over a full-summary token array.

    ``boundaries`` must partition [0, len) with ordered, non-overlapping
    [start, end) ranges, one per sentence.
    """
    arr = np.asarray(logprobs, dtype=np.float64)
    pos = 0
    out = []
    for start, end in boundaries:
        if start != pos or end <= start or end > arr.size:
            raise ValueError(
                f"boundaries must partition [0, {arr.size}); got range ({start}, {end}) at {pos}"
            )
        out.append(float(arr[start:end].mean()))
        pos = end
    if pos != arr.size:
        raise ValueError(f"boundaries cover [0, {pos}), expected [0, {arr.size})")
    return out


def ctc_fake_fraction(fake_probs, threshold: float = 0.5) -> float:
    """Fraction of tokens the discriminator calls fake."""
    arr = np.asarray(fake_probs, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty fake-probability array")
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return float((arr > threshold).mean())


def ctc_score(fake_probs, threshold: float = 0.5) -> float:
    """Faithful-token fraction (1 - fake fraction), so higher = better."""
    return 1.0 - ctc_fake_fraction(fake_probs, threshold)


def _label_score(triple) -> float:
    return _NLI_LABEL_SCORES[int(np.argmax(triple))]


def summac_greedy(nli_rows) -> float:
    """Label score of the premise row with maximal entailment probability."""
    rows = list(nli_rows)
    if not rows:
        raise ValueError("no premise rows to score")
    best = max(range(len(rows)), key=lambda i: rows[i][2])
    return _label_score(rows[best])


def summac_align(nli_triple) -> float:
    """Label score of the single whole-premise NLI prediction."""
    return _label_score(nli_triple)


def factscore(supported_prob: float) -> float:
    if not 0.0 <= supported_prob <= 1.0:
        raise ValueError(f"supported probability {supported_prob} outside [0, 1]")
    return float(supported_prob)


def factscore_summary(supported_probs) -> float:
    probs = [factscore(p) for p in supported_probs]
    if not probs:
        raise ValueError("no sentence probabilities")
    return float(np.mean(probs))


def redress_score(original: np.ndarray, revised: np.ndarray) -> float:
    """Revision intensity as BERTScore F1 between revised and original."""
    return bertscore(np.asarray(revised), [np.asarray(original)]).f1


def hr_binary(best_triples, synonym_threshold: float | None = None) -> float:
    """Fraction of summary CUIs whose best source relation is not Synonym.

    Classification is argmax by default; with ``synonym_threshold`` a CUI
    instead counts as supported when p_synonym >= threshold.
    """
    triples = list(best_triples)
    if not triples:
        raise ValueError("no entities to score")
    if synonym_threshold is None:
        hallucinated = sum(1 for t in triples if int(np.argmax(t)) != 2)
    else:
        hallucinated = sum(1 for t in triples if t[2] < synonym_threshold)
    return hallucinated / len(triples)


def hr_soft(best_triples) -> float:
    """Mean of 0*p_unrelated + 1*p_related + 2*p_synonym over unique CUIs."""
    triples = list(best_triples)
    if not triples:
        raise ValueError("no entities to score")
    return float(np.mean([t[1] + 2.0 * t[2] for t in triples]))
