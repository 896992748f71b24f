"""ROUGE-1/2/L with clipped counts and sentence-level LCS."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .text import encode


class RougeVariant(str, Enum):
    R1 = "R1"
    R2 = "R2"
    RL = "RL"


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    variant: RougeVariant


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _score(overlap: int, n_cand: int, n_ref: int, variant: RougeVariant) -> RougeScore:
    p = overlap / n_cand if n_cand else 0.0
    r = overlap / n_ref if n_ref else 0.0
    return RougeScore(p, r, _f1(p, r), variant)


def rouge_ids(cand: np.ndarray, ref: np.ndarray, variant: RougeVariant) -> RougeScore:
    """ROUGE over pre-encoded id arrays (both sides from one vocab)."""
    if len(cand) == 0 or len(ref) == 0:
        return RougeScore(0.0, 0.0, 0.0, variant)
    if variant is RougeVariant.R1:
        return _score(kernels.unigram_overlap(cand, ref), len(cand), len(ref), variant)
    if variant is RougeVariant.R2:
        return _score(
            kernels.bigram_overlap(cand, ref),
            max(len(cand) - 1, 0),
            max(len(ref) - 1, 0),
            variant,
        )
    if variant is RougeVariant.RL:
        return _score(kernels.lcs_length(cand, ref), len(cand), len(ref), variant)
    raise ValueError(f"unknown ROUGE variant: {variant!r}")


def rouge(candidate: list[str], reference: list[str], variant: RougeVariant) -> RougeScore:
    """ROUGE between two token sequences; empty side gives an all-zero score."""
    vocab: dict[str, int] = {}
    return rouge_ids(encode(candidate, vocab), encode(reference, vocab), variant)


def rouge_avg_f1_ids(cand: np.ndarray, ref: np.ndarray) -> float:
    """Mean F1 of R1, R2, RL over pre-encoded ids."""
    return (
        rouge_ids(cand, ref, RougeVariant.R1).f1
        + rouge_ids(cand, ref, RougeVariant.R2).f1
        + rouge_ids(cand, ref, RougeVariant.RL).f1
    ) / 3.0


def rouge_avg_f1(candidate: list[str], reference: list[str]) -> float:
    """Mean F1 of the three ROUGE variants."""
    vocab: dict[str, int] = {}
    return rouge_avg_f1_ids(encode(candidate, vocab), encode(reference, vocab))
