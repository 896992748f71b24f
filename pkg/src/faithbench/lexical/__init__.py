"""Tokenization, ROUGE variants, and extractive-fragment statistics."""

from .fragments import FragmentSet, coverage, density, extractive_fragments
from .rouge import RougeScore, RougeVariant, rouge, rouge_avg_f1
from .text import canonical, tokenize

__all__ = [
    "FragmentSet",
    "RougeScore",
    "RougeVariant",
    "canonical",
    "coverage",
    "density",
    "extractive_fragments",
    "rouge",
    "rouge_avg_f1",
    "tokenize",
]
