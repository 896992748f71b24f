"""Extractive fragment statistics: greedy copied-fragment matching,
coverage (fraction of summary tokens inside copied fragments) and
density (mean squared copied-fragment length)."""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .text import encode


@dataclass(frozen=True)
class FragmentSet:
    # (summary_start, source_start, length) triples, non-overlapping in the
    # summary and ordered by summary_start; lengths are all >= 1
    fragments: tuple[tuple[int, int, int], ...]
    summary_len: int


def extractive_fragments(summary: list[str], source: list[str]) -> FragmentSet:
    """Greedy left-to-right longest-match fragments of summary in source."""
    vocab: dict[str, int] = {}
    frags = kernels.greedy_fragments(encode(summary, vocab), encode(source, vocab))
    return FragmentSet(tuple(frags), len(summary))


def coverage(f: FragmentSet) -> float:
    if f.summary_len == 0:
        raise ValueError("empty summary")
    return sum(length for _, _, length in f.fragments) / f.summary_len


def density(f: FragmentSet) -> float:
    if f.summary_len == 0:
        raise ValueError("empty summary")
    return sum(length * length for _, _, length in f.fragments) / f.summary_len
