"""Text normalization, tokenization, and token-id encoding.

One normalization scheme is used everywhere (dedup, indexing, ROUGE):
NFC, lowercase, whitespace-collapsed, surrounding punctuation stripped
from each token.
"""

from __future__ import annotations

import unicodedata

import numpy as np


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[str]:
    """Deterministic normalized tokens; empty input gives an empty list."""
    text = unicodedata.normalize("NFC", text).lower()
    tokens = []
    for raw in text.split():
        start, end = 0, len(raw)
        while start < end and _is_punct(raw[start]):
            start += 1
        while end > start and _is_punct(raw[end - 1]):
            end -= 1
        if end > start:
            tokens.append(raw[start:end])
    return tokens


def canonical(text: str) -> str:
    """Normalized form used for duplicate-sentence comparison."""
    return " ".join(tokenize(text))


def encode(tokens: list[str], vocab: dict[str, int] | None = None) -> np.ndarray:
    """Map tokens to int32 ids for the sequence kernels.

    With a shared ``vocab`` the mapping extends it in place, so sequences
    encoded against the same vocab are mutually comparable.
    """
    if vocab is None:
        vocab = {}
    ids = np.empty(len(tokens), dtype=np.int32)
    for i, tok in enumerate(tokens):
        idx = vocab.get(tok)
        if idx is None:
            idx = len(vocab)
            vocab[tok] = idx
        ids[i] = idx
    return ids


def encode_against(tokens: list[str], vocab: dict[str, int]) -> np.ndarray:
    """Encode without mutating ``vocab``; unseen tokens get fresh local ids."""
    local: dict[str, int] = {}
    base = len(vocab)
    ids = np.empty(len(tokens), dtype=np.int32)
    for i, tok in enumerate(tokens):
        idx = vocab.get(tok)
        if idx is None:
            idx = local.get(tok)
            if idx is None:
                idx = base + len(local)
                local[tok] = idx
        ids[i] = idx
    return ids
