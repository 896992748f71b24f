"""Deduplicated sentence index over one admission's notes.

Duplicate source sentences (ubiquitous in copy-pasted clinical notes) are
collapsed to one entry per normalized form; the inverted token index and
the concept (CUI) index both address unique-sentence ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..lexical.text import canonical, encode, tokenize
from .model import Admission, SourceSentenceRef


@dataclass(frozen=True)
class UniqueSentence:
    uid: int
    canonical: str
    tokens: tuple[str, ...]
    token_ids: np.ndarray  # encoded against the index vocab
    refs: tuple[SourceSentenceRef, ...]  # document order; refs[0] is representative
    text: str  # raw text of the representative occurrence

    @property
    def ref(self) -> SourceSentenceRef:
        return self.refs[0]


@dataclass
class SourceIndex:
    admission_id: str
    admission: Admission
    unique_sentences: list[UniqueSentence]
    vocab: dict[str, int]
    token_index: dict[str, tuple[int, ...]]  # token -> sorted unique-sentence ids
    cui_index: dict[str, tuple[int, ...]] = field(default_factory=dict)
    _uid_by_ref: dict[SourceSentenceRef, int] = field(default_factory=dict)

    def uid_of(self, ref: SourceSentenceRef) -> int:
        return self._uid_by_ref[ref]

    def sentence(self, uid: int) -> UniqueSentence:
        return self.unique_sentences[uid]

    def __len__(self) -> int:
        return len(self.unique_sentences)


def source_key(admission_id: str, ref: SourceSentenceRef) -> str:
    """Sidecar embedding key for a unique source sentence (by representative ref)."""
    return f"src::{admission_id}::{ref.note_id}::{ref.section_idx}::{ref.sent_idx}"


def iter_refs(admission: Admission):
    """All source sentence refs in document order (notes are timestamp-sorted)."""
    for note in admission.notes:
        for sec_idx, section in enumerate(note.sections):
            for sent_idx, text in enumerate(section.sentences):
                yield SourceSentenceRef(note.note_id, sec_idx, sent_idx), text


def build_source_index(admission: Admission, mentions=()) -> SourceIndex:
    """Index an admission; ``mentions`` adds CUI postings (entities module)."""
    vocab: dict[str, int] = {}
    by_canonical: dict[str, int] = {}
    uniques: list[dict] = []
    uid_by_ref: dict[SourceSentenceRef, int] = {}

    for ref, text in iter_refs(admission):
        tokens = tokenize(text)
        canon = " ".join(tokens)
        uid = by_canonical.get(canon)
        if uid is None:
            uid = len(uniques)
            by_canonical[canon] = uid
            uniques.append(
                {"canonical": canon, "tokens": tuple(tokens), "refs": [ref], "text": text}
            )
        else:
            uniques[uid]["refs"].append(ref)
        uid_by_ref[ref] = uid

    token_postings: dict[str, set[int]] = {}
    entries: list[UniqueSentence] = []
    for uid, entry in enumerate(uniques):
        token_ids = encode(list(entry["tokens"]), vocab)
        token_ids.setflags(write=False)
        for tok in set(entry["tokens"]):
            token_postings.setdefault(tok, set()).add(uid)
        entries.append(
            UniqueSentence(
                uid=uid,
                canonical=entry["canonical"],
                tokens=entry["tokens"],
                token_ids=token_ids,
                refs=tuple(entry["refs"]),
                text=entry["text"],
            )
        )

    cui_postings: dict[str, set[int]] = {}
    for mention in mentions:
        ref = mention.location
        if not isinstance(ref, SourceSentenceRef):
            continue  # summary-side mention
        if ref not in uid_by_ref:
            raise KeyError(f"mention location {ref} not in admission {admission.admission_id}")
        cui_postings.setdefault(mention.cui, set()).add(uid_by_ref[ref])

    return SourceIndex(
        admission_id=admission.admission_id,
        admission=admission,
        unique_sentences=entries,
        vocab=vocab,
        token_index={tok: tuple(sorted(uids)) for tok, uids in token_postings.items()},
        cui_index={cui: tuple(sorted(uids)) for cui, uids in cui_postings.items()},
        _uid_by_ref=uid_by_ref,
    )


def lookup_token(index: SourceIndex, token: str) -> tuple[int, ...]:
    return index.token_index.get(canonical(token), ())


def lookup_cuis(index: SourceIndex, cuis) -> tuple[int, ...]:
    """Unique-sentence ids whose CUI set intersects ``cuis``, in source order."""
    hits: set[int] = set()
    for cui in cuis:
        hits.update(index.cui_index.get(cui, ()))
    return tuple(sorted(hits))
