"""CUI-level entity model: mention merging, synonym relations, support lookup.

Relation probabilities come from an external classifier; this module only
consumes the table. Pairs the table does not cover default to Unrelated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from . import SchemaError
from .corpus.ingest import _iter_json_records
from .corpus.model import SourceSentenceRef

UNRELATED_TRIPLE = (1.0, 0.0, 0.0)
SYNONYM_TRIPLE = (0.0, 0.0, 1.0)
PROB_TOL = 1e-6


@dataclass(frozen=True)
class EntityMention:
    cui: str
    surface: str
    # either a source sentence ref or a (summary_id, sent_idx, char_span) triple
    location: SourceSentenceRef | tuple[str, int, tuple[int, int]]

    def __post_init__(self):
        if not self.cui:
            raise SchemaError("mention cui must be non-empty")


class RelationTable:
    """Symmetric CUI-pair lookup of (p_unrelated, p_related, p_synonym)."""

    def __init__(self, entries=()):
        self._entries: dict[frozenset, tuple[float, float, float]] = {}
        for cui_a, cui_b, *triple in entries:
            self.add(cui_a, cui_b, tuple(triple))

    def add(self, cui_a: str, cui_b: str, triple) -> None:
        triple = tuple(float(v) for v in triple)
        if len(triple) != 3 or abs(sum(triple) - 1.0) > PROB_TOL:
            raise SchemaError(f"relation ({cui_a},{cui_b}) probabilities must sum to 1")
        if any(v < 0 or v > 1 for v in triple):
            raise SchemaError(f"relation ({cui_a},{cui_b}) probabilities outside [0,1]")
        self._entries[frozenset((cui_a, cui_b))] = triple

    def lookup(self, cui_a: str, cui_b: str) -> tuple[float, float, float]:
        if cui_a == cui_b:
            return SYNONYM_TRIPLE
        return self._entries.get(frozenset((cui_a, cui_b)), UNRELATED_TRIPLE)

    def pairs(self):
        return self._entries.items()

    def __len__(self) -> int:
        return len(self._entries)


def load_relation_table(path) -> RelationTable:
    """CSV with header cui_a,cui_b,p_unrelated,p_related,p_synonym."""
    table = RelationTable()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"cui_a", "cui_b", "p_unrelated", "p_related", "p_synonym"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise SchemaError(
                f"relation table must have columns {sorted(required)}", path=Path(path)
            )
        for row in reader:
            table.add(
                row["cui_a"],
                row["cui_b"],
                (row["p_unrelated"], row["p_related"], row["p_synonym"]),
            )
    return table


def load_mentions(path) -> list[EntityMention]:
    """JSONL mention records with either source or summary locations."""
    mentions = []
    for raw in _iter_json_records(path):
        loc_raw = raw.get("location", raw)
        if "note_id" in loc_raw:
            location = SourceSentenceRef(
                note_id=str(loc_raw["note_id"]),
                section_idx=int(loc_raw["section_idx"]),
                sent_idx=int(loc_raw["sent_idx"]),
            )
        else:
            span = loc_raw.get("char_span", (0, 0))
            location = (
                str(loc_raw["summary_id"]),
                int(loc_raw["sent_idx"]),
                (int(span[0]), int(span[1])),
            )
        mentions.append(
            EntityMention(
                cui=str(raw["cui"]), surface=str(raw.get("surface", "")), location=location
            )
        )
    return mentions


def merge_mentions(mentions) -> dict[str, list[EntityMention]]:
    """Group mentions by exact CUI."""
    groups: dict[str, list[EntityMention]] = {}
    for m in mentions:
        groups.setdefault(m.cui, []).append(m)
    return groups


def best_source_relation(summary_cui: str, source_cuis, table: RelationTable):
    """The source CUI minimizing p_unrelated, with its relation triple.

    An identical CUI in the source short-circuits to a perfect synonym;
    an empty source yields (None, Unrelated).
    """
    if summary_cui in source_cuis:
        return summary_cui, SYNONYM_TRIPLE
    best = None
    best_triple = UNRELATED_TRIPLE
    for cui in source_cuis:
        triple = table.lookup(summary_cui, cui)
        if best is None or triple[0] < best_triple[0]:
            best, best_triple = cui, triple
    return best, best_triple


def expand_synonyms(cuis, table: RelationTable, threshold: float = 0.5, multi_hop: bool = False):
    """Closure of ``cuis`` over pairs with p_synonym >= threshold.

    Single hop by default: the classifier is pairwise and transitivity is
    not assumed. ``multi_hop`` iterates to a fixed point instead.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")
    expanded = set(cuis)
    frontier = set(expanded)
    while frontier:
        added = set()
        for pair, triple in table.pairs():
            if triple[2] < threshold:
                continue
            a, b = tuple(pair) if len(pair) == 2 else (next(iter(pair)),) * 2
            if a in frontier and b not in expanded:
                added.add(b)
            if b in frontier and a not in expanded:
                added.add(a)
        expanded |= added
        frontier = added if multi_hop else set()
    return expanded
