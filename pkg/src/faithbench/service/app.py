"""HTTP service backing the annotation UI.

Read endpoints serve admissions, keyword search, and concept lookups over
the immutable source index; POST /annotations appends to the store.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Header, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import SchemaError
from ..corpus.index import SourceIndex, build_source_index
from ..corpus.ingest import ingest_admission, load_summary, parse_annotation, summary_to_dict
from ..corpus.model import Admission, SourceSentenceRef, SummaryRecord
from ..entities import RelationTable, expand_synonyms, load_mentions, load_relation_table
from ..lexical.text import tokenize
from .store import AnnotationStore

_WORD = re.compile(r"\S+")


@dataclass
class ServiceCorpus:
    admissions: dict[str, Admission] = field(default_factory=dict)
    indexes: dict[str, SourceIndex] = field(default_factory=dict)
    summaries: dict[str, SummaryRecord] = field(default_factory=dict)
    relations: RelationTable | None = None
    synonym_threshold: float = 0.5

    def element_ids(self) -> set[str]:
        ids: set[str] = set()
        for summary in self.summaries.values():
            ids |= summary.element_ids()
        return ids


def load_service_corpus(root) -> ServiceCorpus:
    """Corpus layout: admissions/*.json, summaries/*.json, optional
    mentions.jsonl and relations.csv at the root."""
    root = Path(root)
    corpus = ServiceCorpus()
    mentions_path = root / "mentions.jsonl"
    mentions = load_mentions(mentions_path) if mentions_path.exists() else []
    relations_path = root / "relations.csv"
    if relations_path.exists():
        corpus.relations = load_relation_table(relations_path)
    for path in sorted((root / "admissions").glob("*.json")):
        admission = ingest_admission(path)
        corpus.admissions[admission.admission_id] = admission
        corpus.indexes[admission.admission_id] = build_source_index(
            admission,
            [m for m in mentions if hasattr(m.location, "note_id")],
        )
    for path in sorted((root / "summaries").glob("*.json")):
        summary = load_summary(path)
        corpus.summaries[summary.summary_id] = summary
    return corpus


def _note_position(admission: Admission) -> dict[str, int]:
    return {note.note_id: i for i, note in enumerate(admission.notes)}


def _anchor(admission: Admission, ref: SourceSentenceRef) -> str:
    pos = _note_position(admission)[ref.note_id]
    return f"n{pos}s{ref.section_idx}s{ref.sent_idx}"


def _match_offsets(text: str, wanted: set[str]) -> list[tuple[int, int]]:
    """Char offsets of raw words whose normalized form is in ``wanted``."""
    offsets = []
    for m in _WORD.finditer(text):
        raw = m.group()
        start, end = m.start(), m.end()
        # strip the same surrounding punctuation tokenize() strips
        while start < end and unicodedata.category(text[start]).startswith("P"):
            start += 1
        while end > start and unicodedata.category(text[end - 1]).startswith("P"):
            end -= 1
        if start >= end:
            continue
        core = unicodedata.normalize("NFC", text[start:end]).lower()
        if core in wanted:
            offsets.append((start, end))
    return offsets


def create_app(corpus: ServiceCorpus, store: AnnotationStore) -> FastAPI:
    app = FastAPI(title="faithbench annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.corpus = corpus
    app.state.store = store

    def _admission_or_404(admission_id: str):
        admission = corpus.admissions.get(admission_id)
        if admission is None:
            return None, JSONResponse(
                {"detail": f"unknown admission {admission_id!r}"}, status_code=404
            )
        return admission, None

    @app.get("/admissions/{admission_id}/notes")
    def get_notes(admission_id: str):
        admission, err = _admission_or_404(admission_id)
        if err:
            return err
        payload = []
        for pos, note in enumerate(admission.notes):
            payload.append(
                {
                    "note_id": note.note_id,
                    "title": note.title,
                    "timestamp": note.timestamp.isoformat(),
                    "anchor": f"n{pos}",
                    "sections": [
                        {
                            "header": section.header,
                            "anchor": f"n{pos}s{sec_idx}",
                            "sentences": [
                                {"anchor": f"n{pos}s{sec_idx}s{i}", "text": text}
                                for i, text in enumerate(section.sentences)
                            ],
                        }
                        for sec_idx, section in enumerate(note.sections)
                    ],
                }
            )
        return {"admission_id": admission_id, "notes": payload}

    @app.get("/admissions/{admission_id}/search")
    def search(admission_id: str, q: str = ""):
        admission, err = _admission_or_404(admission_id)
        if err:
            return err
        terms = tokenize(q)
        if not terms:
            return JSONResponse({"detail": "empty query"}, status_code=400)
        index = corpus.indexes[admission_id]
        postings = [set(index.token_index.get(t, ())) for t in terms]
        uids = set.intersection(*postings) if postings else set()
        note_pos = _note_position(admission)
        hits = []
        for uid in uids:
            unique = index.sentence(uid)
            for ref in unique.refs:
                text = ref.resolve(admission)
                hits.append(
                    {
                        "ref": ref.as_dict(),
                        "anchor": _anchor(admission, ref),
                        "snippet": text,
                        "match_offsets": _match_offsets(text, set(terms)),
                        "note_title": admission.note(ref.note_id).title,
                        "timestamp": admission.note(ref.note_id).timestamp.isoformat(),
                        "uid": uid,
                    }
                )
        hits.sort(
            key=lambda h: (
                note_pos[h["ref"]["note_id"]],
                h["ref"]["section_idx"],
                h["ref"]["sent_idx"],
            )
        )
        return {"query": q, "hits": hits}

    @app.get("/admissions/{admission_id}/concepts/{cui}")
    def concept_mentions(admission_id: str, cui: str):
        admission, err = _admission_or_404(admission_id)
        if err:
            return err
        index = corpus.indexes[admission_id]
        cuis = {cui}
        if corpus.relations is not None:
            cuis = expand_synonyms(cuis, corpus.relations, corpus.synonym_threshold)
        uids = sorted({u for c in cuis for u in index.cui_index.get(c, ())})
        note_pos = _note_position(admission)
        mentions = []
        for uid in uids:
            for ref in index.sentence(uid).refs:
                mentions.append(
                    {
                        "ref": ref.as_dict(),
                        "anchor": _anchor(admission, ref),
                        "text": ref.resolve(admission),
                        "uid": uid,
                    }
                )
        mentions.sort(
            key=lambda m: (
                note_pos[m["ref"]["note_id"]],
                m["ref"]["section_idx"],
                m["ref"]["sent_idx"],
            )
        )
        return {"cui": cui, "expanded_cuis": sorted(cuis), "mentions": mentions}

    @app.post("/annotations", status_code=201)
    async def post_annotation(
        request: Request, x_annotator_id: str | None = Header(default=None)
    ):
        raw = await request.json()
        if x_annotator_id:
            raw["annotator_id"] = x_annotator_id
        try:
            record = parse_annotation(raw)
        except SchemaError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        summary = corpus.summaries.get(record.summary_id)
        if summary is None or record.element_id not in summary.element_ids():
            return JSONResponse(
                {
                    "detail": f"unknown element {record.element_id!r} "
                    f"for summary {record.summary_id!r}"
                },
                status_code=409,
            )
        store.append(record)
        return record.as_dict()

    @app.get("/summaries/{summary_id}")
    def get_summary(summary_id: str):
        summary = corpus.summaries.get(summary_id)
        if summary is None:
            return JSONResponse(
                {"detail": f"unknown summary {summary_id!r}"}, status_code=404
            )
        states = {}
        for sent in summary.sentences:
            for element in sent.elements:
                by_annotator = store.latest_for_element(element.element_id)
                states[element.element_id] = {
                    "state": "Annotated" if by_annotator else "NoAnnotation",
                    "by_annotator": {a: r.as_dict() for a, r in by_annotator.items()},
                }
        return {"summary": summary_to_dict(summary), "elements": states}

    @app.get("/progress")
    def progress():
        total = len(corpus.element_ids())
        annotated = len(store.annotated_elements() & corpus.element_ids())
        return {
            "per_annotator": store.per_annotator_counts(),
            "total_elements": total,
            "annotated_elements": annotated,
            "fraction": annotated / total if total else 0.0,
            "complete": annotated == total,
        }

    return app
