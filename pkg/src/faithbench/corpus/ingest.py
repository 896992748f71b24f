"""File ingestion: admissions, summaries, annotations, sidecar bundles.

All inputs are JSON documents (single-object or line-delimited, see
README for the exact field layout). Validation failures raise SchemaError
with the offending path and field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from .. import SchemaError
from .model import (
    Admission,
    AnnotationRecord,
    ErrorCategory,
    Note,
    Section,
    Severity,
    SummaryElement,
    SummaryKind,
    SummaryRecord,
    SummarySentence,
    UNTITLED,
)

# sentence boundary: terminal punctuation followed by whitespace; newlines
# always split
_SENT_BOUNDARY = re.compile(r"(?<=[.!?])\s+")

PROB_TOL = 1e-6


def split_sentences(text: str) -> list[str]:
    """Rule-based splitter: newlines plus terminal-punctuation boundaries."""
    out = []
    for line in text.splitlines():
        for piece in _SENT_BOUNDARY.split(line):
            piece = piece.strip()
            if piece:
                out.append(piece)
    return out


def _parse_timestamp(value, path, field_name) -> datetime:
    if not isinstance(value, str):
        raise SchemaError("timestamp must be an ISO-8601 string", path=path, field=field_name)
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError as exc:
        raise SchemaError(f"bad timestamp {value!r}: {exc}", path=path, field=field_name)


def _require(obj: dict, key: str, path) -> object:
    if key not in obj:
        raise SchemaError("required field missing", path=path, field=key)
    return obj[key]


def _check_id(value, path, field_name) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError("must be a non-empty string", path=path, field=field_name)
    if "::" in value:
        raise SchemaError("ids must not contain '::'", path=path, field=field_name)
    return value


def _parse_section(raw: dict, path) -> Section:
    header = str(raw.get("header", "")).strip()
    if not header:
        header = UNTITLED
    if "sentences" in raw:
        sentences = tuple(str(s) for s in raw["sentences"])
    elif "text" in raw:
        sentences = tuple(split_sentences(str(raw["text"])))
    else:
        raise SchemaError("section needs 'sentences' or 'text'", path=path, field="sections")
    return Section(header=header, sentences=sentences)


def parse_admission(raw: dict, path=None) -> Admission:
    admission_id = _check_id(_require(raw, "admission_id", path), path, "admission_id")
    notes_raw = _require(raw, "notes", path)
    if not isinstance(notes_raw, list):
        raise SchemaError("must be a list", path=path, field="notes")
    notes = []
    seen_ids = set()
    for note_raw in notes_raw:
        note_id = _check_id(_require(note_raw, "note_id", path), path, "note_id")
        if note_id in seen_ids:
            raise SchemaError(f"duplicate note id {note_id!r}", path=path, field="note_id")
        seen_ids.add(note_id)
        timestamp = _parse_timestamp(_require(note_raw, "timestamp", path), path, "timestamp")
        sections = tuple(
            _parse_section(s, path) for s in _require(note_raw, "sections", path)
        )
        if not sections:
            raise SchemaError(
                f"note {note_id!r} has no sections", path=path, field="sections"
            )
        notes.append(
            Note(
                note_id=note_id,
                title=str(note_raw.get("title", "")),
                timestamp=timestamp,
                sections=sections,
            )
        )
    notes.sort(key=lambda n: n.timestamp)  # stable: preserves input order on ties
    return Admission(
        admission_id=admission_id,
        notes=tuple(notes),
        patient_meta=dict(raw.get("patient_meta", {})),
    )


def ingest_admission(path) -> Admission:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", path=path)
    return parse_admission(raw, path)


def _surface_at(text: str, span: tuple[int, int], path) -> str:
    data = text.encode("utf-8")
    start, end = span
    if not (0 <= start < end <= len(data)):
        raise SchemaError(
            f"char_span {span} outside sentence of {len(data)} bytes",
            path=path,
            field="char_span",
        )
    try:
        return data[start:end].decode("utf-8")
    except UnicodeDecodeError:
        raise SchemaError(
            f"char_span {span} splits a multi-byte character", path=path, field="char_span"
        )


def _parse_element(raw: dict, sentence_text: str, path) -> SummaryElement:
    element_id = _check_id(_require(raw, "element_id", path), path, "element_id")
    span_raw = _require(raw, "char_span", path)
    if not (isinstance(span_raw, (list, tuple)) and len(span_raw) == 2):
        raise SchemaError("char_span must be a [start, end] pair", path=path, field="char_span")
    span = (int(span_raw[0]), int(span_raw[1]))
    surface = _surface_at(sentence_text, span, path)
    if "surface" in raw and raw["surface"] != surface:
        raise SchemaError(
            f"surface {raw['surface']!r} does not match span text {surface!r}",
            path=path,
            field="surface",
        )
    return SummaryElement(
        element_id=element_id,
        char_span=span,
        surface=surface,
        cuis=tuple(str(c) for c in raw.get("cuis", [])),
    )


def parse_summary(raw: dict, path=None) -> SummaryRecord:
    summary_id = _check_id(_require(raw, "summary_id", path), path, "summary_id")
    admission_id = _check_id(_require(raw, "admission_id", path), path, "admission_id")
    kind_raw = _require(raw, "kind", path)
    try:
        kind = SummaryKind(kind_raw)
    except ValueError:
        raise SchemaError(f"unknown kind {kind_raw!r}", path=path, field="kind")
    sentences_raw = _require(raw, "sentences", path)
    if not sentences_raw:
        raise SchemaError("summary must have at least one sentence", path=path, field="sentences")
    sentences = []
    element_ids = set()
    for expected_idx, sent_raw in enumerate(sentences_raw):
        sent_idx = int(_require(sent_raw, "sent_idx", path))
        if sent_idx != expected_idx:
            raise SchemaError(
                f"sentence indices must be contiguous from 0; got {sent_idx} "
                f"at position {expected_idx}",
                path=path,
                field="sent_idx",
            )
        text = str(_require(sent_raw, "text", path))
        elements = tuple(
            _parse_element(e, text, path) for e in sent_raw.get("elements", [])
        )
        spans = sorted(e.char_span for e in elements)
        for (s1, e1), (s2, _) in zip(spans, spans[1:]):
            if s2 < e1:
                raise SchemaError(
                    f"overlapping element spans ({s1},{e1}) and starting {s2} "
                    f"in sentence {sent_idx}",
                    path=path,
                    field="char_span",
                )
        for e in elements:
            if e.element_id in element_ids:
                raise SchemaError(
                    f"duplicate element id {e.element_id!r}", path=path, field="element_id"
                )
            element_ids.add(e.element_id)
        sentences.append(SummarySentence(sent_idx=sent_idx, text=text, elements=elements))
    return SummaryRecord(
        summary_id=summary_id,
        admission_id=admission_id,
        kind=kind,
        sentences=tuple(sentences),
    )


def load_summary(path) -> SummaryRecord:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", path=path)
    return parse_summary(raw, path)


def parse_annotation(raw: dict, path=None) -> AnnotationRecord:
    try:
        category = ErrorCategory(_require(raw, "category", path))
    except ValueError:
        raise SchemaError(f"unknown category {raw.get('category')!r}", path=path, field="category")
    severity_raw = raw.get("severity")
    if severity_raw is None:
        severity = Severity.NONE
    else:
        try:
            severity = Severity(severity_raw)
        except ValueError:
            raise SchemaError(
                f"unknown severity {severity_raw!r}", path=path, field="severity"
            )
    try:
        return AnnotationRecord(
            element_id=_check_id(_require(raw, "element_id", path), path, "element_id"),
            summary_id=_check_id(_require(raw, "summary_id", path), path, "summary_id"),
            sent_idx=int(_require(raw, "sent_idx", path)),
            category=category,
            severity=severity,
            annotator_id=_check_id(_require(raw, "annotator_id", path), path, "annotator_id"),
            wall_time=_parse_timestamp(
                raw.get("wall_time", "1970-01-01T00:00:00"), path, "wall_time"
            ),
        )
    except SchemaError as exc:
        if exc.path is None and path is not None:
            raise SchemaError(str(exc), path=path)
        raise


def _iter_json_records(path):
    """Yield records from a JSON array file or a JSONL file."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        return
    if text.startswith("["):
        yield from json.loads(text)
        return
    for i, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {i + 1}: invalid JSON: {exc}", path=path)


def load_annotations(path, summary: SummaryRecord | None = None) -> list[AnnotationRecord]:
    """Load annotations; with a summary given, cross-check element ids."""
    path = Path(path)
    records = [parse_annotation(raw, path) for raw in _iter_json_records(path)]
    if summary is not None:
        known = summary.element_ids()
        for rec in records:
            if rec.summary_id != summary.summary_id:
                raise SchemaError(
                    f"annotation for summary {rec.summary_id!r} does not match "
                    f"summary {summary.summary_id!r}",
                    path=path,
                )
            if rec.element_id not in known:
                raise SchemaError(
                    f"annotation references unknown element {rec.element_id!r}",
                    path=path,
                )
    return records


# --- sidecar bundle ---------------------------------------------------------


@dataclass
class SidecarBundle:
    """Externally produced model artifacts consumed by the scorers.

    Key conventions (all parts joined with '::'):
      embeddings          'sum::<summary_id>::<sent_idx>', 'sumfull::<summary_id>',
                          'rev::<summary_id>::<sent_idx>', or
                          'src::<admission_id>::<note_id>::<sec_idx>::<sent_idx>'
      token_logprobs      (summary_id, sent_idx, variant) -> float array
      summary_logprobs    (summary_id, variant) -> (float array, boundaries)
      token_fake_probs    (summary_id, sent_idx, variant) -> float array in [0,1]
      nli_probs           (summary_id, sent_idx, premise_id) -> (p_c, p_n, p_e)
      supported_probs     (summary_id, sent_idx, variant) -> float in [0,1]
      revised_texts       summary_id -> revised sentence list
    """

    embeddings: dict[str, np.ndarray] = field(default_factory=dict)
    token_logprobs: dict[tuple[str, int, str], np.ndarray] = field(default_factory=dict)
    summary_logprobs: dict[tuple[str, str], tuple[np.ndarray, tuple[tuple[int, int], ...]]] = field(
        default_factory=dict
    )
    token_fake_probs: dict[tuple[str, int, str], np.ndarray] = field(default_factory=dict)
    nli_probs: dict[tuple[str, int, str], tuple[float, float, float]] = field(default_factory=dict)
    supported_probs: dict[tuple[str, int, str], float] = field(default_factory=dict)
    revised_texts: dict[str, tuple[str, ...]] = field(default_factory=dict)
    summary_embedding_boundaries: dict[str, tuple[tuple[int, int], ...]] = field(
        default_factory=dict
    )
    entity_relations: list[tuple[str, str, float, float, float]] = field(default_factory=list)
    dim: int | None = None

    def embedding(self, key: str) -> np.ndarray:
        try:
            return self.embeddings[key]
        except KeyError:
            raise KeyError(f"missing embeddings for {key!r}") from None


def _check_embedding_dim(bundle: SidecarBundle, mat: np.ndarray, key: str, path) -> None:
    if mat.ndim != 2 or mat.shape[0] == 0:
        raise SchemaError(
            f"embedding {key!r} must be a non-empty 2-D matrix", path=path, field="embeddings"
        )
    if bundle.dim is None:
        bundle.dim = mat.shape[1]
    elif mat.shape[1] != bundle.dim:
        raise SchemaError(
            f"embedding {key!r} has dimension {mat.shape[1]}, bundle uses {bundle.dim}",
            path=path,
            field="embeddings",
        )


def _load_embedding_file(bundle: SidecarBundle, header_path: Path, path) -> None:
    with open(header_path, encoding="utf-8") as fh:
        header = json.load(fh)
    dim = int(header["dim"])
    data_path = header_path.parent / header.get("data", header_path.stem + ".bin")
    flat = np.fromfile(data_path, dtype="<f4")
    if flat.size % dim:
        raise SchemaError(
            f"{data_path} holds {flat.size} floats, not divisible by dim {dim}", path=path
        )
    rows = flat.reshape(-1, dim).astype(np.float64)
    for key, (offset, count) in header["index"].items():
        if offset + count > rows.shape[0]:
            raise SchemaError(f"embedding index for {key!r} exceeds data", path=path)
        mat = rows[offset : offset + count]
        _check_embedding_dim(bundle, mat, key, path)
        bundle.embeddings[key] = mat


def _split_key(key: str, parts: int, path, field_name) -> list[str]:
    pieces = key.split("::", parts - 1)
    if len(pieces) != parts:
        raise SchemaError(
            f"key {key!r} must have {parts} '::'-separated parts", path=path, field=field_name
        )
    return pieces


def _float_array(values, key, path, field_name, low=None, high=None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise SchemaError(f"{key!r} must be a non-empty array", path=path, field=field_name)
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{key!r} contains non-finite values", path=path, field=field_name)
    if low is not None and (arr.min() < low or arr.max() > high):
        raise SchemaError(
            f"{key!r} values must lie in [{low}, {high}]", path=path, field=field_name
        )
    return arr


def _check_triple(values, key, path, field_name) -> tuple[float, float, float]:
    triple = tuple(float(v) for v in values)
    if len(triple) != 3 or any(v < 0 or v > 1 for v in triple):
        raise SchemaError(
            f"{key!r} must be a probability triple", path=path, field=field_name
        )
    if abs(sum(triple) - 1.0) > PROB_TOL:
        raise SchemaError(
            f"{key!r} probabilities sum to {sum(triple)}, not 1", path=path, field=field_name
        )
    return triple


def _parse_boundaries(raw, n_tokens: int, key: str, path, field_name):
    bounds = tuple((int(s), int(e)) for s, e in raw)
    pos = 0
    for s, e in bounds:
        if s != pos or e <= s:
            raise SchemaError(
                f"{key!r} boundaries must partition [0, {n_tokens}) in order",
                path=path,
                field=field_name,
            )
        pos = e
    if pos != n_tokens:
        raise SchemaError(
            f"{key!r} boundaries cover [0, {pos}), expected [0, {n_tokens})",
            path=path,
            field=field_name,
        )
    return bounds


def load_sidecar(path) -> SidecarBundle:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    bundle = SidecarBundle()

    for key, mat_raw in raw.get("embeddings", {}).items():
        mat = np.asarray(mat_raw, dtype=np.float64)
        _check_embedding_dim(bundle, mat, key, path)
        bundle.embeddings[key] = mat
    for entry in raw.get("embedding_files", []):
        _load_embedding_file(bundle, path.parent / entry["header"], path)

    for key, values in raw.get("token_logprobs", {}).items():
        sid, idx, variant = _split_key(key, 3, path, "token_logprobs")
        arr = _float_array(values, key, path, "token_logprobs")
        if arr.max() > 0:
            raise SchemaError(
                f"{key!r} log-likelihoods must be <= 0", path=path, field="token_logprobs"
            )
        bundle.token_logprobs[(sid, int(idx), variant)] = arr

    for key, entry in raw.get("summary_logprobs", {}).items():
        sid, variant = _split_key(key, 2, path, "summary_logprobs")
        arr = _float_array(entry["values"], key, path, "summary_logprobs")
        bounds = _parse_boundaries(
            entry["boundaries"], arr.size, key, path, "summary_logprobs"
        )
        bundle.summary_logprobs[(sid, variant)] = (arr, bounds)

    for key, values in raw.get("token_fake_probs", {}).items():
        sid, idx, variant = _split_key(key, 3, path, "token_fake_probs")
        bundle.token_fake_probs[(sid, int(idx), variant)] = _float_array(
            values, key, path, "token_fake_probs", low=0.0, high=1.0
        )

    for key, values in raw.get("nli_probs", {}).items():
        sid, idx, premise = _split_key(key, 3, path, "nli_probs")
        bundle.nli_probs[(sid, int(idx), premise)] = _check_triple(
            values, key, path, "nli_probs"
        )

    for key, value in raw.get("supported_probs", {}).items():
        sid, idx, variant = _split_key(key, 3, path, "supported_probs")
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise SchemaError(
                f"{key!r} probability {value} outside [0,1]", path=path, field="supported_probs"
            )
        bundle.supported_probs[(sid, int(idx), variant)] = value

    for sid, sentences in raw.get("revised_texts", {}).items():
        bundle.revised_texts[str(sid)] = tuple(str(s) for s in sentences)

    for sid, bounds_raw in raw.get("summary_embedding_boundaries", {}).items():
        key = f"sumfull::{sid}"
        if key not in bundle.embeddings:
            raise SchemaError(
                f"boundaries given for {sid!r} but no 'sumfull' embedding present",
                path=path,
                field="summary_embedding_boundaries",
            )
        n_rows = bundle.embeddings[key].shape[0]
        bundle.summary_embedding_boundaries[str(sid)] = _parse_boundaries(
            bounds_raw, n_rows, key, path, "summary_embedding_boundaries"
        )

    for row in raw.get("entity_relations", []):
        cui_a, cui_b = str(row[0]), str(row[1])
        triple = _check_triple(row[2:5], f"{cui_a},{cui_b}", path, "entity_relations")
        bundle.entity_relations.append((cui_a, cui_b, *triple))

    return bundle


# --- serialization (round-trip support) --------------------------------------


def admission_to_dict(a: Admission) -> dict:
    return {
        "admission_id": a.admission_id,
        "patient_meta": a.patient_meta,
        "notes": [
            {
                "note_id": n.note_id,
                "title": n.title,
                "timestamp": n.timestamp.isoformat(),
                "sections": [
                    {"header": s.header, "sentences": list(s.sentences)} for s in n.sections
                ],
            }
            for n in a.notes
        ],
    }


def summary_to_dict(s: SummaryRecord) -> dict:
    return {
        "summary_id": s.summary_id,
        "admission_id": s.admission_id,
        "kind": s.kind.value,
        "sentences": [
            {
                "sent_idx": sent.sent_idx,
                "text": sent.text,
                "elements": [
                    {
                        "element_id": e.element_id,
                        "char_span": list(e.char_span),
                        "surface": e.surface,
                        "cuis": list(e.cuis),
                    }
                    for e in sent.elements
                ],
            }
            for sent in s.sentences
        ],
    }
