"""Data model and ingestion for admissions, summaries, annotations, sidecars."""

from .index import SourceIndex, UniqueSentence, build_source_index, iter_refs, source_key
from .ingest import (
    SidecarBundle,
    admission_to_dict,
    ingest_admission,
    load_annotations,
    load_sidecar,
    load_summary,
    parse_admission,
    parse_annotation,
    parse_summary,
    split_sentences,
    summary_to_dict,
)
from .model import (
    Admission,
    AnnotationRecord,
    ERROR_CATEGORIES,
    ErrorCategory,
    Note,
    Section,
    Severity,
    SourceSentenceRef,
    SummaryElement,
    SummaryKind,
    SummaryRecord,
    SummarySentence,
)

__all__ = [
    "Admission",
    "AnnotationRecord",
    "ERROR_CATEGORIES",
    "ErrorCategory",
    "Note",
    "Section",
    "Severity",
    "SidecarBundle",
    "SourceIndex",
    "SourceSentenceRef",
    "SummaryElement",
    "SummaryKind",
    "SummaryRecord",
    "SummarySentence",
    "UniqueSentence",
    "admission_to_dict",
    "build_source_index",
    "ingest_admission",
    "iter_refs",
    "load_annotations",
    "load_sidecar",
    "load_summary",
    "parse_admission",
    "parse_annotation",
    "parse_summary",
    "source_key",
    "split_sentences",
    "summary_to_dict",
]
