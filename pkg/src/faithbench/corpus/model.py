"""Canonical data model: admissions, summaries, elements, annotations."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from .. import SchemaError

UNTITLED = "UNTITLED"


class SummaryKind(str, Enum):
    REFERENCE = "reference"
    SYSTEM = "system"


class ErrorCategory(str, Enum):
    NO_ERROR = "NoError"
    NOT_IN_NOTES = "NotInNotes"
    INCORRECT = "Incorrect"
    MISSING = "Missing"


class Severity(str, Enum):
    NONE = "None"
    MINOR = "Minor"
    CRITICAL = "Critical"


#: categories that count as an error for the human error rate
ERROR_CATEGORIES = frozenset(
    {ErrorCategory.NOT_IN_NOTES, ErrorCategory.INCORRECT, ErrorCategory.MISSING}
)


@dataclass(frozen=True)
class Section:
    header: str
    sentences: tuple[str, ...]  # document order


@dataclass(frozen=True)
class Note:
    note_id: str
    title: str
    timestamp: datetime
    sections: tuple[Section, ...]


@dataclass(frozen=True)
class Admission:
    admission_id: str
    notes: tuple[Note, ...]  # sorted ascending by timestamp
    patient_meta: dict = field(default_factory=dict)

    def note(self, note_id: str) -> Note:
        for n in self.notes:
            if n.note_id == note_id:
                return n
        raise KeyError(note_id)


@dataclass(frozen=True, order=True)
class SourceSentenceRef:
    """Address of one source sentence; ordering fields mirror document order
    only within a note (cross-note order comes from note timestamps)."""

    note_id: str
    section_idx: int
    sent_idx: int

    def resolve(self, admission: Admission) -> str:
        note = admission.note(self.note_id)
        try:
            return note.sections[self.section_idx].sentences[self.sent_idx]
        except IndexError:
            raise KeyError(f"unresolvable ref {self}") from None

    def as_dict(self) -> dict:
        return {
            "note_id": self.note_id,
            "section_idx": self.section_idx,
            "sent_idx": self.sent_idx,
        }


@dataclass(frozen=True)
class SummaryElement:
    element_id: str
    char_span: tuple[int, int]  # byte offsets into the UTF-8 sentence text
    surface: str
    cuis: tuple[str, ...] = ()


@dataclass(frozen=True)
class SummarySentence:
    sent_idx: int
    text: str
    elements: tuple[SummaryElement, ...] = ()


@dataclass(frozen=True)
class SummaryRecord:
    summary_id: str
    admission_id: str
    kind: SummaryKind
    sentences: tuple[SummarySentence, ...]

    def sentence(self, sent_idx: int) -> SummarySentence:
        return self.sentences[sent_idx]

    def element_ids(self) -> set[str]:
        return {e.element_id for s in self.sentences for e in s.elements}


@dataclass(frozen=True)
class AnnotationRecord:
    element_id: str
    summary_id: str
    sent_idx: int
    category: ErrorCategory
    severity: Severity
    annotator_id: str
    wall_time: datetime

    def __post_init__(self):
        check_category_severity(self.category, self.severity)

    def as_dict(self) -> dict:
        return {
            "element_id": self.element_id,
            "summary_id": self.summary_id,
            "sent_idx": self.sent_idx,
            "category": self.category.value,
            "severity": self.severity.value,
            "annotator_id": self.annotator_id,
            "wall_time": self.wall_time.isoformat(),
        }


def check_category_severity(category: ErrorCategory, severity: Severity) -> None:
    """Severity carries information only for Incorrect/Missing judgments."""
    graded = category in (ErrorCategory.INCORRECT, ErrorCategory.MISSING)
    if graded and severity is Severity.NONE:
        raise SchemaError(
            f"category {category.value} requires severity Minor or Critical"
        )
    if not graded and severity is not Severity.NONE:
        raise SchemaError(
            f"category {category.value} must not carry severity {severity.value}"
        )
