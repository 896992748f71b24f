"""Append-only annotation persistence with an in-memory latest view."""

from __future__ import annotations

import json
import threading
from pathlib import Path

from ..corpus.ingest import parse_annotation
from ..corpus.model import AnnotationRecord


class AnnotationStore:
    """JSONL log of AnnotationRecords; the log is never rewritten.

    The latest view keeps the last record per (element_id, annotator_id);
    replaying the log after a crash reconstructs it exactly.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._log: list[AnnotationRecord] = []
        self._latest: dict[tuple[str, str], AnnotationRecord] = {}
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def _replay(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = parse_annotation(json.loads(line), self.path)
                self._apply(record)

    def _apply(self, record: AnnotationRecord) -> None:
        self._log.append(record)
        self._latest[(record.element_id, record.annotator_id)] = record

    def append(self, record: AnnotationRecord) -> None:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.as_dict()) + "\n")
                fh.flush()
            self._apply(record)

    @property
    def log(self) -> tuple[AnnotationRecord, ...]:
        return tuple(self._log)

    def latest_view(self) -> dict[tuple[str, str], AnnotationRecord]:
        return dict(self._latest)

    def latest_for_element(self, element_id: str) -> dict[str, AnnotationRecord]:
        return {
            annotator: rec
            for (eid, annotator), rec in self._latest.items()
            if eid == element_id
        }

    def annotated_elements(self) -> set[str]:
        return {eid for eid, _ in self._latest}

    def per_annotator_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for _, annotator in self._latest:
            counts[annotator] = counts.get(annotator, 0) + 1
        return counts
