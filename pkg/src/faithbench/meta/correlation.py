"""Human error rate, Pearson correlation, category breakdowns, Williams test."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats as _scipy_stats

from ..corpus.model import ERROR_CATEGORIES, AnnotationRecord, ErrorCategory, SummaryRecord
from ..scorers.runner import MetricVector

logger = logging.getLogger(__name__)

Key = tuple[str, int]


@dataclass(frozen=True)
class HumanErrorVector:
    """Per-sentence fraction of summary elements marked with any error.

    Sentences without summary elements are excluded (listed in ``skipped``).
    """

    values: dict[Key, float]
    se_counts: dict[Key, int]
    skipped: tuple[Key, ...] = ()

    def keys(self):
        return self.values.keys()


def latest_judgments(annotations) -> dict[tuple[str, str], AnnotationRecord]:
    """Last record per (element, annotator), by wall time then arrival order."""
    latest: dict[tuple[str, str], AnnotationRecord] = {}
    for rec in annotations:
        key = (rec.element_id, rec.annotator_id)
        if key not in latest or rec.wall_time >= latest[key].wall_time:
            latest[key] = rec
    return latest


def element_error_flags(annotations, categories=ERROR_CATEGORIES) -> dict[str, bool]:
    """element_id -> whether any annotator's latest judgment is an error."""
    flags: dict[str, bool] = {}
    for (element_id, _), rec in latest_judgments(annotations).items():
        flags[element_id] = flags.get(element_id, False) or rec.category in categories
    return flags


def herr_sentence(annotations, n_elements: int) -> float:
    """Errored-element fraction for one sentence; undefined without elements."""
    if n_elements < 1:
        raise ValueError("sentence has no summary elements; error rate undefined")
    flags = element_error_flags(annotations)
    return sum(flags.values()) / n_elements


def build_herr(summaries, annotations) -> HumanErrorVector:
    """Assemble the per-sentence human error vector over several summaries."""
    flags = element_error_flags(annotations)
    values: dict[Key, float] = {}
    counts: dict[Key, int] = {}
    skipped: list[Key] = []
    for summary in summaries:
        for sent in summary.sentences:
            key = (summary.summary_id, sent.sent_idx)
            if not sent.elements:
                skipped.append(key)
                continue
            errored = sum(1 for e in sent.elements if flags.get(e.element_id, False))
            values[key] = errored / len(sent.elements)
            counts[key] = len(sent.elements)
    return HumanErrorVector(values=values, se_counts=counts, skipped=tuple(skipped))


def pearson(x, y) -> float:
    """Definitional Pearson correlation; rejects short or constant input."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D vectors of equal length")
    if x.size < 3:
        raise ValueError(f"need at least 3 observations, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance")
    return float((dx @ dy) / math.sqrt(sx * sy))


class ReportCategory(str, Enum):
    ANY = "Any"
    INCORRECT = "Incorrect"
    MISSING = "Missing"
    NOT_IN_NOTES = "NotInNotes"


_CATEGORY_SETS = {
    ReportCategory.ANY: ERROR_CATEGORIES,
    ReportCategory.INCORRECT: frozenset({ErrorCategory.INCORRECT}),
    ReportCategory.MISSING: frozenset({ErrorCategory.MISSING}),
    ReportCategory.NOT_IN_NOTES: frozenset({ErrorCategory.NOT_IN_NOTES}),
}


@dataclass(frozen=True)
class CorrelationReport:
    metric_name: str
    pearson_r: float
    n: int
    category: ReportCategory = ReportCategory.ANY
    williams: tuple[float, float, str] | None = None  # (t, p, baseline metric)

    def as_dict(self) -> dict:
        d = {
            "metric_name": self.metric_name,
            "pearson_r": self.pearson_r,
            "n": self.n,
            "category": self.category.value,
        }
        if self.williams is not None:
            d["williams"] = {
                "t": self.williams[0],
                "p": self.williams[1],
                "baseline": self.williams[2],
            }
        return d


def paired_vectors(metric: MetricVector, human: HumanErrorVector):
    """Metric and human values over the human keys, in sorted key order.

    The metric must cover every human key; extra metric keys (sentences the
    metric could score but the human vector excludes) are dropped.
    """
    missing = sorted(set(human.values) - set(metric.values))
    if missing:
        raise KeyError(
            f"metric {metric.metric_name!r} lacks values for "
            f"{len(missing)} human-annotated sentences, e.g. {missing[:3]}"
        )
    keys = sorted(human.values)
    return (
        np.array([metric.values[k] for k in keys]),
        np.array([human.values[k] for k in keys]),
        keys,
    )


def correlate(
    metric: MetricVector,
    human: HumanErrorVector,
    orientation: int = 1,
    baseline: MetricVector | None = None,
) -> CorrelationReport:
    """Pearson r between a metric and the negated human error rate.

    Faithfulness metrics are oriented higher-is-better, so reports correlate
    against -HErr; a metric with orientation -1 is sign-flipped first. With a
    ``baseline`` the report also carries a one-sided Williams test of the
    hypothesis that this metric correlates more than the baseline does.
    """
    mvals, hvals, keys = paired_vectors(metric, human)
    r = pearson(orientation * mvals, -hvals)
    williams = None
    if baseline is not None and baseline.metric_name != metric.metric_name:
        bvals, _, _ = paired_vectors(baseline, human)
        r13 = pearson(bvals, -hvals)
        r23 = pearson(orientation * mvals, bvals)
        t, p = williams_test(r, r13, r23, len(keys))
        williams = (t, p, baseline.metric_name)
    return CorrelationReport(
        metric_name=metric.metric_name, pearson_r=r, n=len(keys), williams=williams
    )


def category_error_vector(summaries, annotations, category: ReportCategory) -> HumanErrorVector:
    """Per-sentence fraction of elements marked with one specific category."""
    flags = element_error_flags(annotations, _CATEGORY_SETS[category])
    values: dict[Key, float] = {}
    counts: dict[Key, int] = {}
    skipped: list[Key] = []
    for summary in summaries:
        for sent in summary.sentences:
            key = (summary.summary_id, sent.sent_idx)
            if not sent.elements:
                skipped.append(key)
                continue
            errored = sum(1 for e in sent.elements if flags.get(e.element_id, False))
            values[key] = errored / len(sent.elements)
            counts[key] = len(sent.elements)
    return HumanErrorVector(values=values, se_counts=counts, skipped=tuple(skipped))


def category_breakdown(
    summaries, annotations, metrics: list[MetricVector], orientation=None
) -> list[CorrelationReport]:
    """Correlations split by error category; empty categories are skipped.

    Unlike ``correlate`` these are raw correlations against each category's
    error fraction, so a good faithfulness metric shows up negative here.
    """
    orientation = orientation or {}
    reports = []
    for category in ReportCategory:
        human = category_error_vector(summaries, annotations, category)
        if not human.values or all(v == 0.0 for v in human.values.values()):
            logger.info("category %s absent everywhere; skipped", category.value)
            continue
        for metric in metrics:
            mvals, hvals, keys = paired_vectors(metric, human)
            sign = orientation.get(metric.metric_name, 1)
            reports.append(
                CorrelationReport(
                    metric_name=metric.metric_name,
                    pearson_r=pearson(sign * mvals, hvals),
                    n=len(keys),
                    category=category,
                )
            )
    return reports


def williams_test(r12: float, r13: float, r23: float, n: int) -> tuple[float, float]:
    """One-sided test that metric 1 correlates more than metric 2 with the
    shared target (correlations r12, r13; inter-metric correlation r23).

    Returns (t, one-sided p from the upper tail, df = n - 3).
    """
    for name, r in (("r12", r12), ("r13", r13), ("r23", r23)):
        if not -1.0 <= r <= 1.0:
            raise ValueError(f"{name} = {r} outside [-1, 1]")
    if n < 4:
        raise ValueError(f"need n >= 4 (df = n - 3 > 0), got {n}")
    det = 1 - r12**2 - r13**2 - r23**2 + 2 * r12 * r13 * r23
    if det <= 0:
        raise ValueError(
            f"ill-conditioned correlation structure (determinant {det:.3g} <= 0)"
        )
    rbar = (r12 + r13) / 2
    denom = 2 * det * (n - 1) / (n - 3) + rbar**2 * (1 - r23) ** 3
    t = (r12 - r13) * math.sqrt((n - 1) * (1 + r23) / denom)
    p = float(_scipy_stats.t.sf(t, df=n - 3))
    return t, p
