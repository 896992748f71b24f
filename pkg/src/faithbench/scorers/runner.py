"""Assemble per-sentence MetricVectors from alignments plus sidecar artifacts."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import math

from ..corpus.index import source_key
from ..corpus.ingest import SidecarBundle
from ..corpus.model import SummaryRecord
from ..entities import RelationTable, best_source_relation
from . import primitives
from .primitives import bertscore

FULL_PREMISE = "FULL"


class Granularity(str, Enum):
    SENTENCE_LEVEL = "sentence-level"
    SUMMARY_LEVEL = "summary-level"


class MetricFamily(str, Enum):
    BERTSCORE = "bertscore"
    BARTSCORE = "bartscore"
    CTC = "ctc"
    SUMMAC_GREEDY = "summac-greedy"
    SUMMAC_ALIGN = "summac-align"
    FACTSCORE = "factscore"
    REDRESS = "redress"
    HR_BINARY = "hr-binary"
    HR_SOFT = "hr-soft"


#: +1 if higher values mean more faithful, -1 otherwise. Only the raw
#: hallucination-rate fraction is inverted; correlation reports use this
#: to keep signs comparable across metrics.
FAMILY_ORIENTATION: dict[MetricFamily, int] = {family: 1 for family in MetricFamily}
FAMILY_ORIENTATION[MetricFamily.HR_BINARY] = -1


@dataclass(frozen=True)
class MetricSpec:
    family: MetricFamily
    variant: str = "default"
    granularity: Granularity = Granularity.SENTENCE_LEVEL
    ctc_threshold: float = 0.5


@dataclass
class MetricVector:
    metric_name: str
    values: dict[tuple[str, int], float]
    granularity: Granularity = Granularity.SENTENCE_LEVEL

    def __post_init__(self):
        for key, value in self.values.items():
            if not math.isfinite(value):
                raise ValueError(f"non-finite metric value at {key}")

    def as_dict(self) -> dict:
        return {
            "metric_name": self.metric_name,
            "granularity": self.granularity.value,
            "values": {f"{sid}::{idx}": v for (sid, idx), v in self.values.items()},
        }


def metric_vector_from_dict(raw: dict) -> MetricVector:
    values = {}
    for key, value in raw["values"].items():
        sid, idx = key.rsplit("::", 1)
        values[(sid, int(idx))] = float(value)
    return MetricVector(
        metric_name=raw["metric_name"],
        values=values,
        granularity=Granularity(raw.get("granularity", "sentence-level")),
    )


class MissingArtifactError(KeyError):
    """A scorer's required sidecar field is absent for some sentence."""

    def __init__(self, metric: str, field_name: str, key):
        super().__init__(f"metric {metric!r}: missing {field_name} for {key!r}")
        self.metric = metric
        self.field = field_name


def _alignment_map(alignments):
    return {(a.summary_id, a.sent_idx): a for a in alignments or []}


def _metric_name(spec: MetricSpec, alignments) -> str:
    slugs = {a.strategy.value for a in alignments or []}
    slug = slugs.pop() if len(slugs) == 1 else ("mixed" if slugs else "none")
    return f"{spec.family.value}/{spec.variant}/{slug}"


def _aligned_ref_keys(summary, alignment_map, admission_id, metric):
    for sent in summary.sentences:
        key = (summary.summary_id, sent.sent_idx)
        if key not in alignment_map:
            raise MissingArtifactError(metric, "alignment", key)
        yield sent, [source_key(admission_id, r) for r in alignment_map[key].refs]


def score_metric(
    spec: MetricSpec,
    summaries: list[SummaryRecord],
    alignments,
    sidecar: SidecarBundle,
    *,
    relations: RelationTable | None = None,
    source_cuis: dict[str, set[str]] | None = None,
) -> MetricVector:
    """One value per summary sentence for the requested metric variant.

    Sentence-level scoring consumes each sentence's own alignment;
    summary-level (BARTScore/BERTScore only) consumes whole-summary
    artifacts and extracts per-sentence values from boundaries.
    """
    name = _metric_name(spec, alignments)
    alignment_map = _alignment_map(alignments)
    values: dict[tuple[str, int], float] = {}

    for summary in summaries:
        if spec.granularity is Granularity.SUMMARY_LEVEL:
            _score_summary_level(spec, summary, alignment_map, sidecar, name, values)
        else:
            _score_sentence_level(
                spec, summary, alignment_map, sidecar, name, values, relations, source_cuis
            )
    return MetricVector(metric_name=name, values=values, granularity=spec.granularity)


def _score_sentence_level(
    spec, summary, alignment_map, sidecar, name, values, relations, source_cuis
):
    sid = summary.summary_id
    for sent in summary.sentences:
        key = (sid, sent.sent_idx)
        family = spec.family

        if family is MetricFamily.BARTSCORE:
            if key + (spec.variant,) not in sidecar.token_logprobs:
                raise MissingArtifactError(name, "token_logprobs", key + (spec.variant,))
            values[key] = primitives.bartscore_sentence(
                sidecar.token_logprobs[key + (spec.variant,)]
            )

        elif family is MetricFamily.CTC:
            if key + (spec.variant,) not in sidecar.token_fake_probs:
                raise MissingArtifactError(name, "token_fake_probs", key + (spec.variant,))
            values[key] = primitives.ctc_score(
                sidecar.token_fake_probs[key + (spec.variant,)], spec.ctc_threshold
            )

        elif family is MetricFamily.FACTSCORE:
            if key + (spec.variant,) not in sidecar.supported_probs:
                raise MissingArtifactError(name, "supported_probs", key + (spec.variant,))
            values[key] = primitives.factscore(sidecar.supported_probs[key + (spec.variant,)])

        elif family is MetricFamily.BERTSCORE:
            hyp_key = f"sum::{sid}::{sent.sent_idx}"
            if hyp_key not in sidecar.embeddings:
                raise MissingArtifactError(name, "embeddings", hyp_key)
            if key not in alignment_map:
                raise MissingArtifactError(name, "alignment", key)
            ref_keys = [
                source_key(summary.admission_id, r) for r in alignment_map[key].refs
            ]
            for rk in ref_keys:
                if rk not in sidecar.embeddings:
                    raise MissingArtifactError(name, "embeddings", rk)
            values[key] = bertscore(
                sidecar.embeddings[hyp_key], [sidecar.embeddings[rk] for rk in ref_keys]
            ).precision

        elif family is MetricFamily.REDRESS:
            orig_key, rev_key = f"sum::{sid}::{sent.sent_idx}", f"rev::{sid}::{sent.sent_idx}"
            if sid not in sidecar.revised_texts:
                raise MissingArtifactError(name, "revised_texts", sid)
            for k in (orig_key, rev_key):
                if k not in sidecar.embeddings:
                    raise MissingArtifactError(name, "embeddings", k)
            values[key] = primitives.redress_score(
                sidecar.embeddings[orig_key], sidecar.embeddings[rev_key]
            )

        elif family in (MetricFamily.SUMMAC_GREEDY, MetricFamily.SUMMAC_ALIGN):
            if family is MetricFamily.SUMMAC_ALIGN:
                triple = sidecar.nli_probs.get(key + (FULL_PREMISE,))
                if triple is None:
                    raise MissingArtifactError(name, "nli_probs", key + (FULL_PREMISE,))
                values[key] = primitives.summac_align(triple)
            else:
                if key not in alignment_map:
                    raise MissingArtifactError(name, "alignment", key)
                rows = []
                for ref in alignment_map[key].refs:
                    premise = source_key(summary.admission_id, ref)
                    triple = sidecar.nli_probs.get((sid, sent.sent_idx, premise))
                    if triple is None:
                        raise MissingArtifactError(
                            name, "nli_probs", (sid, sent.sent_idx, premise)
                        )
                    rows.append(triple)
                values[key] = primitives.summac_greedy(rows)

        elif family in (MetricFamily.HR_BINARY, MetricFamily.HR_SOFT):
            if relations is None:
                raise MissingArtifactError(name, "entity_relations", "relation table")
            if source_cuis is None or summary.admission_id not in source_cuis:
                raise MissingArtifactError(name, "source_cuis", summary.admission_id)
            cuis = sorted({c for e in sent.elements for c in e.cuis})
            if not cuis:
                continue  # HR undefined without entities; sentence is skipped
            triples = [
                best_source_relation(c, source_cuis[summary.admission_id], relations)[1]
                for c in cuis
            ]
            scorer = (
                primitives.hr_binary
                if family is MetricFamily.HR_BINARY
                else primitives.hr_soft
            )
            values[key] = scorer(triples)

        else:
            raise ValueError(f"unhandled metric family {family}")


def _score_summary_level(spec, summary, alignment_map, sidecar, name, values):
    sid = summary.summary_id

    if spec.family is MetricFamily.BARTSCORE:
        entry = sidecar.summary_logprobs.get((sid, spec.variant))
        if entry is None:
            raise MissingArtifactError(name, "summary_logprobs", (sid, spec.variant))
        arr, bounds = entry
        if len(bounds) != len(summary.sentences):
            raise ValueError(
                f"{sid}: {len(bounds)} boundaries for {len(summary.sentences)} sentences"
            )
        for sent, score in zip(
            summary.sentences, primitives.bartscore_summary_level(arr, bounds)
        ):
            values[(sid, sent.sent_idx)] = score

    elif spec.family is MetricFamily.BERTSCORE:
        full_key = f"sumfull::{sid}"
        if full_key not in sidecar.embeddings:
            raise MissingArtifactError(name, "embeddings", full_key)
        bounds = sidecar.summary_embedding_boundaries.get(sid)
        if bounds is None:
            raise MissingArtifactError(name, "summary_embedding_boundaries", sid)
        if len(bounds) != len(summary.sentences):
            raise ValueError(
                f"{sid}: {len(bounds)} boundaries for {len(summary.sentences)} sentences"
            )
        # union of per-sentence alignments, first-appearance order
        ref_keys: list[str] = []
        seen = set()
        for sent in summary.sentences:
            key = (sid, sent.sent_idx)
            if key not in alignment_map:
                raise MissingArtifactError(name, "alignment", key)
            for ref in alignment_map[key].refs:
                rk = source_key(summary.admission_id, ref)
                if rk not in seen:
                    seen.add(rk)
                    ref_keys.append(rk)
        for rk in ref_keys:
            if rk not in sidecar.embeddings:
                raise MissingArtifactError(name, "embeddings", rk)
        from .similarity import cosine_matrix
        import numpy as np

        ref = np.vstack([sidecar.embeddings[rk] for rk in ref_keys])
        sim = cosine_matrix(sidecar.embeddings[full_key], ref)
        row_best = sim.max(axis=1)
        for sent, (start, end) in zip(summary.sentences, bounds):
            values[(sid, sent.sent_idx)] = float(row_best[start:end].mean())

    else:
        raise ValueError(
            f"granularity {Granularity.SUMMARY_LEVEL.value} is only defined for "
            f"bartscore and bertscore, not {spec.family.value}"
        )
