"""Command-line entry point: ingest | align | score | meta | cohort | stats | serve.

A JSON config file (``--config`` or $FAITHBENCH_CONFIG) supplies per-command
defaults; explicit flags override the config. Every run writes a manifest
(config hash, versions, seed) next to its outputs and stamps the hash into
each artifact so re-runs are checkable byte for byte.

Exit codes: 0 ok, 1 usage, 2 data error, 3 internal.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import SchemaError
from .align import (
    Strategy,
    align_bs_gain,
    align_bs_topk,
    align_entity_chain,
    align_full_budget,
    align_rouge_gain,
    align_rouge_topk,
    align_top_section,
    alignment_from_dict,
    alignment_stats,
)
from .cohort import CohortSpec, build_cohort, oracle_section_rank
from .corpus import (
    admission_to_dict,
    build_source_index,
    ingest_admission,
    load_annotations,
    load_sidecar,
    load_summary,
    summary_to_dict,
)
from .entities import load_mentions, load_relation_table
from .extractiveness import sentence_extractiveness, summary_density
from .manifest import build_manifest, write_csv_artifact, write_json_artifact, write_manifest
from .meta import (
    best_subset,
    build_herr,
    category_breakdown,
    combine_with_coverage,
    correlate,
    distill_targets,
    ensemble,
    macs_mixture,
    subset_stability,
    williams_test,
    znormalize,
)
from .scorers import (
    Granularity,
    MetricFamily,
    MetricSpec,
    MissingArtifactError,
    metric_vector_from_dict,
    score_metric,
)

logger = logging.getLogger("faithbench")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


def _load_config(path: str | None) -> dict:
    path = path or os.environ.get("FAITHBENCH_CONFIG")
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("-v", "--verbose", is_flag=True, default=False)
@click.pass_context
def cli(ctx, config_path, verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)
    ctx.default_map = _load_config(config_path)


def _load_summaries(paths):
    return [load_summary(p) for p in paths]


def _load_admissions(paths):
    return [ingest_admission(p) for p in paths]


def _summaries_by_admission(summaries, admissions):
    by_id = {a.admission_id: a for a in admissions}
    pairs = []
    for s in summaries:
        if s.admission_id not in by_id:
            raise SchemaError(
                f"summary {s.summary_id!r} references unknown admission {s.admission_id!r}"
            )
        pairs.append((s, by_id[s.admission_id]))
    return pairs


@cli.command()
@click.option("--admission", "admissions", multiple=True, type=click.Path(exists=True))
@click.option("--summary", "summaries", multiple=True, type=click.Path(exists=True))
@click.option("--annotations", "annotation_files", multiple=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def ingest(admissions, summaries, annotation_files, out):
    """Validate inputs and write canonical forms plus an index report."""
    out = Path(out)
    manifest = build_manifest(
        "ingest",
        {
            "admissions": list(admissions),
            "summaries": list(summaries),
            "annotations": list(annotation_files),
        },
    )
    loaded_admissions = _load_admissions(admissions)
    loaded_summaries = _load_summaries(summaries)
    by_summary_id = {s.summary_id: s for s in loaded_summaries}
    all_annotations = []
    for path in annotation_files:
        records = load_annotations(path)
        for rec in records:
            summary = by_summary_id.get(rec.summary_id)
            if summary is None:
                raise SchemaError(
                    f"annotation references unknown summary {rec.summary_id!r}",
                    path=Path(path),
                )
            if rec.element_id not in summary.element_ids():
                raise SchemaError(
                    f"annotation references unknown element {rec.element_id!r}",
                    path=Path(path),
                )
        all_annotations.extend(records)

    report = {"admissions": [], "summaries": []}
    for admission in loaded_admissions:
        index = build_source_index(admission)
        total = sum(len(u.refs) for u in index.unique_sentences)
        report["admissions"].append(
            {
                "admission_id": admission.admission_id,
                "notes": len(admission.notes),
                "sentences": total,
                "unique_sentences": len(index),
            }
        )
        write_json_artifact(
            out / f"admission-{admission.admission_id}.json",
            admission_to_dict(admission),
            manifest,
        )
    for summary in loaded_summaries:
        report["summaries"].append(
            {
                "summary_id": summary.summary_id,
                "sentences": len(summary.sentences),
                "elements": len(summary.element_ids()),
            }
        )
        write_json_artifact(
            out / f"summary-{summary.summary_id}.json", summary_to_dict(summary), manifest
        )
    if all_annotations:
        write_json_artifact(
            out / "annotations.json",
            {"annotations": [a.as_dict() for a in all_annotations]},
            manifest,
        )
    report["annotations"] = len(all_annotations)
    write_json_artifact(out / "ingest-report.json", report, manifest)
    write_manifest(out, manifest)
    click.echo(f"ingested {len(loaded_admissions)} admissions, {len(loaded_summaries)} summaries")


@cli.command(name="align")
@click.option(
    "--strategy",
    type=click.Choice([s.value for s in Strategy]),
    required=True,
)
@click.option("--admission", "admission_path", required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--sidecar", "sidecar_path", type=click.Path(exists=True), default=None)
@click.option("--mentions", "mentions_path", type=click.Path(exists=True), default=None)
@click.option("--relations", "relations_path", type=click.Path(exists=True), default=None)
@click.option("--k", default=5, show_default=True, help="top-k size")
@click.option("--budget", default=None, type=int, help="token budget (full-budget)")
@click.option("--cap", default=10, show_default=True, help="greedy growth cap")
@click.option("--tau", default=0.05, show_default=True, help="bs-gain per-token stop threshold")
@click.option("--stop-mode", type=click.Choice(["absolute", "relative"]), default="absolute")
@click.option("--synonym-threshold", default=0.5, show_default=True)
@click.option("--out", required=True, type=click.Path())
def align_cmd(
    strategy,
    admission_path,
    summary_paths,
    sidecar_path,
    mentions_path,
    relations_path,
    k,
    budget,
    cap,
    tau,
    stop_mode,
    synonym_threshold,
    out,
):
    """Align every summary sentence to source sentences."""
    strategy = Strategy(strategy)
    manifest = build_manifest(
        "align",
        {
            "strategy": strategy.value,
            "admission": admission_path,
            "summaries": list(summary_paths),
            "k": k,
            "budget": budget,
            "cap": cap,
            "tau": tau,
            "stop_mode": stop_mode,
        },
    )
    admission = ingest_admission(admission_path)
    mentions = load_mentions(mentions_path) if mentions_path else []
    relations = load_relation_table(relations_path) if relations_path else None
    index = build_source_index(admission, mentions)
    sidecar = load_sidecar(sidecar_path) if sidecar_path else None

    if strategy in (Strategy.BS_TOPK, Strategy.BS_GAIN) and sidecar is None:
        raise click.UsageError(f"--sidecar is required for strategy {strategy.value}")
    if strategy is Strategy.FULL_BUDGET and budget is None:
        raise click.UsageError("--budget is required for strategy full-budget")

    results = []
    for summary_path in summary_paths:
        summary = load_summary(summary_path)
        if summary.admission_id != admission.admission_id:
            raise SchemaError(
                f"summary {summary.summary_id!r} belongs to admission "
                f"{summary.admission_id!r}, not {admission.admission_id!r}"
            )
        if strategy is Strategy.TOP_SECTION:
            results.extend(align_top_section(summary, index))
            continue
        for sent in summary.sentences:
            sid = summary.summary_id
            if strategy is Strategy.ROUGE_TOPK:
                res = align_rouge_topk(sent, index, k, summary_id=sid)
            elif strategy is Strategy.ROUGE_GAIN:
                res = align_rouge_gain(sent, index, cap, summary_id=sid)
            elif strategy is Strategy.BS_TOPK:
                res = align_bs_topk(sent, index, sidecar, k, summary_id=sid)
            elif strategy is Strategy.BS_GAIN:
                res = align_bs_gain(
                    sent, index, sidecar, cap, tau, stop_mode, summary_id=sid
                )
            elif strategy is Strategy.ENTITY_CHAIN:
                res = align_entity_chain(
                    sent, index, relations, synonym_threshold, summary_id=sid
                )
            elif strategy is Strategy.FULL_BUDGET:
                res = align_full_budget(sent, index, budget, summary_id=sid)
            else:  # pragma: no cover
                raise ValueError(strategy)
            results.append(res)

    stats = alignment_stats(results) if results else {}
    write_json_artifact(
        Path(out),
        {
            "alignments": [r.as_dict() for r in results],
            "mean_refs": {s.value: v for s, v in stats.items()},
        },
        manifest,
    )
    write_manifest(Path(out).parent, manifest)
    click.echo(f"aligned {len(results)} sentences with {strategy.value}")


def _load_alignment_file(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    records = raw["alignments"] if isinstance(raw, dict) else raw
    return [alignment_from_dict(r) for r in records]


def _load_metric_files(paths):
    vectors = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        vectors.append(metric_vector_from_dict(raw))
    return vectors


def _metric_csv_rows(vector):
    return [(sid, idx, repr(value)) for (sid, idx), value in sorted(vector.values.items())]


def _write_metric_outputs(vector, out_json, out_csv, manifest):
    if out_json:
        write_json_artifact(Path(out_json), vector.as_dict(), manifest)
    if out_csv:
        write_csv_artifact(
            Path(out_csv), ["summary_id", "sent_idx", "value"], _metric_csv_rows(vector), manifest
        )


@cli.command()
@click.option("--metric", type=click.Choice([f.value for f in MetricFamily]), required=True)
@click.option("--variant", default="default", show_default=True)
@click.option(
    "--granularity",
    type=click.Choice([g.value for g in Granularity]),
    default=Granularity.SENTENCE_LEVEL.value,
    show_default=True,
)
@click.option("--alignment-file", type=click.Path(exists=True), default=None)
@click.option("--sidecar", "sidecar_path", type=click.Path(exists=True), required=True)
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--admission", "admission_paths", multiple=True, type=click.Path(exists=True))
@click.option("--mentions", "mentions_path", type=click.Path(exists=True), default=None)
@click.option("--relations", "relations_path", type=click.Path(exists=True), default=None)
@click.option("--ctc-threshold", default=0.5, show_default=True)
@click.option("--out-json", type=click.Path(), default=None)
@click.option("--out-csv", type=click.Path(), default=None)
def score(
    metric,
    variant,
    granularity,
    alignment_file,
    sidecar_path,
    summary_paths,
    admission_paths,
    mentions_path,
    relations_path,
    ctc_threshold,
    out_json,
    out_csv,
):
    """Compute one metric variant's per-sentence MetricVector."""
    manifest = build_manifest(
        "score",
        {
            "metric": metric,
            "variant": variant,
            "granularity": granularity,
            "alignment_file": alignment_file,
            "sidecar": sidecar_path,
            "summaries": list(summary_paths),
        },
    )
    spec = MetricSpec(
        family=MetricFamily(metric),
        variant=variant,
        granularity=Granularity(granularity),
        ctc_threshold=ctc_threshold,
    )
    summaries = _load_summaries(summary_paths)
    alignments = _load_alignment_file(alignment_file) if alignment_file else None
    sidecar = load_sidecar(sidecar_path)
    relations = load_relation_table(relations_path) if relations_path else None

    source_cuis = None
    if mentions_path:
        admissions = _load_admissions(admission_paths)
        note_owner = {n.note_id: a.admission_id for a in admissions for n in a.notes}
        source_cuis = {a.admission_id: set() for a in admissions}
        for mention in load_mentions(mentions_path):
            owner = getattr(mention.location, "note_id", None)
            if owner and owner in note_owner:
                source_cuis[note_owner[owner]].add(mention.cui)

    vector = score_metric(
        spec, summaries, alignments, sidecar, relations=relations, source_cuis=source_cuis
    )
    _write_metric_outputs(vector, out_json, out_csv, manifest)
    if out_json:
        write_manifest(Path(out_json).parent, manifest)
    click.echo(f"{vector.metric_name}: scored {len(vector.values)} sentences")


@cli.command()
@click.option("--admission", "admission_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def stats(admission_paths, summary_paths, out):
    """Per-sentence extractiveness (coverage, density) as CSV."""
    manifest = build_manifest(
        "stats", {"admissions": list(admission_paths), "summaries": list(summary_paths)}
    )
    pairs = _summaries_by_admission(_load_summaries(summary_paths), _load_admissions(admission_paths))
    rows = []
    for summary, admission in pairs:
        for (sid, idx), (cov, dens) in sorted(
            sentence_extractiveness(summary, admission).items()
        ):
            rows.append((sid, idx, repr(cov), repr(dens)))
    write_csv_artifact(
        Path(out), ["summary_id", "sent_idx", "coverage", "density"], rows, manifest
    )
    write_manifest(Path(out).parent, manifest)
    click.echo(f"wrote extractiveness for {len(rows)} sentences")


@cli.command()
@click.option("--admission", "admission_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--trim-fraction", default=0.10, show_default=True)
@click.option("--bins", default=10, show_default=True)
@click.option("--per-bin", "samples_per_bin", type=int, default=None)
@click.option("--total", "total_samples", type=int, default=None)
@click.option("--seed", default=0, show_default=True)
@click.option("--rank-sections", "rank_k", type=int, default=None, help="also emit oracle top-K section ranking per admission")
@click.option("--out", required=True, type=click.Path())
def cohort(
    admission_paths,
    summary_paths,
    trim_fraction,
    bins,
    samples_per_bin,
    total_samples,
    seed,
    rank_k,
    out,
):
    """Build the evaluation cohort: trim, bin by density, sample."""
    manifest = build_manifest(
        "cohort",
        {
            "admissions": len(admission_paths),
            "summaries": len(summary_paths),
            "trim_fraction": trim_fraction,
            "bins": bins,
            "samples_per_bin": samples_per_bin,
            "total_samples": total_samples,
        },
        seed=seed,
    )
    admissions = _load_admissions(admission_paths)
    summaries = _load_summaries(summary_paths)
    by_admission = {s.admission_id: s for s in summaries}
    missing = [a.admission_id for a in admissions if a.admission_id not in by_admission]
    if missing:
        raise SchemaError(f"admissions without a reference summary: {missing[:5]}")
    densities = {
        by_admission[a.admission_id].summary_id: summary_density(
            by_admission[a.admission_id], a
        )
        for a in admissions
    }
    spec = CohortSpec(
        trim_fraction=trim_fraction,
        bins=bins,
        samples_per_bin=samples_per_bin,
        total_samples=total_samples,
        seed=seed,
    )
    selected, assignment, trimmed = build_cohort(admissions, by_admission, densities, spec)
    payload = {
        "selected": sorted(selected),
        "trimmed_count": len(trimmed),
        "input_count": len(admissions),
        "bins": {
            str(b): sorted(sid for sid, bb in assignment.items() if bb == b)
            for b in sorted(set(assignment.values()))
        },
        "densities": {sid: densities[sid] for sid in sorted(densities)},
    }
    if rank_k is not None:
        rankings = {}
        by_id = {a.admission_id: a for a in admissions}
        for admission_id in sorted(by_id):
            ranked, cov = oracle_section_rank(
                by_id[admission_id], by_admission[admission_id], rank_k
            )
            rankings[admission_id] = {
                "sections": [
                    {"note_id": n, "section_idx": s, "score": sc} for n, s, sc in ranked[:rank_k]
                ],
                "token_coverage": cov,
            }
        payload["section_ranking"] = rankings
    write_json_artifact(Path(out), payload, manifest)
    write_manifest(Path(out).parent, manifest)
    click.echo(
        f"cohort: {len(admissions)} -> {len(trimmed)} after trim -> {len(selected)} sampled"
    )


@cli.group()
def meta():
    """Meta-evaluation of metric vectors against human annotations."""


def _human_from_files(summary_paths, annotation_paths):
    summaries = _load_summaries(summary_paths)
    by_summary_id = {s.summary_id: s for s in summaries}
    annotations = []
    for path in annotation_paths:
        for rec in load_annotations(path):
            summary = by_summary_id.get(rec.summary_id)
            if summary is None:
                raise SchemaError(f"annotation references unknown summary {rec.summary_id!r}")
            if rec.element_id not in summary.element_ids():
                raise SchemaError(f"annotation references unknown element {rec.element_id!r}")
            annotations.append(rec)
    return summaries, annotations, build_herr(summaries, annotations)


@meta.command()
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotation_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--baseline", "baseline_file", type=click.Path(exists=True), default=None,
              help="metric file to Williams-test every other metric against")
@click.option("--out-json", type=click.Path(), default=None)
@click.option("--out-csv", type=click.Path(), default=None)
def correlate_cmd(metric_files, summary_paths, annotation_paths, baseline_file, out_json, out_csv):
    """Pearson correlation of each metric with the (negated) human error rate."""
    manifest = build_manifest(
        "meta.correlate",
        {
            "metrics": list(metric_files),
            "summaries": list(summary_paths),
            "baseline": baseline_file,
        },
    )
    _, _, human = _human_from_files(summary_paths, annotation_paths)
    baseline = _load_metric_files([baseline_file])[0] if baseline_file else None
    reports = [
        correlate(v, human, baseline=baseline) for v in _load_metric_files(metric_files)
    ]
    payload = {"reports": [r.as_dict() for r in reports]}
    if out_json:
        write_json_artifact(Path(out_json), payload, manifest)
    if out_csv:
        write_csv_artifact(
            Path(out_csv),
            ["metric_name", "pearson_r", "n", "category", "williams_t", "williams_p"],
            [
                (
                    r.metric_name,
                    repr(r.pearson_r),
                    r.n,
                    r.category.value,
                    repr(r.williams[0]) if r.williams else "",
                    repr(r.williams[1]) if r.williams else "",
                )
                for r in reports
            ],
            manifest,
        )
    for r in reports:
        line = f"{r.metric_name}\tr={r.pearson_r:+.4f}\tn={r.n}"
        if r.williams:
            line += f"\twilliams t={r.williams[0]:+.3f} p={r.williams[1]:.4f} vs {r.williams[2]}"
        click.echo(line)


@meta.command()
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotation_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out-json", type=click.Path(), default=None)
@click.option("--out-csv", type=click.Path(), default=None)
def breakdown(metric_files, summary_paths, annotation_paths, out_json, out_csv):
    """Correlations split by error category (Incorrect/Missing/NotInNotes)."""
    manifest = build_manifest(
        "meta.breakdown",
        {"metrics": list(metric_files), "summaries": list(summary_paths)},
    )
    summaries, annotations, _ = _human_from_files(summary_paths, annotation_paths)
    reports = category_breakdown(summaries, annotations, _load_metric_files(metric_files))
    if out_json:
        write_json_artifact(Path(out_json), {"reports": [r.as_dict() for r in reports]}, manifest)
    if out_csv:
        write_csv_artifact(
            Path(out_csv),
            ["metric_name", "category", "pearson_r", "n"],
            [(r.metric_name, r.category.value, repr(r.pearson_r), r.n) for r in reports],
            manifest,
        )
    for r in reports:
        click.echo(f"{r.metric_name}\t{r.category.value}\tr={r.pearson_r:+.4f}")


@meta.command()
@click.option("--r12", type=float, required=True, help="correlation of metric 1 with the target")
@click.option("--r13", type=float, required=True, help="correlation of metric 2 with the target")
@click.option("--r23", type=float, required=True, help="correlation between the two metrics")
@click.option("--n", type=int, required=True)
@click.option("--out-json", type=click.Path(), default=None)
def williams(r12, r13, r23, n, out_json):
    """One-sided dependent-correlation test (is metric 1 better?)."""
    t, p = williams_test(r12, r13, r23, n)
    if out_json:
        manifest = build_manifest(
            "meta.williams", {"r12": r12, "r13": r13, "r23": r23, "n": n}
        )
        write_json_artifact(Path(out_json), {"t": t, "p_one_sided": p, "df": n - 3}, manifest)
    click.echo(f"t={t:.6f}\tp(one-sided)={p:.6f}\tdf={n - 3}")


@meta.command(name="ensemble")
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--raw", is_flag=True, default=False, help="average raw values (alignment mixture) instead of z-scores")
@click.option("--out-json", type=click.Path(), default=None)
@click.option("--out-csv", type=click.Path(), default=None)
def ensemble_cmd(metric_files, raw, out_json, out_csv):
    """Average metric vectors: z-normalized by default, raw with --raw."""
    manifest = build_manifest("meta.ensemble", {"metrics": list(metric_files), "raw": raw})
    vectors = _load_metric_files(metric_files)
    if raw:
        combined = macs_mixture(vectors)
    else:
        combined = ensemble([znormalize(v) for v in vectors])
    _write_metric_outputs(combined, out_json, out_csv, manifest)
    click.echo(f"{combined.metric_name}: {len(combined.values)} sentences")


@meta.command()
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotation_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out-json", type=click.Path(), default=None)
def subset(metric_files, summary_paths, annotation_paths, out_json):
    """Exhaustive search for the best-correlating metric ensemble."""
    manifest = build_manifest("meta.subset", {"metrics": list(metric_files)})
    _, _, human = _human_from_files(summary_paths, annotation_paths)
    names, r = best_subset(_load_metric_files(metric_files), human)
    if out_json:
        write_json_artifact(Path(out_json), {"subset": list(names), "pearson_r": r}, manifest)
    click.echo(f"best subset: {', '.join(names)} (r={r:+.4f})")


@meta.command()
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--summary", "summary_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--annotations", "annotation_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--fractions", default="0.25,0.5,0.75,1.0", show_default=True)
@click.option("--trials", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out-json", type=click.Path(), default=None)
def stability(metric_files, summary_paths, annotation_paths, fractions, trials, seed, out_json):
    """How much annotated data the subset search needs (seeded bootstrap)."""
    manifest = build_manifest(
        "meta.stability",
        {"metrics": list(metric_files), "fractions": fractions, "trials": trials},
        seed=seed,
    )
    _, _, human = _human_from_files(summary_paths, annotation_paths)
    fraction_list = [float(f) for f in fractions.split(",") if f]
    table = subset_stability(
        _load_metric_files(metric_files), human, fraction_list, trials, seed
    )
    payload = {"table": {str(f): row for f, row in table.items()}}
    if out_json:
        write_json_artifact(Path(out_json), payload, manifest)
    for fraction, row in table.items():
        click.echo(
            f"fraction={fraction:g}\tmean_r={row['mean_r']:+.4f}\t"
            f"agreement={row['agreement']:.2f}"
        )


@meta.command(name="distill-targets")
@click.option("--metric-file", "metric_files", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--alignment-file", type=click.Path(exists=True), default=None)
@click.option("--out", required=True, type=click.Path())
def distill_targets_cmd(metric_files, alignment_file, out):
    """Pseudo-targets (mean of z-scores) for training a student metric."""
    manifest = build_manifest(
        "meta.distill-targets",
        {"metrics": list(metric_files), "alignment_file": alignment_file},
    )
    alignments = _load_alignment_file(alignment_file) if alignment_file else None
    records = distill_targets(_load_metric_files(metric_files), alignments)
    write_json_artifact(Path(out), {"targets": records}, manifest)
    write_manifest(Path(out).parent, manifest)
    click.echo(f"wrote {len(records)} distillation targets")


@meta.command(name="combine-coverage")
@click.option("--metric-file", required=True, type=click.Path(exists=True))
@click.option("--coverage-file", required=True, type=click.Path(exists=True))
@click.option("--out-json", type=click.Path(), default=None)
@click.option("--out-csv", type=click.Path(), default=None)
def combine_coverage_cmd(metric_file, coverage_file, out_json, out_csv):
    """Combined metric g = mean of z(metric) and z(coverage)."""
    manifest = build_manifest(
        "meta.combine-coverage", {"metric": metric_file, "coverage": coverage_file}
    )
    metric, cov = _load_metric_files([metric_file, coverage_file])
    combined = combine_with_coverage(metric, cov)
    _write_metric_outputs(combined, out_json, out_csv, manifest)
    click.echo(f"{combined.metric_name}: {len(combined.values)} sentences")


@cli.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True))
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--synonym-threshold", default=0.5, show_default=True)
def serve(bind, corpus_dir, store_path, synonym_threshold):
    """Run the annotation HTTP service."""
    import uvicorn

    from .service import AnnotationStore, create_app, load_service_corpus

    corpus = load_service_corpus(corpus_dir)
    corpus.synonym_threshold = synonym_threshold
    app = create_app(corpus, AnnotationStore(store_path))
    host, _, port = bind.partition(":")
    uvicorn.run(app, host=host, port=int(port or 8000))


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except (SchemaError, MissingArtifactError, KeyError, ValueError, FileNotFoundError) as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA)
    except Exception as exc:  # pragma: no cover - defensive
        click.echo(f"internal error: {exc!r}", err=True)
        sys.exit(EXIT_INTERNAL)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
