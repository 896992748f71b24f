"""Normalization, ensembling, subset search, and distillation targets."""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass

import numpy as np

from ..scorers.runner import Granularity, MetricVector
from .correlation import HumanErrorVector, pearson

logger = logging.getLogger(__name__)

Key = tuple[str, int]

MAX_EXHAUSTIVE_METRICS = 20


@dataclass(frozen=True)
class NormalizationStats:
    mean: float
    std: float

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("standard deviation must be non-negative")


def compute_stats(vector: MetricVector) -> NormalizationStats:
    values = np.array(list(vector.values.values()), dtype=np.float64)
    return NormalizationStats(mean=float(values.mean()), std=float(values.std()))


def znormalize(
    vector: MetricVector,
    stats: NormalizationStats | None = None,
    *,
    variance_scaled: bool = False,
) -> MetricVector:
    """Standardize a metric vector: (value - mean) / std.

    ``variance_scaled`` divides by the variance instead; kept as a switch
    because the combined-metric write-up prints that form, but the default
    is the true z-score (Pearson correlations are unchanged either way).
    """
    if stats is None:
        stats = compute_stats(vector)
    if stats.std == 0:
        raise ValueError(f"metric {vector.metric_name!r} has zero variance")
    scale = stats.std**2 if variance_scaled else stats.std
    return MetricVector(
        metric_name=f"z:{vector.metric_name}",
        values={k: (v - stats.mean) / scale for k, v in vector.values.items()},
        granularity=vector.granularity,
    )


def _check_same_keys(vectors) -> list[Key]:
    keys = set(vectors[0].values)
    for v in vectors[1:]:
        if set(v.values) != keys:
            extra = sorted(set(v.values) - keys)[:3]
            missing = sorted(keys - set(v.values))[:3]
            raise KeyError(
                f"metric {v.metric_name!r} key set differs from "
                f"{vectors[0].metric_name!r} (extra {extra}, missing {missing})"
            )
    return sorted(keys)


def ensemble(vectors: list[MetricVector]) -> MetricVector:
    """Element-wise mean of already-normalized vectors with identical keys."""
    if not vectors:
        raise ValueError("nothing to ensemble")
    keys = _check_same_keys(vectors)
    values = {
        k: float(np.mean([v.values[k] for v in vectors])) for k in keys
    }
    name = "ensemble[" + ",".join(v.metric_name for v in vectors) + "]"
    return MetricVector(metric_name=name, values=values, granularity=vectors[0].granularity)


def _restrict(vector: MetricVector, keys) -> MetricVector:
    missing = [k for k in keys if k not in vector.values]
    if missing:
        raise KeyError(
            f"metric {vector.metric_name!r} lacks values for {missing[:3]} "
            f"(+{max(len(missing) - 3, 0)} more)"
        )
    return MetricVector(
        metric_name=vector.metric_name,
        values={k: vector.values[k] for k in keys},
        granularity=vector.granularity,
    )


def _faithfulness_target(human: HumanErrorVector, keys) -> np.ndarray:
    return np.array([-human.values[k] for k in keys])


def best_subset(
    vectors: list[MetricVector], human: HumanErrorVector
) -> tuple[tuple[str, ...], float]:
    """Exhaustive search for the subset whose z-ensemble best tracks -HErr.

    Maximizes |r|; ties go to the smaller subset, then lexicographic names.
    Metrics with zero variance over the evaluation keys are dropped first.
    """
    if not 1 <= len(vectors) <= MAX_EXHAUSTIVE_METRICS:
        raise ValueError(
            f"exhaustive search handles 1..{MAX_EXHAUSTIVE_METRICS} metrics, got "
            f"{len(vectors)}; use subset_stability's sampling mode for more"
        )
    keys = sorted(human.values)
    usable = []
    for v in sorted(vectors, key=lambda v: v.metric_name):
        restricted = _restrict(v, keys)
        if compute_stats(restricted).std == 0:
            logger.info("metric %s constant over evaluation keys; dropped", v.metric_name)
            continue
        usable.append((v.metric_name, znormalize(restricted)))
    if not usable:
        raise ValueError("no metric has variance over the evaluation keys")

    target = _faithfulness_target(human, keys)
    best_names: tuple[str, ...] | None = None
    best_abs_r = -1.0
    best_r = 0.0
    for size in range(1, len(usable) + 1):
        for combo in itertools.combinations(usable, size):
            mean_z = np.mean(
                [[z.values[k] for k in keys] for _, z in combo], axis=0
            )
            if mean_z.std() == 0:
                continue  # e.g. v and -v cancel exactly
            r = pearson(mean_z, target)
            if abs(r) > best_abs_r:
                best_abs_r = abs(r)
                best_r = r
                best_names = tuple(name for name, _ in combo)
    assert best_names is not None
    return best_names, best_r


def subset_stability(
    vectors: list[MetricVector],
    human: HumanErrorVector,
    fractions,
    trials: int,
    seed: int,
) -> dict[float, dict]:
    """Bootstrap how much annotated data the subset search actually needs.

    For each fraction, ``trials`` seeded subsamples of the annotated
    sentences are drawn; the subset found on the sample is then evaluated
    on the full set. (This sampling protocol is this workbench's own.)
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    all_keys = sorted(human.values)
    full_subset, _ = best_subset(vectors, human)
    by_name = {v.metric_name: v for v in vectors}
    rng = random.Random(seed)
    results: dict[float, dict] = {}
    for fraction in fractions:
        if not 0 < fraction <= 1:
            raise ValueError(f"fraction {fraction} outside (0, 1]")
        size = round(fraction * len(all_keys))
        if size < 4:
            logger.info("fraction %.3g yields %d < 4 sentences; skipped", fraction, size)
            continue
        held_out_rs = []
        agreements = 0
        for _ in range(trials):
            sample = sorted(rng.sample(all_keys, size))
            sample_human = HumanErrorVector(
                values={k: human.values[k] for k in sample},
                se_counts={k: human.se_counts[k] for k in sample},
            )
            sample_vectors = [_restrict(v, sample) for v in vectors]
            subset, _ = best_subset(sample_vectors, sample_human)
            chosen = [znormalize(_restrict(by_name[name], all_keys)) for name in subset]
            r_full = pearson(
                np.mean([[z.values[k] for k in all_keys] for z in chosen], axis=0),
                _faithfulness_target(human, all_keys),
            )
            held_out_rs.append(r_full)
            agreements += subset == full_subset
        results[fraction] = {
            "mean_r": float(np.mean(held_out_rs)),
            "agreement": agreements / trials,
            "trials": trials,
            "sample_size": size,
        }
    return results


def combine_with_coverage(
    metric: MetricVector, cov: MetricVector, *, variance_scaled: bool = False
) -> MetricVector:
    """Combined score g = (z(metric) + z(coverage)) / 2 over shared keys."""
    keys = _check_same_keys([metric, cov])
    zm = znormalize(metric, variance_scaled=variance_scaled)
    zc = znormalize(cov, variance_scaled=variance_scaled)
    values = {k: 0.5 * (zm.values[k] + zc.values[k]) for k in keys}
    return MetricVector(
        metric_name=f"g[{metric.metric_name}+{cov.metric_name}]",
        values=values,
        granularity=metric.granularity,
    )


def distill_targets(vectors: list[MetricVector], alignments=None) -> list[dict]:
    """Pseudo-target records for training an external student regressor.

    Each record carries the sentence key, the (optional) aligned source
    refs, and the mean of the member metrics' z-scores.
    """
    if len(vectors) < 2:
        raise ValueError("distillation needs at least 2 selected metrics")
    keys = _check_same_keys(vectors)
    normed = [znormalize(v) for v in vectors]
    ref_map = {(a.summary_id, a.sent_idx): a for a in alignments or []}
    records = []
    for key in keys:
        alignment = ref_map.get(key)
        records.append(
            {
                "summary_id": key[0],
                "sent_idx": key[1],
                "aligned_refs": [r.as_dict() for r in alignment.refs] if alignment else None,
                "target": float(np.mean([z.values[key] for z in normed])),
            }
        )
    return records


def macs_mixture(variants: list[MetricVector]) -> MetricVector:
    """Raw element-wise mean across per-alignment variants of one metric."""
    if len(variants) < 2:
        raise ValueError("mixture needs at least 2 alignment variants")
    keys = _check_same_keys(variants)
    values = {k: float(np.mean([v.values[k] for v in variants])) for k in keys}
    return MetricVector(
        metric_name="macs[" + ",".join(v.metric_name for v in variants) + "]",
        values=values,
        granularity=variants[0].granularity,
    )


def abstractive_subset(coverage: MetricVector, keep_fraction: float) -> set[Key]:
    """Keys of the ceil(fraction * n) lowest-coverage sentences."""
    if not 0 < keep_fraction <= 1:
        raise ValueError(f"keep_fraction {keep_fraction} outside (0, 1]")
    ordered = sorted(coverage.values.items(), key=lambda kv: (kv[1], kv[0]))
    keep = math.ceil(keep_fraction * len(ordered))
    return {k for k, _ in ordered[:keep]}
