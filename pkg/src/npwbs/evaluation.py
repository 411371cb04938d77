"""Accuracy metrics and the simulation benchmark harness.

Three metrics per (model, noise family) cell: mean absolute error of the
estimated change-point count, the fraction of true points recovered exactly,
and the fraction recovered within 2 positions (inclusive). Hits are counted
per true point by existence: a single estimate may satisfy several true
points and vice versa, with no one-to-one matching step.

Replicate streams are derived from (seed, model, family, replicate), so
adding a model or family never perturbs another cell's draws, and replicates
may run in any order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._rng import NS_BENCHMARK, NS_FALSE_POSITIVE, derive_rng, derive_seed, label_key
from .segment import SegmentationResult, WbsConfig, detect, prune
from .simdata import (
    MODEL_NAMES,
    NOISE_FAMILIES,
    fixed_model,
    generate_sequence,
    noise_epsilon,
    sample_kfe_spec,
)
from .thresholds import ThresholdTable

__all__ = [
    "MetricsReport",
    "BenchmarkRow",
    "mean_abs_k_error",
    "exact_hit_rate",
    "within2_hit_rate",
    "false_positive_experiment",
    "run_benchmark",
]


@dataclass(frozen=True)
class MetricsReport:
    mean_abs_k_error: float
    exact_hit_rate: float
    within2_hit_rate: float
    replicates: int

    def __post_init__(self) -> None:
        if self.within2_hit_rate < self.exact_hit_rate:
            raise ValueError(
                f"within-2 rate {self.within2_hit_rate} below exact rate "
                f"{self.exact_hit_rate}; the within-2 criterion is weaker"
            )


@dataclass(frozen=True)
class BenchmarkRow:
    model: str
    family: str
    pruned: bool
    metrics: MetricsReport


def _metrics_from_pairs(pairs: list[tuple[tuple[int, ...], SegmentationResult]]) -> MetricsReport:
    """Metrics over (true change points, estimate) pairs; truth may vary per pair."""
    if not pairs:
        raise ValueError("need at least one replicate")
    k_err = 0.0
    true_total = 0
    exact_hits = 0
    within2_hits = 0
    for true_tau, est in pairs:
        k_err += abs(len(true_tau) - est.k_hat)
        true_total += len(true_tau)
        got = est.change_points
        for t in true_tau:
            exact_hits += t in got
            within2_hits += any(abs(t - g) <= 2 for g in got)
    if true_total == 0:
        raise ValueError("hit rates undefined when there are no true change points")
    return MetricsReport(
        mean_abs_k_error=k_err / len(pairs),
        exact_hit_rate=exact_hits / true_total,
        within2_hit_rate=within2_hits / true_total,
        replicates=len(pairs),
    )


def mean_abs_k_error(true_k: int, estimates: list[SegmentationResult]) -> float:
    """Average of |K - K_hat| over the estimates."""
    if not estimates:
        raise ValueError("need at least one estimate")
    return float(np.mean([abs(true_k - e.k_hat) for e in estimates]))


def exact_hit_rate(true_tau, estimates: list[SegmentationResult]) -> float:
    """Fraction of (replicate, true point) pairs recovered at the exact index."""
    tau = tuple(int(t) for t in true_tau)
    if not tau:
        raise ValueError("hit rate undefined without true change points")
    return _metrics_from_pairs([(tau, e) for e in estimates]).exact_hit_rate


def within2_hit_rate(true_tau, estimates: list[SegmentationResult]) -> float:
    """Fraction of (replicate, true point) pairs with an estimate within 2."""
    tau = tuple(int(t) for t in true_tau)
    if not tau:
        raise ValueError("hit rate undefined without true change points")
    return _metrics_from_pairs([(tau, e) for e in estimates]).within2_hit_rate


def false_positive_experiment(
    n: int,
    families,
    replicates: int,
    config: WbsConfig,
    table: ThresholdTable,
) -> dict[str, float]:
    """Fraction of change-free length-n sequences with >= 1 detection, per family."""
    table.require_covers(n)
    rates: dict[str, float] = {}
    for family in families:
        if family not in NOISE_FAMILIES:
            raise ValueError(f"unknown noise family {family!r}")
        fkey = label_key(family)
        hits = 0
        for i in range(replicates):
            data_rng = derive_rng(config.seed, NS_FALSE_POSITIVE, fkey, i, 0)
            y = noise_epsilon(family, data_rng, n)
            det_seed = derive_seed(config.seed, NS_FALSE_POSITIVE, fkey, i, 1)
            result = detect(y, replace(config, seed=det_seed), table)
            hits += result.k_hat >= 1
        rates[family] = hits / replicates
    return rates


def _replicate_streams(seed: int, model: str, family: str, i: int):
    """Data rng and detection seed for one benchmark replicate."""
    mkey, fkey = label_key(model), label_key(family)
    data_rng = derive_rng(seed, NS_BENCHMARK, mkey, fkey, i, 0)
    det_seed = derive_seed(seed, NS_BENCHMARK, mkey, fkey, i, 1)
    return data_rng, det_seed


def simulate_replicate(
    seed: int, model: str, family: str, i: int = 0
) -> tuple[tuple[int, ...], np.ndarray]:
    """(true change points, sequence) for benchmark replicate i.

    The CLI's simulate command emits replicate 0 of this same scheme, so a
    printed sequence can be matched to a benchmark cell exactly.
    """
    if model not in MODEL_NAMES:
        raise ValueError(f"unknown model {model!r}; expected one of {MODEL_NAMES}")
    data_rng, _ = _replicate_streams(seed, model, family, i)
    spec = sample_kfe_spec(data_rng) if model == "kfe" else fixed_model(model)
    return spec.tau, generate_sequence(spec, family, data_rng)


def run_benchmark(
    models,
    families,
    replicates: int,
    config: WbsConfig,
    table: ThresholdTable,
    ablation: bool = False,
) -> list[BenchmarkRow]:
    """Metrics per (model, family) cell; with ablation, pruned and unpruned rows.

    The ablation shares one detection pass per replicate: candidates are found
    once without pruning and the pruning pass is applied to that same set,
    which is exactly what detect with prune enabled would produce.
    """
    if replicates < 1:
        raise ValueError("need at least one replicate")
    rows: list[BenchmarkRow] = []
    for model in models:
        if model not in MODEL_NAMES:
            raise ValueError(f"unknown model {model!r}; expected one of {MODEL_NAMES}")
        for family in families:
            if family not in NOISE_FAMILIES:
                raise ValueError(f"unknown noise family {family!r}")
            plain: list[tuple[tuple[int, ...], SegmentationResult]] = []
            pruned_pairs: list[tuple[tuple[int, ...], SegmentationResult]] = []
            for i in range(replicates):
                data_rng, det_seed = _replicate_streams(config.seed, model, family, i)
                spec = sample_kfe_spec(data_rng) if model == "kfe" else fixed_model(model)
                y = generate_sequence(spec, family, data_rng)
                if ablation:
                    cfg = replace(config, seed=det_seed, prune=False)
                    raw = detect(y, cfg, table)
                    plain.append((spec.tau, raw))
                    pruned_pairs.append((spec.tau, prune(y, raw, cfg, table)))
                else:
                    cfg = replace(config, seed=det_seed)
                    plain.append((spec.tau, detect(y, cfg, table)))
            if ablation:
                rows.append(BenchmarkRow(model, family, False, _metrics_from_pairs(plain)))
                rows.append(BenchmarkRow(model, family, True, _metrics_from_pairs(pruned_pairs)))
            else:
                rows.append(BenchmarkRow(model, family, config.prune, _metrics_from_pairs(plain)))
    return rows
