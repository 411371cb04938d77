"""Nonparametric multiple change-point detection.

Wild binary segmentation with a combined rank statistic sensitive to location
and scale changes, Monte-Carlo calibrated thresholds, a candidate pruning
pass, simulation benchmarks, and correlation-matrix PCA for count data.
"""

from .estimators import CorrelationPCA, WildBinarySegmentation
from .evaluation import (
    MetricsReport,
    exact_hit_rate,
    false_positive_experiment,
    mean_abs_k_error,
    run_benchmark,
    within2_hit_rate,
)
from .segment import (
    Interval,
    SegmentationResult,
    WbsConfig,
    detect,
    prune,
    sample_intervals,
    wbs_statistic,
)
from .simdata import (
    DataModelSpec,
    NOISE_FAMILIES,
    fixed_model,
    generate_sequence,
    sample_kfe_spec,
)
from .stats import compute_ranks, lepage, mann_whitney_u, max_lepage, mood_m
from .stylometry import CountMatrix, PcaBasis, correlation_pca, load_count_matrix, pc_scores
from .thresholds import (
    ThresholdTable,
    generate_thresholds,
    load_table,
    lookup_gamma,
    resolve_table,
    save_table,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationPCA",
    "CountMatrix",
    "DataModelSpec",
    "Interval",
    "MetricsReport",
    "NOISE_FAMILIES",
    "PcaBasis",
    "SegmentationResult",
    "ThresholdTable",
    "WbsConfig",
    "WildBinarySegmentation",
    "compute_ranks",
    "correlation_pca",
    "detect",
    "exact_hit_rate",
    "false_positive_experiment",
    "fixed_model",
    "generate_sequence",
    "generate_thresholds",
    "lepage",
    "load_count_matrix",
    "load_table",
    "lookup_gamma",
    "mann_whitney_u",
    "max_lepage",
    "mean_abs_k_error",
    "mood_m",
    "prune",
    "resolve_table",
    "run_benchmark",
    "sample_intervals",
    "sample_kfe_spec",
    "save_table",
    "wbs_statistic",
    "within2_hit_rate",
    "__version__",
]
