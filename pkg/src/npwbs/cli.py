"""Command-line interface.

Subcommands: detect (change points in a sequence file), gen-thresholds
(Monte-Carlo calibration), simulate (benchmark sequences), benchmark (metric
tables), pca (principal-component scores of a count matrix).

File formats
------------
Sequence files: one numeric value per line; lines starting with '#' and blank
lines are ignored. Count matrices: CSV with a header row of column labels and
one row of nonnegative integer counts per document. Threshold files: see
:mod:`npwbs.thresholds`.

Report formats
--------------
detect emits plain text by default, or JSON (--json) / CSV (--csv). The JSON
object holds change_points, k_hat, segments (start/end/median), config (alpha,
m_intervals, seed, pruned, include_full_segment, thresholds id) and an
optional note. The CSV form carries the config echo in '#' comment lines
followed by 'segment,start,end,median' rows. benchmark emits CSV rows
'model,family,metric,value,replicates,seed' (or --json). All output is
deterministic: rerunning the same argv reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import run_benchmark, simulate_replicate
from .segment import MIN_SEGMENT_LENGTH, WbsConfig, detect
from .simdata import MODEL_NAMES, NOISE_FAMILIES
from .stylometry import correlation_pca, load_count_matrix, pc_scores
from .thresholds import (
    DEFAULT_GRID,
    ENV_TABLE_PATH,
    ThresholdTable,
    default_table_path,
    generate_thresholds,
    load_table,
    save_table,
)

__all__ = ["DetectionReport", "parse_sequence_file", "build_parser", "run_cli", "main"]


@dataclass(frozen=True)
class DetectionReport:
    """Everything needed to read and to reproduce one detection run."""

    change_points: tuple[int, ...]
    k_hat: int
    segments: tuple[tuple[int, int, float], ...]  # (start, end, median)
    alpha: float
    m_intervals: int
    seed: int
    pruned: bool
    include_full_segment: bool
    table_id: str
    note: str | None = None


def parse_sequence_file(source) -> np.ndarray:
    """One value per line; '#' lines and blank lines skipped; errors cite lines."""
    text = Path(source).read_text()
    values: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            values.append(float(stripped))
        except ValueError:
            raise ValueError(f"{source}:{lineno}: not a number: {stripped!r}") from None
    if not values:
        raise ValueError(f"{source}: no values found")
    return np.asarray(values, dtype=np.float64)


def _parse_grid(spec: str) -> tuple[int, ...]:
    """Grid spec: comma-separated ints or a:b[:step] inclusive ranges, or 'default'."""
    if spec.strip() == "default":
        return DEFAULT_GRID
    out: list[int] = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        try:
            if len(parts) == 1:
                out.append(int(parts[0]))
            elif len(parts) in (2, 3):
                a, b = int(parts[0]), int(parts[1])
                step = int(parts[2]) if len(parts) == 3 else 1
                if step < 1 or b < a:
                    raise ValueError
                out.extend(range(a, b + 1, step))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(
                f"bad grid item {item!r}; use N, A:B, or A:B:STEP (inclusive)"
            ) from None
    if not out:
        raise ValueError("empty grid spec")
    return tuple(out)


def _table_source(flag_value) -> Path:
    if flag_value is not None:
        return Path(flag_value)
    env = os.environ.get(ENV_TABLE_PATH)
    if env:
        return Path(env)
    return default_table_path()


def _table_id(source: Path, table: ThresholdTable) -> str:
    m = table.metadata
    return (
        f"{source}#M={m.m_intervals},full_segment={str(m.include_full_segment).lower()},"
        f"reps={m.replicates},seed={m.seed}"
    )


def _render_text(report: DetectionReport) -> str:
    lines = []
    if report.note:
        lines.append(f"note: {report.note}")
    pts = ", ".join(str(t) for t in report.change_points) if report.change_points else "none"
    lines.append(f"change points ({report.k_hat}): {pts}")
    lines.append("segments:")
    for i, (start, end, median) in enumerate(report.segments, start=1):
        lines.append(f"  {i}: [{start}, {end}] median {median!r}")
    lines.append(
        f"config: alpha={report.alpha} M={report.m_intervals} seed={report.seed} "
        f"pruned={str(report.pruned).lower()} "
        f"full_segment={str(report.include_full_segment).lower()}"
    )
    lines.append(f"thresholds: {report.table_id}")
    return "\n".join(lines) + "\n"


def _render_json(report: DetectionReport) -> str:
    obj = {
        "change_points": list(report.change_points),
        "k_hat": report.k_hat,
        "segments": [
            {"start": s, "end": e, "median": m} for s, e, m in report.segments
        ],
        "config": {
            "alpha": report.alpha,
            "m_intervals": report.m_intervals,
            "seed": report.seed,
            "pruned": report.pruned,
            "include_full_segment": report.include_full_segment,
            "thresholds": report.table_id,
        },
    }
    if report.note:
        obj["note"] = report.note
    return json.dumps(obj, indent=2) + "\n"


def _render_csv(report: DetectionReport) -> str:
    lines = [
        f"# alpha={report.alpha} M={report.m_intervals} seed={report.seed} "
        f"pruned={str(report.pruned).lower()} "
        f"full_segment={str(report.include_full_segment).lower()}",
        f"# thresholds={report.table_id}",
        f"# k_hat={report.k_hat}",
    ]
    if report.note:
        lines.append(f"# note: {report.note}")
    lines.append("segment,start,end,median")
    for i, (start, end, median) in enumerate(report.segments, start=1):
        lines.append(f"{i},{start},{end},{median!r}")
    return "\n".join(lines) + "\n"


def _cmd_detect(args) -> int:
    y = parse_sequence_file(args.input)
    config = WbsConfig(
        m_intervals=args.m,
        alpha=args.alpha,
        seed=args.seed,
        include_full_segment=not args.no_full_segment,
        prune=not args.no_prune,
    )
    source = _table_source(args.thresholds)
    table = load_table(source)
    if args.allow_threshold_mismatch:
        table = table.without_scheme_guard()
    result = detect(y, config, table)
    note = None
    if y.size < MIN_SEGMENT_LENGTH:
        note = (
            f"no test performed: {y.size} observations is below the minimum "
            f"testable length {MIN_SEGMENT_LENGTH}"
        )
    bounds = (0,) + result.change_points + (y.size,)
    segments = tuple(
        (a + 1, b, float(np.median(y[a:b]))) for a, b in zip(bounds, bounds[1:])
    )
    report = DetectionReport(
        change_points=result.change_points,
        k_hat=result.k_hat,
        segments=segments,
        alpha=config.alpha,
        m_intervals=config.m_intervals,
        seed=config.seed,
        pruned=config.prune,
        include_full_segment=config.include_full_segment,
        table_id=_table_id(source, table),
        note=note,
    )
    if args.json:
        sys.stdout.write(_render_json(report))
    elif args.csv:
        sys.stdout.write(_render_csv(report))
    else:
        sys.stdout.write(_render_text(report))
    return 0


def _cmd_gen_thresholds(args) -> int:
    grid = _parse_grid(args.grid)
    progress = None
    if args.verbose:

        def progress(done: int, total: int) -> None:
            sys.stderr.write(f"gen-thresholds: {done}/{total} grid lengths\n")
            sys.stderr.flush()

    table = generate_thresholds(
        grid,
        replicates=args.reps,
        m=args.m,
        seed=args.seed,
        include_full_segment=not args.no_full_segment,
        jobs=args.jobs if args.jobs else (os.cpu_count() or 1),
        progress=progress,
    )
    save_table(table, args.out)
    sys.stderr.write(f"wrote {len(table.grid)} grid lengths to {args.out}\n")
    return 0


def _cmd_simulate(args) -> int:
    tau, y = simulate_replicate(args.seed, args.model, args.noise)
    sys.stdout.write(
        f"# npwbs-sequence model={args.model} noise={args.noise} seed={args.seed} "
        f"n={y.size} k={len(tau)}\n"
    )
    sys.stdout.write(f"# tau={','.join(str(t) for t in tau)}\n")
    for v in y:
        sys.stdout.write(f"{float(v)!r}\n")
    return 0


def _cmd_benchmark(args) -> int:
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    families = [f.strip() for f in args.noise.split(",") if f.strip()]
    config = WbsConfig(m_intervals=args.m, alpha=args.alpha, seed=args.seed)
    source = _table_source(args.thresholds)
    table = load_table(source)
    if args.allow_threshold_mismatch:
        table = table.without_scheme_guard()
    rows = run_benchmark(models, families, args.reps, config, table, ablation=args.ablation)
    if args.json:
        payload = [
            {
                "model": r.model,
                "family": r.family,
                "pruned": r.pruned,
                "replicates": r.metrics.replicates,
                "seed": args.seed,
                "metrics": {
                    "mean_abs_k_error": r.metrics.mean_abs_k_error,
                    "exact_hit_rate": r.metrics.exact_hit_rate,
                    "within2_hit_rate": r.metrics.within2_hit_rate,
                },
            }
            for r in rows
        ]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return 0
    out = ["model,family,metric,value,replicates,seed"]
    for r in rows:
        suffix = ("_pruned" if r.pruned else "_unpruned") if args.ablation else ""
        m = r.metrics
        for name, value in (
            ("mean_abs_k_error", m.mean_abs_k_error),
            ("exact_hit_rate", m.exact_hit_rate),
            ("within2_hit_rate", m.within2_hit_rate),
        ):
            out.append(f"{r.model},{r.family},{name}{suffix},{value!r},{m.replicates},{args.seed}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_pca(args) -> int:
    matrix = load_count_matrix(args.input)
    basis = correlation_pca(matrix, relative_frequencies=args.relative_frequencies)
    scores = pc_scores(matrix, basis, args.component)
    for v in scores:
        sys.stdout.write(f"{float(v)!r}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npwbs",
        description="Nonparametric multiple change-point detection via wild binary segmentation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect change points in a sequence file")
    p.add_argument("--input", required=True, help="sequence file, one value per line")
    p.add_argument("--alpha", type=float, default=0.05, choices=[0.05, 0.01])
    p.add_argument("--m", type=int, default=1000, help="random intervals per tested segment")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prune", action="store_true", help="skip the pruning pass")
    p.add_argument("--no-full-segment", action="store_true",
                   help="do not add the full segment to the tested intervals")
    p.add_argument("--thresholds", help=f"threshold table path (default: ${ENV_TABLE_PATH} "
                                        "or the bundled table)")
    p.add_argument("--allow-threshold-mismatch", action="store_true",
                   help="use a table generated under a different interval scheme")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("gen-thresholds", help="calibrate a threshold table")
    p.add_argument("--grid", required=True,
                   help="lengths: N, A:B, A:B:STEP, comma-separated; or 'default'")
    p.add_argument("--reps", type=int, required=True, help="null replicates per length")
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-full-segment", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (0 = all cores)")
    p.add_argument("--verbose", action="store_true", help="progress to stderr")
    p.set_defaults(func=_cmd_gen_thresholds)

    p = sub.add_parser("simulate", help="print one benchmark sequence")
    p.add_argument("--model", required=True, choices=list(MODEL_NAMES))
    p.add_argument("--noise", required=True, choices=list(NOISE_FAMILIES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("benchmark", help="run the simulation benchmark")
    p.add_argument("--models", required=True, help="comma-separated model names")
    p.add_argument("--noise", required=True, help="comma-separated noise families")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.05, choices=[0.05, 0.01])
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--thresholds")
    p.add_argument("--allow-threshold-mismatch", action="store_true")
    p.add_argument("--ablation", action="store_true",
                   help="report pruned and unpruned metrics from one detection pass")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("pca", help="project a count matrix onto one principal component")
    p.add_argument("--input", required=True, help="count-matrix CSV with a header row")
    p.add_argument("--component", type=int, required=True, help="1-based component index")
    p.add_argument("--relative-frequencies", action="store_true",
                   help="normalize each row to proportions before standardizing")
    p.set_defaults(func=_cmd_pca)

    return parser


def run_cli(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
