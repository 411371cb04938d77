"""Monte-Carlo calibration of detection thresholds, with persistence.

The detection statistic is rank-based, so its null distribution does not
depend on the data's distribution. Thresholds are therefore simulated once
from standard-normal noise: for each segment length n, the statistic is
computed on many change-free sequences under the exact interval scheme used
in detection, and gamma(n, alpha) is the ceil(alpha * R)-th largest of the R
replicates. Lengths between grid points are linearly interpolated; lengths
beyond the grid are refused rather than extrapolated.

Tables are keyed to the interval scheme (M, full-segment flag): using a table
generated under a different scheme shifts the false-positive rate, so the
mismatch is an error unless explicitly overridden.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from ._kernels import scan_intervals, stable_order
from ._rng import NS_THRESHOLD, derive_rng
from .segment import MIN_SEGMENT_LENGTH, WbsConfig, _sample_interval_arrays

__all__ = [
    "ThresholdTable",
    "TableMetadata",
    "generate_thresholds",
    "lookup_gamma",
    "save_table",
    "load_table",
    "default_table_path",
    "resolve_table",
    "PERSISTED_LEVELS",
    "DEFAULT_GRID",
]

ENV_TABLE_PATH = "NPWBS_THRESHOLDS"

# The file format stores exactly these two significance levels.
PERSISTED_LEVELS = (0.05, 0.01)

# Production grid: dense where the statistic changes fastest, sparse above.
DEFAULT_GRID = tuple(
    list(range(10, 101, 1))
    + list(range(105, 1001, 5))
    + list(range(1100, 5001, 100))
    + list(range(6000, 10001, 1000))
)


@dataclass(frozen=True)
class TableMetadata:
    """Generation settings a table is only valid for."""

    m_intervals: int
    include_full_segment: bool
    replicates: int
    seed: int
    version: int = 1


@dataclass(frozen=True)
class ThresholdTable:
    """Calibrated thresholds gamma(n, alpha) on a length grid."""

    grid: tuple[int, ...]
    gamma: dict[float, tuple[float, ...]]
    metadata: TableMetadata
    enforce_scheme: bool = True

    def __post_init__(self) -> None:
        if not self.grid:
            raise ValueError("empty grid")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if self.grid[0] < MIN_SEGMENT_LENGTH:
            raise ValueError(f"grid lengths must be >= {MIN_SEGMENT_LENGTH}")
        for level, vals in self.gamma.items():
            if len(vals) != len(self.grid):
                raise ValueError(f"level {level}: {len(vals)} values for {len(self.grid)} lengths")
            if any(v <= 0 for v in vals):
                raise ValueError(f"level {level}: thresholds must be positive")

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(self.gamma)

    @property
    def max_length(self) -> int:
        return self.grid[-1]

    def lookup(self, n: int, alpha: float) -> float:
        """Threshold for segment length n: exact on grid, else interpolated."""
        if alpha not in self.gamma:
            raise ValueError(f"no thresholds for alpha={alpha}; table has {self.levels}")
        if n < MIN_SEGMENT_LENGTH:
            raise ValueError(f"length {n} below the minimum testable length {MIN_SEGMENT_LENGTH}")
        if n < self.grid[0]:
            raise ValueError(f"length {n} below the table's smallest calibrated length {self.grid[0]}")
        if n > self.grid[-1]:
            raise ValueError(
                f"length {n} exceeds the table's maximum calibrated length {self.grid[-1]}; "
                "extend the table with gen-thresholds"
            )
        vals = self.gamma[alpha]
        j = int(np.searchsorted(self.grid, n))
        if self.grid[j] == n:
            return vals[j]
        lo, hi = self.grid[j - 1], self.grid[j]
        w = (n - lo) / (hi - lo)
        return vals[j - 1] + w * (vals[j] - vals[j - 1])

    def require_covers(self, n: int) -> None:
        if n > self.grid[-1]:
            raise ValueError(
                f"sequence length {n} exceeds the table's maximum calibrated length "
                f"{self.grid[-1]}; extend the table with gen-thresholds"
            )

    def require_compatible(self, config: WbsConfig) -> None:
        """Refuse configs the table was not calibrated for."""
        if config.alpha not in self.gamma:
            raise ValueError(f"table has no thresholds for alpha={config.alpha} "
                             f"(available: {self.levels})")
        if not self.enforce_scheme:
            return
        if config.m_intervals != self.metadata.m_intervals:
            raise ValueError(
                f"table calibrated for M={self.metadata.m_intervals} intervals but the "
                f"detector is configured with M={config.m_intervals}; regenerate the table "
                "or override the scheme check"
            )
        if config.include_full_segment != self.metadata.include_full_segment:
            raise ValueError(
                f"table calibrated with full_segment={self.metadata.include_full_segment} "
                f"but the detector uses {config.include_full_segment}; regenerate the table "
                "or override the scheme check"
            )

    def without_scheme_guard(self) -> "ThresholdTable":
        return replace(self, enforce_scheme=False)


def _null_statistics(
    n: int,
    replicates: int,
    m: int,
    seed: int,
    include_full_segment: bool,
    null_sampler: Callable[[np.random.Generator, int], np.ndarray],
) -> np.ndarray:
    """Detection statistics on `replicates` change-free length-n sequences."""
    out = np.empty(replicates, dtype=np.float64)
    for i in range(replicates):
        # Draw order within the stream is fixed: data first, then intervals.
        rng = derive_rng(seed, NS_THRESHOLD, n, i)
        y = np.asarray(null_sampler(rng, n), dtype=np.float64)
        starts, ends = _sample_interval_arrays(rng, 1, n, m)
        if include_full_segment:
            starts = np.append(starts, 1)
            ends = np.append(ends, n)
        t, _ = scan_intervals(stable_order(y), starts - 1, ends - 1)
        out[i] = t.max()
    return out


def generate_thresholds(
    grid,
    replicates: int,
    levels=PERSISTED_LEVELS,
    m: int = 1000,
    seed: int = 0,
    include_full_segment: bool = True,
    null_sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None,
    jobs: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> ThresholdTable:
    """Calibrate gamma(n, alpha) for every n in grid at every requested level.

    Each replicate's stream is derived from (seed, n, replicate), so the table
    is identical for any jobs count or execution order. null_sampler defaults
    to standard normal; any continuous distribution gives the same table up to
    Monte-Carlo error.
    """
    grid = tuple(int(n) for n in grid)
    if not grid:
        raise ValueError("empty grid")
    if any(n < MIN_SEGMENT_LENGTH for n in grid):
        raise ValueError(f"grid lengths must be >= {MIN_SEGMENT_LENGTH}")
    if replicates < 100:
        raise ValueError(f"need at least 100 replicates, got {replicates}")
    levels = tuple(float(a) for a in levels)
    for a in levels:
        if not 0.0 < a < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {a}")
        if math.ceil(a * replicates) < 1:
            raise ValueError(f"alpha={a} needs more than {replicates} replicates")
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m == 0 and not include_full_segment:
        raise ValueError("m=0 requires include_full_segment=True")
    if null_sampler is None:
        null_sampler = lambda rng, n: rng.standard_normal(n)

    grid_sorted = tuple(sorted(set(grid)))

    def one_length(n: int) -> np.ndarray:
        stats = _null_statistics(n, replicates, m, seed, include_full_segment, null_sampler)
        return np.sort(stats)[::-1]

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            ordered = list(pool.map(one_length, grid_sorted))
    else:
        ordered = []
        for idx, n in enumerate(grid_sorted):
            ordered.append(one_length(n))
            if progress is not None:
                progress(idx + 1, len(grid_sorted))

    gamma: dict[float, tuple[float, ...]] = {}
    for a in levels:
        rank = math.ceil(a * replicates)  # the rank-th largest null statistic
        gamma[a] = tuple(float(desc[rank - 1]) for desc in ordered)
    meta = TableMetadata(
        m_intervals=m,
        include_full_segment=include_full_segment,
        replicates=replicates,
        seed=seed,
    )
    return ThresholdTable(grid=grid_sorted, gamma=gamma, metadata=meta)


def lookup_gamma(table: ThresholdTable, n: int, alpha: float) -> float:
    return table.lookup(n, alpha)


def save_table(table: ThresholdTable, destination) -> None:
    """Write the two-level text format; floats use shortest round-trip repr."""
    if table.levels != PERSISTED_LEVELS:
        raise ValueError(f"file format stores levels {PERSISTED_LEVELS}, table has {table.levels}")
    meta = table.metadata
    lines = [
        f"# npwbs-thresholds v{meta.version} M={meta.m_intervals} "
        f"full_segment={'true' if meta.include_full_segment else 'false'} "
        f"reps={meta.replicates} seed={meta.seed}"
    ]
    g05, g01 = table.gamma[0.05], table.gamma[0.01]
    for n, a, b in zip(table.grid, g05, g01):
        lines.append(f"{n},{a!r},{b!r}")
    Path(destination).write_text("\n".join(lines) + "\n")


def load_table(source) -> ThresholdTable:
    """Parse a threshold file; errors name the offending line."""
    text = Path(source).read_text()
    lines = text.splitlines()
    if not lines:
        raise ValueError(f"{source}: empty threshold file")
    header = lines[0]
    prefix = "# npwbs-thresholds v1 "
    if not header.startswith(prefix):
        raise ValueError(f"{source}:1: missing 'npwbs-thresholds v1' header")
    fields = {}
    for token in header[len(prefix):].split():
        key, _, val = token.partition("=")
        fields[key] = val
    try:
        meta = TableMetadata(
            m_intervals=int(fields["M"]),
            include_full_segment={"true": True, "false": False}[fields["full_segment"]],
            replicates=int(fields["reps"]),
            seed=int(fields["seed"]),
        )
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{source}:1: bad header field ({exc})") from None
    grid: list[int] = []
    g05: list[float] = []
    g01: list[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(f"{source}:{lineno}: expected 'n,gamma_0.05,gamma_0.01'")
        try:
            grid.append(int(parts[0]))
            g05.append(float(parts[1]))
            g01.append(float(parts[2]))
        except ValueError:
            raise ValueError(f"{source}:{lineno}: non-numeric entry") from None
    if not grid:
        raise ValueError(f"{source}: no threshold rows")
    return ThresholdTable(
        grid=tuple(grid),
        gamma={0.05: tuple(g05), 0.01: tuple(g01)},
        metadata=meta,
    )


def default_table_path() -> Path:
    """Bundled production table shipped with the package."""
    return Path(str(resources.files("npwbs").joinpath("data/thresholds_default.txt")))


def resolve_table(path=None) -> ThresholdTable:
    """Load the table at `path`, else $NPWBS_THRESHOLDS, else the bundled one."""
    if path is not None:
        return load_table(path)
    env = os.environ.get(ENV_TABLE_PATH)
    if env:
        return load_table(env)
    return load_table(default_table_path())
