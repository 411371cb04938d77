"""Wild binary segmentation over random intervals, plus candidate pruning.

The single-change statistic (max Lepage over splits) is maximized over M
randomly sampled subintervals of the segment under test, which keeps nearby
change points from masking each other. A segment is split where the best
interval's statistic exceeds the calibrated threshold for the segment length,
then both sides are processed recursively. An optional pruning pass re-tests
every candidate against its surviving neighbors and deletes the ones that no
longer clear the threshold.

Index convention: 1-based throughout; a change point is the index of the last
observation of the segment it terminates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import scan_intervals, stable_order
from ._rng import NS_DETECT, NS_PRUNE, derive_rng
from .validation import check_sequence

__all__ = [
    "MIN_SEGMENT_LENGTH",
    "Interval",
    "WbsConfig",
    "SegmentationResult",
    "sample_intervals",
    "wbs_statistic",
    "detect",
    "prune",
]

# Shortest segment on which the test is performed at all. Below this the
# rank-statistic thresholds are too coarse to control the error rate.
MIN_SEGMENT_LENGTH = 10


@dataclass(frozen=True)
class Interval:
    """Closed index range [s, e], 1-based, long enough to test."""

    s: int
    e: int

    def __post_init__(self) -> None:
        if self.s >= self.e:
            raise ValueError(f"interval start must precede end, got [{self.s}, {self.e}]")
        if self.e - self.s + 1 < MIN_SEGMENT_LENGTH:
            raise ValueError(
                f"interval [{self.s}, {self.e}] shorter than the minimum testable "
                f"length {MIN_SEGMENT_LENGTH}"
            )

    @property
    def length(self) -> int:
        return self.e - self.s + 1


@dataclass(frozen=True)
class WbsConfig:
    """Detection settings.

    m_intervals=0 with include_full_segment=True degenerates to classic binary
    segmentation (the full segment is the only candidate interval).
    """

    m_intervals: int = 1000
    alpha: float = 0.05
    seed: int = 0
    include_full_segment: bool = True
    prune: bool = True

    def __post_init__(self) -> None:
        if self.m_intervals < 0:
            raise ValueError(f"m_intervals must be >= 0, got {self.m_intervals}")
        if self.m_intervals == 0 and not self.include_full_segment:
            raise ValueError("m_intervals=0 requires include_full_segment=True "
                             "(otherwise there is nothing to test)")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class SegmentationResult:
    """Detected change points (1-based last-index-of-segment), ascending."""

    change_points: tuple[int, ...]
    k_hat: int = field(default=-1)

    def __post_init__(self) -> None:
        pts = tuple(int(t) for t in self.change_points)
        object.__setattr__(self, "change_points", pts)
        if self.k_hat == -1:
            object.__setattr__(self, "k_hat", len(pts))
        if self.k_hat != len(pts):
            raise ValueError(f"k_hat={self.k_hat} does not match {len(pts)} change points")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError(f"change points must be strictly increasing, got {pts}")


def _sample_interval_arrays(
    rng: np.random.Generator, p: int, q: int, m: int
) -> tuple[np.ndarray, np.ndarray]:
    """m accepted (start, end) pairs, 1-based, uniform over valid pairs in [p, q].

    Rejection sampling in batches: both endpoints drawn uniformly from {p..q},
    pairs kept when the span reaches the minimum testable length (which also
    forces start < end).
    """
    if q - p + 1 < MIN_SEGMENT_LENGTH:
        raise ValueError(
            f"segment [{p}, {q}] shorter than the minimum testable length {MIN_SEGMENT_LENGTH}"
        )
    starts = np.empty(m, dtype=np.int64)
    ends = np.empty(m, dtype=np.int64)
    filled = 0
    while filled < m:
        batch = max(2 * (m - filled), 64)
        s = rng.integers(p, q + 1, size=batch)
        e = rng.integers(p, q + 1, size=batch)
        ok = e - s + 1 >= MIN_SEGMENT_LENGTH
        take = min(int(ok.sum()), m - filled)
        starts[filled : filled + take] = s[ok][:take]
        ends[filled : filled + take] = e[ok][:take]
        filled += take
    return starts, ends


def sample_intervals(
    p: int, q: int, m: int, rng: np.random.Generator, include_full_segment: bool = False
) -> list[Interval]:
    """Draw m random testable intervals within [p, q]; optionally append [p, q]."""
    starts, ends = _sample_interval_arrays(rng, p, q, m)
    out = [Interval(int(s), int(e)) for s, e in zip(starts, ends)]
    if include_full_segment:
        out.append(Interval(p, q))
    return out


def _best_over_intervals(
    order0: np.ndarray, starts: np.ndarray, ends: np.ndarray
) -> tuple[float, int, int]:
    """(statistic, 1-based split, interval position) maximizing over intervals."""
    t, split = scan_intervals(order0, starts - 1, ends - 1)
    j = int(np.argmax(t))  # ties: earliest interval in input order
    return float(t[j]), int(split[j]), j


def wbs_statistic(
    y: np.ndarray, p: int, q: int, intervals: list[Interval]
) -> tuple[float, Interval, int]:
    """Maximum of the single-change statistic over the given intervals.

    Returns (statistic, best interval, split index in global 1-based
    coordinates); the split index is the last observation of the left part.
    Ties are broken toward the earliest interval, then the smallest split.
    """
    yv = check_sequence(y)
    n = yv.size
    if not intervals:
        raise ValueError("need at least one interval")
    if not 1 <= p < q <= n:
        raise ValueError(f"segment [{p}, {q}] out of bounds for length {n}")
    for iv in intervals:
        if iv.s < p or iv.e > q:
            raise ValueError(f"interval [{iv.s}, {iv.e}] not inside segment [{p}, {q}]")
    starts = np.fromiter((iv.s for iv in intervals), dtype=np.int64, count=len(intervals))
    ends = np.fromiter((iv.e for iv in intervals), dtype=np.int64, count=len(intervals))
    t, split, j = _best_over_intervals(stable_order(yv), starts, ends)
    return t, intervals[j], split


def _segment_statistic(
    order0: np.ndarray, p: int, q: int, config: WbsConfig, rng: np.random.Generator
) -> tuple[float, int]:
    """Sample this segment's intervals and return (statistic, split)."""
    starts, ends = _sample_interval_arrays(rng, p, q, config.m_intervals)
    if config.include_full_segment:
        starts = np.append(starts, p)
        ends = np.append(ends, q)
    t, split, _ = _best_over_intervals(order0, starts, ends)
    return t, split


def detect(y: np.ndarray, config: WbsConfig, table) -> SegmentationResult:
    """Find all change points by recursive segmentation.

    Each segment [p, q] gets a fresh set of random intervals drawn from a
    stream derived from (seed, p, q), so results do not depend on recursion
    order. A segment is split when its statistic exceeds the threshold for its
    length; both halves are then processed. Lengths below the minimum are left
    untested. Applies :func:`prune` afterwards when config.prune is set.
    """
    yv = check_sequence(y)
    n = yv.size
    if n < MIN_SEGMENT_LENGTH:
        return SegmentationResult(change_points=())
    table.require_covers(n)
    table.require_compatible(config)
    order0 = stable_order(yv)
    found: list[int] = []
    stack = [(1, n)]
    while stack:
        p, q = stack.pop()
        length = q - p + 1
        if length < MIN_SEGMENT_LENGTH:
            continue
        rng = derive_rng(config.seed, NS_DETECT, p, q)
        t, split = _segment_statistic(order0, p, q, config, rng)
        if t > table.lookup(length, config.alpha):
            found.append(split)
            stack.append((p, split))
            stack.append((split + 1, q))
    found.sort()
    result = SegmentationResult(change_points=tuple(found))
    if config.prune:
        result = prune(yv, result, config, table)
    return result


def prune(
    y: np.ndarray, candidates: SegmentationResult, config: WbsConfig, table
) -> SegmentationResult:
    """Re-test each candidate between its current neighbors; drop the weak ones.

    Candidates are processed in ascending order with sentinels 0 and n. The
    window for a candidate runs from just past its surviving left neighbor
    through its right neighbor; a fresh interval set is drawn per window from
    a stream derived from (seed, window). Deletions take effect immediately,
    widening the window of the next candidate. Windows too short to test keep
    their candidate. Output is always a subset of the input.
    """
    yv = check_sequence(y)
    n = yv.size
    pts = list(candidates.change_points)
    if any(not 1 <= t <= n - 1 for t in pts):
        raise ValueError(f"candidates must lie in [1, {n - 1}]")
    if not pts:
        return SegmentationResult(change_points=())
    order0 = stable_order(yv)
    kept: list[int] = []
    for i, tau in enumerate(pts):
        left = kept[-1] if kept else 0
        right = pts[i + 1] if i + 1 < len(pts) else n
        p, q = left + 1, right
        if q - p + 1 < MIN_SEGMENT_LENGTH:
            kept.append(tau)  # untestable window: no evidence to remove
            continue
        rng = derive_rng(config.seed, NS_PRUNE, p, q)
        t, _ = _segment_statistic(order0, p, q, config, rng)
        if t > table.lookup(q - p + 1, config.alpha):
            kept.append(tau)
    return SegmentationResult(change_points=tuple(kept))
