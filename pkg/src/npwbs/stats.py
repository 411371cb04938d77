"""Rank-based two-sample statistics for location-scale change detection.

Implements exact within-segment ranking, the Mann-Whitney statistic (location
shifts), the Mood statistic (scale shifts), and their Lepage-type combination:
the sum of the two squared standardized statistics. Closed-form null moments
make the combination distribution-free, so critical values calibrated once
apply to any continuous data distribution.

All functions here are pure; the minimum-length gate for detection lives in
:mod:`npwbs.segment`, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_ranks, check_sequence, check_split_index

__all__ = [
    "LepageValue",
    "MaxStatResult",
    "compute_ranks",
    "mann_whitney_u",
    "mann_whitney_moments",
    "mood_m",
    "mood_moments",
    "lepage",
    "max_lepage",
]


@dataclass(frozen=True)
class LepageValue:
    """A Lepage statistic value at a given split index (1-based, within segment)."""

    value: float
    split_index: int


@dataclass(frozen=True)
class MaxStatResult:
    """Maximum Lepage statistic over all splits of a segment."""

    t_max: float
    argmax_k: int


def compute_ranks(segment: np.ndarray) -> np.ndarray:
    """Rank each observation within its segment, smallest value getting rank 1.

    Ties are broken by position: rank(y_i) = #{j: y_j < y_i} + #{j <= i: y_j = y_i},
    so the output is always a permutation of 1..n. For distinct values this is
    the ordinary rank.
    """
    y = check_sequence(segment, "segment")
    order = np.argsort(y, kind="stable")
    ranks = np.empty(y.size, dtype=np.int64)
    ranks[order] = np.arange(1, y.size + 1)
    return ranks


def mann_whitney_moments(n: int, k: int) -> tuple[float, float]:
    """Null mean and variance of the Mann-Whitney statistic for split k of n."""
    n = float(n)
    k = float(k)
    mean = k * (n - k) / 2.0
    var = k * (n - k) * (n + 1.0) / 12.0
    return mean, var


def mood_moments(n: int, k: int) -> tuple[float, float]:
    """Null mean and variance of the Mood statistic for split k of n."""
    n = float(n)
    k = float(k)
    mean = k * (n * n - 1.0) / 12.0
    var = k * (n - k) * (n + 1.0) * (n * n - 4.0) / 180.0
    return mean, var


def mann_whitney_u(ranks: np.ndarray, k: int) -> float:
    """Mann-Whitney statistic: sum of the first k ranks minus k(k+1)/2.

    Sensitive to location differences between the first k and remaining n-k
    observations. Lies in [0, k(n-k)].
    """
    r = check_ranks(ranks)
    k = check_split_index(k, r.size)
    return float(r[:k].sum()) - k * (k + 1) / 2.0


def mood_m(ranks: np.ndarray, k: int) -> float:
    """Mood statistic: sum over the first k ranks of (r_i - (n+1)/2)^2.

    Sensitive to scale differences; extreme ranks concentrating in either
    sample inflate the squared deviations from the central rank.
    """
    r = check_ranks(ranks)
    k = check_split_index(k, r.size)
    center = (r.size + 1) / 2.0
    d = r[:k].astype(np.float64) - center
    return float(np.dot(d, d))


def lepage(ranks: np.ndarray, k: int) -> LepageValue:
    """Combined location-scale statistic at split k.

    Sum of the squared standardized Mann-Whitney and Mood statistics, each
    standardized by its closed-form null moments. Requires n >= 3 so the Mood
    variance is positive.
    """
    r = check_ranks(ranks)
    n = r.size
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n} (Mood variance degenerate)")
    k = check_split_index(k, n)
    u = mann_whitney_u(r, k)
    m = mood_m(r, k)
    eu, vu = mann_whitney_moments(n, k)
    em, vm = mood_moments(n, k)
    zu = u - eu
    zm = m - em
    return LepageValue(value=zu * zu / vu + zm * zm / vm, split_index=k)


def lepage_scan(ranks: np.ndarray) -> np.ndarray:
    """Lepage statistic at every split k = 1..n-1, as a length n-1 array.

    Vectorized reference implementation; :mod:`npwbs._kernels` mirrors the same
    arithmetic for the hot path.
    """
    r = np.asarray(ranks, dtype=np.float64)
    n = r.size
    nf = float(n)
    center = (nf + 1.0) / 2.0
    k = np.arange(1, n, dtype=np.float64)
    su = np.cumsum(r)[:-1]
    dev = r - center
    sq = np.cumsum(dev * dev)[:-1]
    u = su - k * (k + 1.0) / 2.0
    eu = k * (nf - k) / 2.0
    vu = k * (nf - k) * (nf + 1.0) / 12.0
    em = k * (nf * nf - 1.0) / 12.0
    vm = k * (nf - k) * (nf + 1.0) * (nf * nf - 4.0) / 180.0
    zu = u - eu
    zm = sq - em
    return zu * zu / vu + zm * zm / vm


def max_lepage(ranks: np.ndarray) -> MaxStatResult:
    """Maximize the Lepage statistic over all splits; ties go to the smallest k."""
    r = check_ranks(ranks)
    if r.size < 3:
        raise ValueError(f"need at least 3 observations, got {r.size}")
    t = lepage_scan(r)
    k = int(np.argmax(t))  # first occurrence wins on ties
    return MaxStatResult(t_max=float(t[k]), argmax_k=k + 1)
