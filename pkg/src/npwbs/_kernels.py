"""Hot-path scan kernels, compiled with numba when available.

The detection inner loop evaluates the maximum Lepage statistic over many
subintervals of one sequence. Re-ranking each subinterval from scratch costs
an O(L log L) sort per interval; instead we sort the full sequence once
(stable, so ties keep position order) and recover within-interval ranks by a
single O(n) walk over that global order: restricting a stable order to a
subset preserves relative order, hence visiting segment members in global
order assigns them ranks 1..L consistent with the positional tie rule.

The numba kernels and the numpy fallbacks perform additions and divisions in
the same sequence, so both paths produce bit-identical statistics.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["HAVE_NUMBA", "stable_order", "scan_intervals"]


def stable_order(y: np.ndarray) -> np.ndarray:
    """0-based indices of y sorted by value, ties by position (stable)."""
    return np.argsort(y, kind="stable")


def _scan_intervals_np(
    order0: np.ndarray, starts0: np.ndarray, ends0: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Pure-numpy fallback; mirrors the compiled kernel's arithmetic order."""
    n = order0.size
    m = starts0.size
    out_t = np.full(m, -1.0, dtype=np.float64)
    out_split = np.zeros(m, dtype=np.int64)
    for j in range(m):
        s0 = int(starts0[j])
        e0 = int(ends0[j])
        seg_order = order0[(order0 >= s0) & (order0 <= e0)]
        length = seg_order.size
        if length < 3:
            continue
        ranks = np.empty(length, dtype=np.float64)
        ranks[seg_order - s0] = np.arange(1.0, length + 1.0)
        nf = float(length)
        center = (nf + 1.0) / 2.0
        kf = np.arange(1, length, dtype=np.float64)
        su = np.cumsum(ranks)[:-1]
        dev = ranks - center
        sq = np.cumsum(dev * dev)[:-1]
        u = su - kf * (kf + 1.0) / 2.0
        eu = kf * (nf - kf) / 2.0
        vu = kf * (nf - kf) * (nf + 1.0) / 12.0
        em = kf * (nf * nf - 1.0) / 12.0
        vm = kf * (nf - kf) * (nf + 1.0) * (nf * nf - 4.0) / 180.0
        zu = u - eu
        zm = sq - em
        t = zu * zu / vu + zm * zm / vm
        k = int(np.argmax(t))  # ties: smallest split
        out_t[j] = t[k]
        out_split[j] = s0 + k + 1  # 1-based last index of the left part
    return out_t, out_split


_DISABLE = os.environ.get("NPWBS_DISABLE_NUMBA", "") not in ("", "0")

if not _DISABLE:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - exercised via env toggle instead
        njit = None
else:
    njit = None

HAVE_NUMBA = njit is not None

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _scan_intervals_nb(order0, starts0, ends0):  # pragma: no cover - compiled
        n = order0.shape[0]
        m = starts0.shape[0]
        out_t = np.full(m, -1.0, dtype=np.float64)
        out_split = np.zeros(m, dtype=np.int64)
        ranks = np.empty(n, dtype=np.float64)
        for j in range(m):
            s0 = starts0[j]
            e0 = ends0[j]
            length = e0 - s0 + 1
            if length < 3:
                continue
            c = 0.0
            for t_ in range(n):
                idx = order0[t_]
                if s0 <= idx <= e0:
                    c += 1.0
                    ranks[idx - s0] = c
            nf = float(length)
            center = (nf + 1.0) / 2.0
            su = 0.0
            sq = 0.0
            best_t = -1.0
            best_k = 0
            for i in range(length - 1):
                r = ranks[i]
                su += r
                dev = r - center
                sq += dev * dev
                kf = float(i + 1)
                u = su - kf * (kf + 1.0) / 2.0
                eu = kf * (nf - kf) / 2.0
                vu = kf * (nf - kf) * (nf + 1.0) / 12.0
                em = kf * (nf * nf - 1.0) / 12.0
                vm = kf * (nf - kf) * (nf + 1.0) * (nf * nf - 4.0) / 180.0
                zu = u - eu
                zm = sq - em
                t = zu * zu / vu + zm * zm / vm
                if t > best_t:  # strict: ties keep the smallest split
                    best_t = t
                    best_k = i + 1
            out_t[j] = best_t
            out_split[j] = s0 + best_k
        return out_t, out_split


def scan_intervals(
    order0: np.ndarray, starts0: np.ndarray, ends0: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Maximum Lepage statistic and argmax split for each interval.

    Parameters are 0-based inclusive global index ranges plus the global
    stable order of the sequence. Returns per-interval statistic values and
    1-based global split positions (last index of the left part); intervals
    shorter than 3 get statistic -1 and split 0.
    """
    order0 = np.ascontiguousarray(order0, dtype=np.int64)
    starts0 = np.ascontiguousarray(starts0, dtype=np.int64)
    ends0 = np.ascontiguousarray(ends0, dtype=np.int64)
    if HAVE_NUMBA:
        return _scan_intervals_nb(order0, starts0, ends0)
    return _scan_intervals_np(order0, starts0, ends0)
