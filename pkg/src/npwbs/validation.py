"""Input validation helpers shared across the package."""

from __future__ import annotations

from typing import Iterable

import numpy as np


def check_sequence(y: Iterable[float] | np.ndarray, name: str = "y") -> np.ndarray:
    """Coerce to a 1-D float64 array and reject empty or non-finite input.

    A single-column 2-D array is accepted and flattened so that estimator-style
    inputs of shape (n, 1) work unchanged.
    """
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {np.shape(y)}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"{name} contains a non-finite value at position {bad + 1}")
    return arr


def check_ranks(ranks: Iterable[int] | np.ndarray) -> np.ndarray:
    """Coerce to a 1-D int64 rank vector and verify it is a permutation of 1..n."""
    arr = np.asarray(ranks)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("ranks must be a non-empty 1-D array")
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError("ranks must be integers")
        arr = as_int
    arr = arr.astype(np.int64, copy=False)
    n = arr.size
    if not np.array_equal(np.sort(arr), np.arange(1, n + 1)):
        raise ValueError(f"ranks must be a permutation of 1..{n}")
    return arr


def check_split_index(k: int, n: int) -> int:
    """Validate a split index 1 <= k <= n-1."""
    k = int(k)
    if not 1 <= k <= n - 1:
        raise ValueError(f"split index k={k} out of range [1, {n - 1}]")
    return k
