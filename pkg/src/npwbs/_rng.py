"""Derived random streams for order-independent reproducibility.

Every stochastic component draws from a stream derived from (seed, namespace,
*key) via SeedSequence spawn keys. Streams therefore depend only on their key,
never on execution order, so recursive branches, threads, and replicates can
run in any order and still reproduce bit-identical results.
"""

from __future__ import annotations

import zlib

import numpy as np

# Namespace tags keep streams from distinct subsystems disjoint even when the
# numeric parts of their keys collide.
NS_DETECT = 0
NS_PRUNE = 1
NS_THRESHOLD = 2
NS_BENCHMARK = 3
NS_FALSE_POSITIVE = 4


def derive_rng(seed: int, namespace: int, *key: int) -> np.random.Generator:
    """Return a Generator for the stream identified by (seed, namespace, *key)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(namespace, *map(int, key)))
    return np.random.default_rng(ss)


def derive_seed(seed: int, namespace: int, *key: int) -> int:
    """Return a 63-bit integer seed derived from (seed, namespace, *key)."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(namespace, *map(int, key)))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> 1)


def label_key(label: str) -> int:
    """Stable 32-bit key for a string label (model or noise-family names)."""
    return zlib.crc32(label.encode("utf-8"))
