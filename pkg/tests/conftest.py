"""Shared fixtures: small Monte-Carlo threshold tables calibrated once per session."""

from __future__ import annotations

import pytest
from hypothesis import settings

from npwbs.thresholds import generate_thresholds, save_table

# JIT warm-up on first kernel use can exceed hypothesis' default deadline.
settings.register_profile("npwbs", deadline=None)
settings.load_profile("npwbs")


@pytest.fixture(scope="session")
def table100():
    """Thresholds for lengths 10..100 under the default scheme (M=1000)."""
    return generate_thresholds(range(10, 101, 5), replicates=500, m=1000, seed=777)


@pytest.fixture(scope="session")
def table100_file(table100, tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "table100.txt"
    save_table(table100, path)
    return path


@pytest.fixture(scope="session")
def table1k():
    """Thresholds to length 1000 for a cheaper M=100 scheme (benchmark tests)."""
    grid = list(range(10, 101, 10)) + list(range(150, 1001, 50))
    return generate_thresholds(grid, replicates=300, m=100, seed=778)


@pytest.fixture(scope="session")
def bs_table60():
    """Classic-binary-segmentation scheme (no random intervals) up to length 60."""
    return generate_thresholds(range(10, 61, 5), replicates=300, m=0, seed=779)


@pytest.fixture(scope="session")
def m1_table60():
    """One random interval plus the full segment, up to length 60."""
    return generate_thresholds(range(10, 61, 5), replicates=300, m=1, seed=779)
