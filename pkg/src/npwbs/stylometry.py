"""Count-matrix ingestion and correlation-matrix PCA.

Turns a documents-by-categories count matrix into one score series per
principal component of the column correlation matrix. Rows are documents in
temporal order, so a component's scores form a sequence the change-point
detector can consume directly.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "CountMatrix",
    "PcaBasis",
    "load_count_matrix",
    "correlation_pca",
    "pc_scores",
]


@dataclass(frozen=True)
class CountMatrix:
    """Nonnegative integer counts; rows are documents in temporal order."""

    labels: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.counts)
        if c.ndim != 2 or c.shape[0] < 2 or c.shape[1] < 2:
            raise ValueError(f"need at least a 2x2 matrix, got shape {c.shape}")
        if len(self.labels) != c.shape[1]:
            raise ValueError(f"{len(self.labels)} labels for {c.shape[1]} columns")
        if not np.issubdtype(c.dtype, np.integer):
            raise ValueError("counts must be integers")
        if (c < 0).any():
            r, col = np.argwhere(c < 0)[0]
            raise ValueError(f"negative count at row {r + 1}, column {col + 1}")
        object.__setattr__(self, "counts", np.ascontiguousarray(c, dtype=np.int64))

    @property
    def n_documents(self) -> int:
        return self.counts.shape[0]


@dataclass(frozen=True)
class PcaBasis:
    """Eigendecomposition of the column correlation matrix.

    eigenvectors has one orthonormal column per retained source column;
    columns (0-based indices into the source matrix) records which source
    columns survived the zero-variance drop. column_means/column_sds are the
    standardization parameters of the retained columns, sd with divisor
    rows - 1. relative_frequencies records whether rows were normalized to
    proportions before standardizing.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    column_means: np.ndarray
    column_sds: np.ndarray
    columns: tuple[int, ...]
    relative_frequencies: bool

    @property
    def n_components(self) -> int:
        return self.eigenvalues.size


def load_count_matrix(source) -> CountMatrix:
    """Parse CSV with a header row of labels; errors carry row/column positions."""
    with open(source, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{source}: empty file")
    labels = tuple(cell.strip() for cell in rows[0])
    data = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(labels):
            raise ValueError(f"{source}: row {r} has {len(row)} fields, expected {len(labels)}")
        parsed = []
        for c, cell in enumerate(row, start=1):
            text = cell.strip()
            try:
                value = int(text)
            except ValueError:
                raise ValueError(
                    f"{source}: non-integer count {text!r} at row {r}, column {c}"
                ) from None
            if value < 0:
                raise ValueError(f"{source}: negative count at row {r}, column {c}")
            parsed.append(value)
        data.append(parsed)
    if not data:
        raise ValueError(f"{source}: no data rows")
    return CountMatrix(labels=labels, counts=np.asarray(data, dtype=np.int64))


def _as_values(matrix, relative_frequencies: bool) -> np.ndarray:
    counts = matrix.counts if isinstance(matrix, CountMatrix) else np.asarray(matrix)
    x = counts.astype(np.float64)
    if relative_frequencies:
        totals = x.sum(axis=1)
        if (totals == 0).any():
            row = int(np.flatnonzero(totals == 0)[0]) + 1
            raise ValueError(f"row {row} has zero total count; cannot form frequencies")
        x = x / totals[:, None]
    return x


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make each eigenvector's largest-magnitude entry positive (deterministic)."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def correlation_pca(matrix: CountMatrix, relative_frequencies: bool = False) -> PcaBasis:
    """Eigendecomposition of the correlation matrix of the standardized columns.

    Zero-variance columns are dropped with a warning (all-zero categories are
    common in real count data); eigenvalues come back nonincreasing with the
    sign convention applied.
    """
    x = _as_values(matrix, relative_frequencies)
    if x.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    means = x.mean(axis=0)
    sds = x.std(axis=0, ddof=1)
    keep = sds > 0
    if not keep.any():
        raise ValueError("all columns are constant; no correlation structure to analyze")
    if not keep.all():
        dropped = [i + 1 for i in np.flatnonzero(~keep)]
        if isinstance(matrix, CountMatrix):
            names = [matrix.labels[i - 1] for i in dropped]
            warnings.warn(f"dropping constant columns: {', '.join(names)}", stacklevel=2)
        else:
            warnings.warn(f"dropping constant columns at positions {dropped}", stacklevel=2)
    cols = np.flatnonzero(keep)
    z = (x[:, cols] - means[cols]) / sds[cols]
    corr = z.T @ z / (x.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(corr)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)  # eigh roundoff can dip below 0
    eigvecs = _fix_signs(eigvecs[:, order])
    return PcaBasis(
        eigenvalues=eigvals,
        eigenvectors=eigvecs,
        column_means=means[cols],
        column_sds=sds[cols],
        columns=tuple(int(c) for c in cols),
        relative_frequencies=relative_frequencies,
    )


def pc_scores(matrix: CountMatrix, basis: PcaBasis, component_index: int) -> np.ndarray:
    """Project documents onto the 1-based component_index-th principal component."""
    if not 1 <= component_index <= basis.n_components:
        raise ValueError(
            f"component index {component_index} out of range 1..{basis.n_components}"
        )
    x = _as_values(matrix, basis.relative_frequencies)
    z = (x[:, list(basis.columns)] - basis.column_means) / basis.column_sds
    return z @ basis.eigenvectors[:, component_index - 1]
