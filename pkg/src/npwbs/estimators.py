"""Estimator-style wrappers over the detection and PCA pipelines.

Both classes follow the scikit-learn protocol: constructor stores parameters
untouched, fit validates and computes, fitted attributes carry a trailing
underscore, and get_params/set_params work for cloning and grid search.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .segment import WbsConfig, detect
from .stylometry import CountMatrix, correlation_pca, pc_scores
from .thresholds import ThresholdTable, resolve_table
from .validation import check_sequence

__all__ = ["WildBinarySegmentation", "CorrelationPCA"]


class WildBinarySegmentation(BaseEstimator):
    """Change-point detector with a fit/predict interface.

    Parameters mirror the functional API: m_intervals random intervals per
    tested segment, significance level alpha, seed for the interval draws,
    include_full_segment to always test the whole segment too, prune to
    re-test candidates against their neighbors. thresholds may be a
    ThresholdTable, a path to a saved table, or None for the bundled table.
    """

    def __init__(
        self,
        m_intervals: int = 1000,
        alpha: float = 0.05,
        seed: int = 0,
        include_full_segment: bool = True,
        prune: bool = True,
        thresholds=None,
    ):
        self.m_intervals = m_intervals
        self.alpha = alpha
        self.seed = seed
        self.include_full_segment = include_full_segment
        self.prune = prune
        self.thresholds = thresholds

    def _table(self) -> ThresholdTable:
        if isinstance(self.thresholds, ThresholdTable):
            return self.thresholds
        return resolve_table(self.thresholds)

    def fit(self, X, y=None):
        """Detect change points in the sequence X (shape (n,) or (n, 1))."""
        seq = check_sequence(X, "X")
        config = WbsConfig(
            m_intervals=self.m_intervals,
            alpha=self.alpha,
            seed=self.seed,
            include_full_segment=self.include_full_segment,
            prune=self.prune,
        )
        result = detect(seq, config, self._table())
        self.n_samples_in_ = seq.size
        self.change_points_ = np.asarray(result.change_points, dtype=np.int64)
        self.k_hat_ = result.k_hat
        return self

    def predict(self, X=None) -> np.ndarray:
        """Segment label (0-based) for each observation of the fitted sequence.

        X is accepted for interface compatibility but must match the fitted
        length when given; labels are determined by the fitted change points.
        """
        check_is_fitted(self, "change_points_")
        if X is not None and check_sequence(X, "X").size != self.n_samples_in_:
            raise ValueError("X length differs from the fitted sequence")
        labels = np.zeros(self.n_samples_in_, dtype=np.int64)
        for tau in self.change_points_:
            labels[tau:] += 1  # tau is 1-based; y_tau ends its segment
        return labels

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict()


class CorrelationPCA(BaseEstimator, TransformerMixin):
    """Correlation-matrix PCA of count data with a fit/transform interface.

    n_components limits the transform output (None keeps all retained
    components); relative_frequencies normalizes each row to proportions
    before standardizing.
    """

    def __init__(self, n_components: int | None = None, relative_frequencies: bool = False):
        self.n_components = n_components
        self.relative_frequencies = relative_frequencies

    def fit(self, X, y=None):
        matrix = self._as_matrix(X)
        basis = correlation_pca(matrix, relative_frequencies=self.relative_frequencies)
        if self.n_components is not None and not 1 <= self.n_components <= basis.n_components:
            raise ValueError(
                f"n_components={self.n_components} out of range 1..{basis.n_components}"
            )
        self.basis_ = basis
        self.eigenvalues_ = basis.eigenvalues
        # Rows are components, matching the scikit-learn layout.
        self.components_ = basis.eigenvectors.T
        self.n_features_in_ = int(matrix.counts.shape[1])
        return self

    @staticmethod
    def _as_matrix(X) -> CountMatrix:
        if isinstance(X, CountMatrix):
            return X
        arr = np.asarray(X)
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.array_equal(arr, rounded):
                raise ValueError("count matrix entries must be integers")
            arr = rounded.astype(np.int64)
        labels = tuple(f"c{j + 1}" for j in range(arr.shape[1]))
        return CountMatrix(labels=labels, counts=arr)

    def transform(self, X) -> np.ndarray:
        """Scores of each document on the leading components, one column each."""
        check_is_fitted(self, "basis_")
        matrix = self._as_matrix(X)
        if matrix.counts.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {matrix.counts.shape[1]} columns, expected {self.n_features_in_}"
            )
        k = self.n_components or self.basis_.n_components
        cols = [pc_scores(matrix, self.basis_, j) for j in range(1, k + 1)]
        return np.column_stack(cols)
