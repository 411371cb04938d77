"""Count-matrix loading, correlation PCA, and component scores."""

from __future__ import annotations

import numpy as np
import pytest

from npwbs.stylometry import (
    CountMatrix,
    correlation_pca,
    load_count_matrix,
    pc_scores,
)


def write_csv(tmp_path, text, name="m.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def power_iteration_eigh(corr, iters=20_000, tol=1e-13):
    """Independent eigensolver: power iteration with deflation."""
    c = corr.copy()
    d = c.shape[0]
    rng = np.random.default_rng(99)
    values, vectors = [], []
    for _ in range(d):
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(iters):
            w = c @ v
            norm = np.linalg.norm(w)
            if norm == 0.0:
                lam = 0.0
                break
            w /= norm
            if np.linalg.norm(w - v) < tol or np.linalg.norm(w + v) < tol:
                v = w
                lam = float(v @ c @ v)
                break
            v = w
        else:
            lam = float(v @ c @ v)
        values.append(lam)
        vectors.append(v)
        c = c - lam * np.outer(v, v)
    order = np.argsort(values)[::-1]
    vals = np.array(values)[order]
    vecs = np.column_stack([vectors[i] for i in order])
    # same sign convention as the implementation under test
    idx = np.argmax(np.abs(vecs), axis=0)
    vecs *= np.sign(vecs[idx, np.arange(vecs.shape[1])])
    return vals, vecs


class TestLoad:
    def test_basic(self, tmp_path):
        m = load_count_matrix(write_csv(tmp_path, "a,b\n1,2\n3,4\n"))
        assert m.labels == ("a", "b")
        assert m.counts.tolist() == [[1, 2], [3, 4]]

    def test_negative_entry(self, tmp_path):
        path = write_csv(tmp_path, "a,b\n1,2\n-1,4\n")
        with pytest.raises(ValueError, match="row 3, column 1"):
            load_count_matrix(path)

    def test_non_integer_entry(self, tmp_path):
        path = write_csv(tmp_path, "a,b\n1,2\n2.5,4\n")
        with pytest.raises(ValueError, match="row 3, column 1"):
            load_count_matrix(path)

    def test_ragged_row(self, tmp_path):
        path = write_csv(tmp_path, "a,b\n1,2\n3\n")
        with pytest.raises(ValueError, match="row 3"):
            load_count_matrix(path)

    def test_empty_file(self, tmp_path):
        with pytest.raises(ValueError):
            load_count_matrix(write_csv(tmp_path, ""))

    def test_too_small(self, tmp_path):
        with pytest.raises(ValueError):
            load_count_matrix(write_csv(tmp_path, "a,b\n1,2\n"))


class TestCorrelationPca:
    def test_rank_one_pair(self):
        # two perfectly correlated columns: eigenvalues (2, 0)
        m = CountMatrix(labels=("a", "b"), counts=np.array([[1, 2], [2, 4], [3, 6], [4, 8]]))
        basis = correlation_pca(m)
        assert basis.eigenvalues == pytest.approx([2.0, 0.0], abs=1e-12)

    def test_orthogonal_columns(self):
        # sample correlation exactly zero: identity correlation, eigenvalues all 1
        m = CountMatrix(labels=("a", "b"), counts=np.array([[0, 0], [2, 0], [0, 2], [2, 2]]))
        basis = correlation_pca(m)
        assert basis.eigenvalues == pytest.approx([1.0, 1.0], abs=1e-12)

    def test_eigenvalue_sum_is_column_count(self):
        rng = np.random.default_rng(12)
        m = CountMatrix(
            labels=tuple("abcde"), counts=rng.integers(0, 30, size=(9, 5)).astype(np.int64)
        )
        basis = correlation_pca(m)
        assert basis.eigenvalues.sum() == pytest.approx(5.0, abs=1e-8)

    def test_orthonormal_and_reconstructs(self):
        rng = np.random.default_rng(13)
        m = CountMatrix(
            labels=tuple("abcd"), counts=rng.integers(0, 50, size=(8, 4)).astype(np.int64)
        )
        basis = correlation_pca(m)
        v = basis.eigenvectors
        assert np.abs(v.T @ v - np.eye(4)).max() < 1e-8
        x = m.counts.astype(float)
        z = (x - x.mean(0)) / x.std(0, ddof=1)
        corr = z.T @ z / 7
        recon = v @ np.diag(basis.eigenvalues) @ v.T
        assert np.abs(recon - corr).max() < 1e-8

    def test_sign_convention(self):
        rng = np.random.default_rng(14)
        m = CountMatrix(
            labels=tuple("abcd"), counts=rng.integers(0, 50, size=(10, 4)).astype(np.int64)
        )
        v = correlation_pca(m).eigenvectors
        for j in range(v.shape[1]):
            assert v[np.argmax(np.abs(v[:, j])), j] > 0

    def test_matches_power_iteration_oracle(self):
        rng = np.random.default_rng(15)
        m = CountMatrix(
            labels=tuple("abcd"), counts=rng.integers(0, 40, size=(6, 4)).astype(np.int64)
        )
        basis = correlation_pca(m)
        x = m.counts.astype(float)
        z = (x - x.mean(0)) / x.std(0, ddof=1)
        vals, vecs = power_iteration_eigh(z.T @ z / 5)
        assert np.abs(basis.eigenvalues - vals).max() < 1e-6
        assert np.abs(basis.eigenvectors - vecs).max() < 1e-6

    def test_zero_variance_column_dropped(self):
        counts = np.array([[1, 7, 2], [3, 7, 5], [2, 7, 9], [4, 7, 1]])
        m = CountMatrix(labels=("a", "const", "c"), counts=counts)
        with pytest.warns(UserWarning, match="const"):
            basis = correlation_pca(m)
        assert basis.columns == (0, 2)
        assert basis.n_components == 2

    def test_all_constant_errors(self):
        m = CountMatrix(labels=("a", "b"), counts=np.full((4, 2), 3))
        with pytest.raises(ValueError, match="constant"):
            correlation_pca(m)

    def test_relative_frequencies(self):
        counts = np.array([[2, 2], [30, 10], [5, 15], [40, 40]])
        m = CountMatrix(labels=("a", "b"), counts=counts)
        basis = correlation_pca(m, relative_frequencies=True)
        # row proportions of a two-column matrix are perfectly anti-correlated
        assert basis.eigenvalues == pytest.approx([2.0, 0.0], abs=1e-12)
        assert basis.relative_frequencies

    def test_relative_frequencies_zero_row(self):
        m = CountMatrix(labels=("a", "b"), counts=np.array([[1, 2], [0, 0], [3, 4]]))
        with pytest.raises(ValueError, match="row 2"):
            correlation_pca(m, relative_frequencies=True)


class TestScores:
    def test_rank_one_scores_track_shared_column(self):
        m = CountMatrix(labels=("a", "b"), counts=np.array([[1, 2], [2, 4], [3, 6], [4, 8]]))
        basis = correlation_pca(m)
        scores = pc_scores(m, basis, 1)
        z = (np.array([1, 2, 3, 4]) - 2.5) / np.std([1, 2, 3, 4], ddof=1)
        ratio = scores / z
        assert np.allclose(ratio, ratio[0])

    def test_score_variance_equals_eigenvalue(self):
        rng = np.random.default_rng(16)
        m = CountMatrix(
            labels=tuple("abcde"), counts=rng.integers(0, 60, size=(12, 5)).astype(np.int64)
        )
        basis = correlation_pca(m)
        for j in (1, 2, 5):
            s = pc_scores(m, basis, j)
            assert s.var(ddof=1) == pytest.approx(basis.eigenvalues[j - 1], abs=1e-8)

    def test_cross_component_scores_uncorrelated(self):
        rng = np.random.default_rng(17)
        m = CountMatrix(
            labels=tuple("abcd"), counts=rng.integers(0, 60, size=(10, 4)).astype(np.int64)
        )
        basis = correlation_pca(m)
        scores = np.column_stack([pc_scores(m, basis, j) for j in (1, 2, 3)])
        c = np.corrcoef(scores.T)
        off = c[~np.eye(3, dtype=bool)]
        assert np.abs(off).max() < 1e-8

    def test_component_out_of_range(self):
        m = CountMatrix(labels=("a", "b"), counts=np.array([[1, 2], [2, 1], [3, 5], [4, 2]]))
        basis = correlation_pca(m)
        with pytest.raises(ValueError):
            pc_scores(m, basis, 3)
        with pytest.raises(ValueError):
            pc_scores(m, basis, 0)

    def test_row_order_preserved(self):
        m = CountMatrix(labels=("a", "b"), counts=np.array([[9, 1], [1, 9], [9, 1], [1, 9]]))
        basis = correlation_pca(m)
        s = pc_scores(m, basis, 1)
        assert s[0] == pytest.approx(s[2]) and s[1] == pytest.approx(s[3])
        assert s[0] != pytest.approx(s[1])
