"""Tests for covariance, the Jacobi eigensolver and correlation."""

import numpy as np
import pytest

from knnn.core.errors import DegenerateSample, DimensionError, DimensionMismatch, NoConvergence
from knnn.core.models import SymmetricMatrix
from knnn.linalg import (
    abs_correlation_matrix,
    covariance,
    covariance_batch,
    eig_sym,
    eig_sym_batch,
    floor_eigenvalues,
    leading_eigenpacks,
    pearson,
)


def test_covariance_two_points():
    """Two points on the x-axis give variance only along x."""
    cov = covariance([[0.0, 0.0], [2.0, 0.0]])
    np.testing.assert_array_equal(cov.entries, [[2.0, 0.0], [0.0, 0.0]])


def test_covariance_matches_numpy(rng):
    """Unbiased estimate agrees with np.cov."""
    x = rng.normal(size=(25, 4))
    np.testing.assert_allclose(covariance(x).entries, np.cov(x, rowvar=False), atol=1e-12)


def test_covariance_order_invariant(rng):
    """Shuffling the samples gives a bit-identical matrix."""
    x = rng.normal(size=(17, 3))
    shuffled = x[rng.permutation(17)]
    np.testing.assert_array_equal(covariance(x).entries, covariance(shuffled).entries)


def test_covariance_single_sample():
    """One sample is not enough."""
    with pytest.raises(DegenerateSample, match="at least 2"):
        covariance([[1.0, 2.0]])


def test_covariance_ragged_samples():
    """Samples of different dimension are rejected."""
    with pytest.raises(DegenerateSample):
        covariance([[1.0, 2.0], [1.0]])


def test_covariance_batch_shape(rng):
    """A stack of groups yields a stack of symmetric matrices."""
    cov = covariance_batch(rng.normal(size=(6, 10, 3)))
    assert cov.shape == (6, 3, 3)
    np.testing.assert_array_equal(cov, np.swapaxes(cov, 1, 2))


def test_eig_diagonal():
    """A diagonal matrix returns its diagonal, sorted descending, with unit axes."""
    pack = eig_sym(SymmetricMatrix(np.diag([1.0, 3.0, 2.0])))
    np.testing.assert_array_equal(pack.values, [3.0, 2.0, 1.0])
    np.testing.assert_array_equal(np.abs(pack.vectors), np.eye(3)[:, [1, 2, 0]])


def test_eig_reconstruction_random(rng):
    """V diag(e) Vᵀ reproduces 1000 random symmetric matrices of dim <= 16."""
    for dim in range(1, 17):
        count = 63 if dim > 1 else 55
        a = rng.normal(size=(count, dim, dim))
        a = (a + np.swapaxes(a, 1, 2)) / 2.0
        values, vectors = eig_sym_batch(a)
        rebuilt = np.einsum("bij,bj,bkj->bik", vectors, values, vectors)
        assert np.max(np.abs(rebuilt - a)) <= 1e-8
        gram = np.einsum("bij,bik->bjk", vectors, vectors)
        assert np.max(np.abs(gram - np.eye(dim))) <= 1e-9
        assert np.all(np.diff(values, axis=1) <= 0.0)


def test_eig_trace_equals_eigenvalue_sum(rng):
    """The eigenvalues of each matrix sum to its trace."""
    a = rng.normal(size=(50, 6, 6))
    a = (a + np.swapaxes(a, 1, 2)) / 2.0
    values, _ = eig_sym_batch(a)
    np.testing.assert_allclose(values.sum(axis=1), np.trace(a, axis1=1, axis2=2), atol=1e-10)


def test_eig_sign_convention(rng):
    """Each eigenvector's largest-magnitude component is positive."""
    a = rng.normal(size=(20, 5, 5))
    _, vectors = eig_sym_batch(a + np.swapaxes(a, 1, 2))
    lead = np.take_along_axis(vectors, np.argmax(np.abs(vectors), axis=1)[:, None, :], axis=1)
    assert np.all(lead > 0.0)


def test_eig_batch_independent(rng):
    """A matrix decomposes the same alone or inside a larger stack."""
    a = rng.normal(size=(8, 4, 4))
    a = a + np.swapaxes(a, 1, 2)
    alone_values, alone_vectors = eig_sym_batch(a[3:4])
    values, vectors = eig_sym_batch(a)
    np.testing.assert_allclose(values[3], alone_values[0], rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(vectors[3], alone_vectors[0], rtol=1e-13, atol=1e-15)


def test_eig_dimension_limit():
    """Matrices larger than the solver limit are rejected."""
    with pytest.raises(DimensionError, match="dim <= 2"):
        eig_sym_batch(np.zeros((1, 3, 3)), max_dim=2)


def test_eig_no_convergence():
    """An exhausted sweep budget raises with the residual attached."""
    with pytest.raises(NoConvergence) as exc:
        eig_sym_batch(np.array([[[2.0, 1.0], [1.0, 2.0]]]), max_sweeps=0)
    assert exc.value.sweeps == 0
    assert exc.value.residual > 1.0


def test_eig_non_square():
    """Only stacks of square matrices are accepted."""
    with pytest.raises(DimensionMismatch):
        eig_sym_batch(np.zeros((2, 3, 2)))


def test_floor_relative():
    """Eigenvalues are clamped at ratio * largest."""
    floored = floor_eigenvalues(np.array([4.0, 0.0, -1.0]), ratio=1e-6)
    np.testing.assert_array_equal(floored, [4.0, 4e-6, 4e-6])


def test_floor_all_zero():
    """An all-zero pack floors at the ratio itself."""
    np.testing.assert_array_equal(floor_eigenvalues(np.zeros(3), ratio=1e-6), [1e-6] * 3)


def test_leading_eigenpacks_keeps_top_n(rng):
    """Top-n pairs are kept and floored."""
    x = rng.normal(size=(3, 12, 4))
    values, vectors = leading_eigenpacks(covariance_batch(x), 2, floor_ratio=1e-6)
    assert values.shape == (3, 2)
    assert vectors.shape == (3, 4, 2)
    full, _ = eig_sym_batch(covariance_batch(x))
    np.testing.assert_array_equal(values, full[:, :2])


def test_pearson_signed():
    """Perfect positive and negative correlation."""
    a = np.arange(10.0)
    assert pearson(a, 2 * a + 1) == pytest.approx(1.0)
    assert pearson(a, -a) == pytest.approx(-1.0)


def test_pearson_symmetric(rng):
    """Swapping the columns leaves the correlation unchanged."""
    a = rng.normal(size=30)
    b = 0.4 * a + rng.normal(size=30)
    assert pearson(a, b) == pearson(b, a)
    assert -1.0 <= pearson(a, b) <= 1.0


def test_pearson_constant_column():
    """A constant column correlates 0."""
    assert pearson(np.ones(5), np.arange(5.0)) == 0.0


def test_pearson_errors():
    """Length mismatch and too-short columns are rejected."""
    with pytest.raises(DimensionMismatch):
        pearson([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateSample):
        pearson([1.0], [2.0])


def test_abs_correlation_matches_numpy(rng):
    """|corr| agrees with np.corrcoef and zeroes constant columns."""
    x = rng.normal(size=(50, 4))
    x[:, 1] = 3.0
    corr = abs_correlation_matrix(x)
    expected = np.abs(np.corrcoef(x[:, [0, 2, 3]], rowvar=False))
    np.testing.assert_allclose(corr[np.ix_([0, 2, 3], [0, 2, 3])], expected, atol=1e-12)
    assert np.all(corr[1] == 0.0)
    assert np.all(corr[:, 1] == 0.0)
