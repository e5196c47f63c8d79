"""
Dense linear-algebra kernels: covariance, symmetric eigendecomposition and
Pearson correlation.

The eigensolver is a cyclic Jacobi iteration vectorized over a stack of
matrices, so a whole fit (thousands of tiny per-set covariances) runs as a
few hundred numpy operations. Every matrix in a stack tracks its own
convergence, which makes its result independent of the rest of the stack.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from knnn.core import config
from knnn.core.errors import (
    DegenerateSample,
    DimensionError,
    DimensionMismatch,
    NoConvergence,
)
from knnn.core.models import EigenPack, SymmetricMatrix

logger = logging.getLogger(__name__)


# ============================================================================
# Covariance
# ============================================================================

def covariance_batch(samples: np.ndarray) -> np.ndarray:
    """
    Unbiased covariance of every sample stack.

    Args:
        samples: array of shape (B, m, L) holding B groups of m vectors

    Returns:
        (B, L, L) array of symmetric covariance matrices
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 3:
        raise DegenerateSample(f"Expected (groups, samples, dim) array, got shape {x.shape}")
    m = x.shape[1]
    if m < 2:
        raise DegenerateSample(f"Covariance needs at least 2 samples, got {m}")
    centered = x - x.mean(axis=1, keepdims=True)
    cov = np.einsum("bmi,bmj->bij", centered, centered) / (m - 1)
    return (cov + np.swapaxes(cov, 1, 2)) / 2.0


def covariance(samples) -> SymmetricMatrix:
    """
    Unbiased sample covariance (1/(m-1)) Σ (x-μ)(x-μ)ᵀ.

    Rows are put in lexicographic order first, so the result does not depend
    on the order the samples were given in.
    """
    try:
        x = np.array(samples, dtype=np.float64)
    except ValueError as e:
        raise DegenerateSample(f"Samples do not share one dimension: {e}") from e
    if x.ndim != 2:
        raise DegenerateSample(f"Samples do not share one dimension (shape {x.shape})")
    if x.shape[0] < 2:
        raise DegenerateSample(f"Covariance needs at least 2 samples, got {x.shape[0]}")
    order = np.lexsort(x.T[::-1])
    return SymmetricMatrix(covariance_batch(x[order][None])[0])


# ============================================================================
# Symmetric eigendecomposition (cyclic Jacobi)
# ============================================================================

def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[:, p, q] in place for every matrix of the stack."""
    apq = a[:, p, q]
    live = apq != 0.0
    if not live.any():
        return
    theta = (a[:, q, q] - a[:, p, p]) / (2.0 * np.where(live, apq, 1.0))
    with np.errstate(over="ignore"):
        t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(live, t, 0.0)
    c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
    s = t[:, None] * c

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = c * col_p - s * col_q
    a[:, :, q] = s * col_p + c * col_q

    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = c * row_p - s * row_q
    a[:, q, :] = s * row_p + c * row_q

    a[:, p, q] = np.where(live, 0.0, a[:, p, q])
    a[:, q, p] = np.where(live, 0.0, a[:, q, p])

    vec_p = v[:, :, p].copy()
    vec_q = v[:, :, q].copy()
    v[:, :, p] = c * vec_p - s * vec_q
    v[:, :, q] = s * vec_p + c * vec_q


def eig_sym_batch(
    matrices: np.ndarray,
    max_sweeps: Optional[int] = None,
    tol: Optional[float] = None,
    max_dim: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    All eigenpairs of a stack of symmetric matrices.

    Args:
        matrices: (B, L, L) symmetric matrices
        max_sweeps: Jacobi sweep budget (default from config)
        tol: convergence threshold relative to each matrix's Frobenius norm
        max_dim: largest accepted L (default from config)

    Returns:
        values (B, L) sorted descending and vectors (B, L, L) whose columns
        match `values`; each column's largest-magnitude component is positive

    Raises:
        DimensionError: if L exceeds the configured limit
        NoConvergence: if some matrix is still off-diagonal after max_sweeps
    """
    max_sweeps = config.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    tol = config.JACOBI_TOLERANCE if tol is None else tol
    max_dim = config.MAX_EIG_DIM if max_dim is None else max_dim

    a = np.array(matrices, dtype=np.float64, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[1] < 1:
        raise DimensionMismatch(f"Expected a stack of square matrices, got shape {a.shape}")
    batch, dim, _ = a.shape
    if dim > max_dim:
        raise DimensionError(f"Eigensolver limited to dim <= {max_dim}, got {dim}")
    v = np.broadcast_to(np.eye(dim), a.shape).copy()
    if batch == 0:
        return np.zeros((0, dim)), v

    threshold = tol * np.sqrt(np.einsum("bij,bij->b", a, a))
    upper = np.triu_indices(dim, 1)

    for sweep in range(max_sweeps + 1):
        off = np.sqrt(2.0 * np.sum(a[:, upper[0], upper[1]] ** 2, axis=1))
        active = np.flatnonzero(off > threshold)
        if active.size == 0:
            break
        if sweep == max_sweeps:
            worst = float(np.max(off[active] / np.maximum(threshold[active], np.finfo(float).tiny)))
            raise NoConvergence(
                f"Jacobi did not converge for {active.size} matrices in {max_sweeps} sweeps",
                sweeps=max_sweeps,
                residual=worst,
            )
        sub_a = a[active]
        sub_v = v[active]
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                _rotate(sub_a, sub_v, p, q)
        a[active] = sub_a
        v[active] = sub_v

    values = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(-values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(v, order[:, None, :], axis=2)

    lead = np.argmax(np.abs(vectors), axis=1)
    lead_component = np.take_along_axis(vectors, lead[:, None, :], axis=1)[:, 0, :]
    vectors *= np.where(lead_component < 0.0, -1.0, 1.0)[:, None, :]
    return values, vectors


def eig_sym(matrix: SymmetricMatrix, max_dim: Optional[int] = None) -> EigenPack:
    """All eigenpairs of one symmetric matrix, eigenvalues descending."""
    values, vectors = eig_sym_batch(matrix.entries[None], max_dim=max_dim)
    return EigenPack(values[0], vectors[0])


def floor_eigenvalues(values: np.ndarray, ratio: Optional[float] = None) -> np.ndarray:
    """
    Clamp eigenvalues at ratio * (largest eigenvalue of the pack, or 1).

    `values` is sorted descending along its last axis.
    """
    ratio = config.EIGEN_FLOOR if ratio is None else ratio
    values = np.asarray(values, dtype=np.float64)
    largest = values[..., :1]
    eps = ratio * np.where(largest > 0.0, largest, 1.0)
    return np.maximum(values, eps)


def leading_eigenpacks(
    matrices: np.ndarray,
    n: int,
    floor_ratio: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Top-n floored eigenpairs of a covariance stack.

    Returns values (B, n) and vectors (B, L, n).
    """
    values, vectors = eig_sym_batch(matrices)
    n = min(n, values.shape[1])
    return floor_eigenvalues(values, floor_ratio)[:, :n], vectors[:, :, :n]


# ============================================================================
# Correlation
# ============================================================================

def pearson(col_a, col_b) -> float:
    """
    Pearson correlation of two columns; 0.0 when either column is constant.
    """
    a = np.asarray(col_a, dtype=np.float64).ravel()
    b = np.asarray(col_b, dtype=np.float64).ravel()
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f"Column lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[0] < 2:
        raise DegenerateSample(f"Correlation needs at least 2 samples, got {a.shape[0]}")
    ca = a - a.mean()
    cb = b - b.mean()
    saa = float(np.sum(ca * ca))
    sbb = float(np.sum(cb * cb))
    if saa == 0.0 or sbb == 0.0:
        return 0.0
    r = float(np.sum(ca * cb)) / float(np.sqrt(saa * sbb))
    return min(1.0, max(-1.0, r))


def abs_correlation_matrix(x: np.ndarray) -> np.ndarray:
    """
    |Pearson| between every pair of columns of an (m, D) sample matrix.

    Constant columns correlate 0 with everything (themselves included).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatch(f"Expected an (samples, features) matrix, got shape {x.shape}")
    if x.shape[0] < 2:
        raise DegenerateSample(f"Correlation needs at least 2 samples, got {x.shape[0]}")
    centered = x - x.mean(axis=0)
    ss = np.sum(centered * centered, axis=0)
    cross = centered.T @ centered
    cross = (cross + cross.T) / 2.0
    denom = np.sqrt(np.outer(ss, ss))
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(denom > 0.0, cross / denom, 0.0)
    return np.minimum(np.abs(corr), 1.0)
