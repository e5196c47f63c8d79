"""
Exact Euclidean neighbor search and the neighbors-of-neighbors fit.

Searches are linear scans. Distances are computed from explicit coordinate
differences (never the |a|² + |b|² - 2ab expansion) so they agree with a
brute-force loop to the last bit. Ties are broken by ascending row id.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from knnn.core import config
from knnn.core.errors import BadConfig, DimensionMismatch, NotEnoughNeighbors
from knnn.core.models import FeatureMatrix, NeighborQueryResult, PartitionPlan, SetPacks, TrainedModel
from knnn.linalg import covariance_batch, leading_eigenpacks

logger = logging.getLogger(__name__)


# ============================================================================
# Neighbor search
# ============================================================================

def _distance_block(train_rows: np.ndarray, queries: np.ndarray) -> np.ndarray:
    diff = queries[:, None, :] - train_rows[None, :, :]
    return np.sqrt(np.einsum("qnd,qnd->qn", diff, diff))


def _select_row(dist: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k smallest of one distance row, ties by lower id."""
    if k < dist.shape[0]:
        kth = np.partition(dist, k - 1)[k - 1]
        candidates = np.flatnonzero(dist <= kth)
    else:
        candidates = np.arange(dist.shape[0])
    order = np.lexsort((candidates, dist[candidates]))[:k]
    ids = candidates[order]
    return ids, dist[ids]


def knn_batch(
    train_rows: np.ndarray,
    queries: np.ndarray,
    k: int,
    exclude: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    k nearest training rows for every query row.

    Args:
        train_rows: (N, D) training matrix
        queries: (Q, D) query matrix
        k: neighbors per query
        exclude: optional (Q,) row ids, one per query, never returned for it

    Returns:
        ids (Q, k) and distances (Q, k), each row sorted by (distance, id)
    """
    n, d = train_rows.shape
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if queries.shape[1] != d:
        raise DimensionMismatch(f"Query dimension {queries.shape[1]} does not match training dimension {d}")
    available = n - (1 if exclude is not None else 0)
    if k < 1:
        raise BadConfig(f"k must be >= 1, got {k}")
    if available < k:
        raise NotEnoughNeighbors(requested=k, available=available)

    q = queries.shape[0]
    ids = np.empty((q, k), dtype=np.int64)
    dists = np.empty((q, k), dtype=np.float64)
    block = max(1, config.CHUNK_BYTES // max(1, n * d * 8))
    for start in range(0, q, block):
        stop = min(q, start + block)
        dist = _distance_block(train_rows, queries[start:stop])
        if exclude is not None:
            dist[np.arange(stop - start), exclude[start:stop]] = np.inf
        for row in range(stop - start):
            ids[start + row], dists[start + row] = _select_row(dist[row], k)
    return ids, dists


def knn_query(
    train: FeatureMatrix,
    query,
    k: int,
    exclude_id: Optional[int] = None,
) -> NeighborQueryResult:
    """
    Exact k nearest training rows of one query vector.

    Raises:
        NotEnoughNeighbors: fewer than k eligible rows
        DimensionMismatch: query dimension differs from the training set
    """
    vec = np.asarray(query, dtype=np.float64).ravel()
    exclude = None
    if exclude_id is not None:
        if not 0 <= exclude_id < train.n_rows:
            raise BadConfig(f"exclude_id {exclude_id} is not a row id of a {train.n_rows}-row matrix")
        exclude = np.array([exclude_id], dtype=np.int64)
    ids, dists = knn_batch(train.rows, vec[None, :], k, exclude=exclude)
    return NeighborQueryResult(neighbor_ids=ids[0], distances=dists[0])


# ============================================================================
# Per-set eigen statistics
# ============================================================================

def neighbor_eigenpacks(
    samples: np.ndarray,
    plan: PartitionPlan,
    n: int,
    floor_ratio: Optional[float] = None,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """
    Floored top-n eigenpairs of every sample group, one entry per feature set.

    Args:
        samples: (B, m, D) groups of m permuted feature vectors
        plan: partition defining the sets
        n: eigenpairs kept per set (clipped to the set width)

    Returns:
        for each set s, values (B, n_s) and vectors (B, w_s, n_s)
    """
    b, m, d = samples.shape
    width = plan.set_width
    full = d // width
    out: list[tuple[np.ndarray, np.ndarray]] = []
    if full:
        stacked = samples[:, :, : full * width].reshape(b, m, full, width)
        stacked = stacked.transpose(0, 2, 1, 3).reshape(b * full, m, width)
        values, vectors = leading_eigenpacks(covariance_batch(stacked), n, floor_ratio)
        n_s = values.shape[1]
        values = values.reshape(b, full, n_s)
        vectors = vectors.reshape(b, full, width, n_s)
        out.extend((values[:, s], vectors[:, s]) for s in range(full))
    if d % width:
        tail = samples[:, :, full * width:]
        out.append(leading_eigenpacks(covariance_batch(tail), n, floor_ratio))
    return out


def _fit_block(
    train_rows: np.ndarray,
    permuted: np.ndarray,
    plan: PartitionPlan,
    start: int,
    stop: int,
    k_nnn: int,
    n: int,
    floor_ratio: float,
) -> list[tuple[np.ndarray, np.ndarray]]:
    anchors = np.arange(start, stop)
    ids, _ = knn_batch(train_rows, train_rows[start:stop], k_nnn, exclude=anchors)
    return neighbor_eigenpacks(permuted[ids], plan, n, floor_ratio)


def fit(
    train: FeatureMatrix,
    plan: PartitionPlan,
    k_nnn: int,
    n: int,
    threads: Optional[int] = None,
    floor_ratio: Optional[float] = None,
) -> TrainedModel:
    """
    Precompute every training point's per-set eigen packs from its own
    k_nnn nearest neighbors (the point itself excluded).

    Raises:
        BadConfig: k_nnn < 2, or n outside 1..L
        NotEnoughNeighbors: N - 1 < k_nnn
        DimensionMismatch: plan and training dimensions differ
    """
    if plan.dim != train.dim:
        raise DimensionMismatch(f"Plan dimension {plan.dim} does not match training dimension {train.dim}")
    if k_nnn < 2:
        raise BadConfig(f"k_nnn must be >= 2, got {k_nnn}")
    if train.n_rows - 1 < k_nnn:
        raise NotEnoughNeighbors(requested=k_nnn, available=train.n_rows - 1)
    if n < 1 or n > plan.set_width:
        raise BadConfig(f"n must satisfy 1 <= n <= L={plan.set_width}, got {n}")
    floor_ratio = config.EIGEN_FLOOR if floor_ratio is None else floor_ratio
    workers = config.resolve_threads(threads)

    t0 = time.perf_counter()
    permuted = np.ascontiguousarray(plan.apply(train.rows))
    per_point = k_nnn * train.dim * 8 * 4
    block = max(1, min(train.n_rows, config.CHUNK_BYTES // per_point))
    spans = [(s, min(train.n_rows, s + block)) for s in range(0, train.n_rows, block)]
    logger.debug("Fitting %d points in %d block(s) on %d worker(s)", train.n_rows, len(spans), workers)

    def run(span):
        return _fit_block(train.rows, permuted, plan, span[0], span[1], k_nnn, n, floor_ratio)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(run, spans))
    else:
        blocks = [run(span) for span in spans]

    packs = tuple(
        SetPacks(
            values=np.concatenate([blk[s][0] for blk in blocks]),
            vectors=np.concatenate([blk[s][1] for blk in blocks]),
        )
        for s in range(plan.set_count)
    )
    elapsed = time.perf_counter() - t0
    logger.info(
        "Fitted %d points x %d set(s) (k_nnn=%d, n=%d) in %.2fs",
        train.n_rows, plan.set_count, k_nnn, n, elapsed,
    )
    return TrainedModel(train=train, plan=plan, k_nnn=k_nnn, n=n, packs=packs, floor_ratio=floor_ratio)
