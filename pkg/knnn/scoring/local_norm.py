"""
Local normalization: eigenpairs are computed at query time from the
query's own k nearest training neighbors.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from knnn.core.errors import DegenerateSample
from knnn.core.models import ScoreConfig, TrainedModel
from knnn.index import neighbor_eigenpacks
from knnn.scoring.base import (
    BlockScores,
    as_queries,
    check_plan,
    eigen_count,
    neighbors,
    normalized_l1,
    permuted_differences,
    single,
)


def local_block(model: TrainedModel, queries: np.ndarray, config: ScoreConfig) -> BlockScores:
    if config.k < 2:
        raise DegenerateSample(f"Local normalization needs k >= 2 neighbors for a covariance, got k={config.k}")
    check_plan(model, config)
    n = eigen_count(model, config)
    ids, _ = neighbors(model, queries, config.k)
    samples = model.permuted_rows[ids]
    diff = permuted_differences(model, queries, ids)
    parts = []
    for sl, (values, vectors) in zip(model.plan.set_slices(), neighbor_eigenpacks(samples, model.plan, n, model.floor_ratio)):
        proj = np.einsum("qkw,qwn->qkn", diff[:, :, sl], vectors)
        parts.append(normalized_l1(proj, values[:, None, :]))
    contributions = np.stack(parts, axis=-1)
    return BlockScores(scores=contributions.sum(axis=(1, 2)), neighbor_ids=ids, contributions=contributions)


def score_local(model: TrainedModel, query, k: int, n: Optional[int] = None) -> float:
    q = as_queries(model, query)
    config = ScoreConfig(method="local", k=k, n=n, L=model.plan.set_width)
    return single(local_block(model, q, config))
