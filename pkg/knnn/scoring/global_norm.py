"""
Global normalization: differences to the k nearest neighbors projected on
the eigenvectors of the whole training set's covariance, one pack per set.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from knnn.core.errors import BadConfig
from knnn.core.models import EigenPack, FeatureMatrix, PartitionPlan, ScoreConfig, TrainedModel
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

logger = logging.getLogger(__name__)


def global_eigenpacks(
    train: FeatureMatrix,
    plan: PartitionPlan,
    n: int,
    floor_ratio: Optional[float] = None,
) -> tuple[EigenPack, ...]:
    """
    Floored top-n eigenpairs of the training covariance of every feature set.

    Raises:
        DegenerateSample: fewer than 2 training rows
    """
    permuted = plan.apply(train.rows)[None, :, :]
    packs = tuple(
        EigenPack(values[0], vectors[0])
        for values, vectors in neighbor_eigenpacks(permuted, plan, n, floor_ratio)
    )
    logger.debug("Global eigen packs for %d set(s), n=%d", len(packs), n)
    return packs


def _packs_for(model: TrainedModel, n: int) -> tuple[EigenPack, ...]:
    if model.has_global and all(p.n >= min(n, p.dim) for p in model.global_packs):
        return model.global_packs
    return global_eigenpacks(model.train, model.plan, n, model.floor_ratio)


def global_block(model: TrainedModel, queries: np.ndarray, config: ScoreConfig) -> BlockScores:
    check_plan(model, config)
    n = eigen_count(model, config)
    packs = _packs_for(model, n)
    if len(packs) != model.plan.set_count:
        raise BadConfig(f"Model holds {len(packs)} global packs for {model.plan.set_count} sets")
    ids, _ = neighbors(model, queries, config.k)
    diff = permuted_differences(model, queries, ids)
    parts = []
    for sl, pack in zip(model.plan.set_slices(), packs):
        n_s = min(n, pack.dim)
        proj = np.einsum("qkw,wn->qkn", diff[:, :, sl], pack.vectors[:, :n_s])
        parts.append(normalized_l1(proj, pack.values[:n_s]))
    contributions = np.stack(parts, axis=-1)
    return BlockScores(scores=contributions.sum(axis=(1, 2)), neighbor_ids=ids, contributions=contributions)


def score_global(model: TrainedModel, query, k: int, n: Optional[int] = None) -> float:
    q = as_queries(model, query)
    config = ScoreConfig(method="global", k=k, n=n, L=model.plan.set_width)
    return single(global_block(model, q, config))
