"""
Neighbors-of-neighbors scoring.

A query is compared to each of its k nearest training rows in that row's
own frame: the per-set difference is projected on the row's stored
eigenvectors and every projection is divided by √eigenvalue.
"""

from __future__ import annotations

import numpy as np

from knnn.core.errors import BadConfig
from knnn.core.models import QueryBreakdown, ScoreConfig, TrainedModel
from knnn.scoring.base import (
    BlockScores,
    as_queries,
    check_plan,
    eigen_count,
    neighbors,
    normalized_l1,
    permuted_differences,
)


def knnn_block(model: TrainedModel, queries: np.ndarray, config: ScoreConfig) -> BlockScores:
    if not model.has_packs:
        raise BadConfig("Model holds no neighbor-of-neighbor packs; build it with method knnn")
    if config.k_nnn != model.k_nnn:
        raise BadConfig(f"Config k_nnn={config.k_nnn} differs from the model's k_nnn={model.k_nnn}")
    check_plan(model, config)
    n = eigen_count(model, config) if config.n is not None else model.n
    if n > model.n:
        raise BadConfig(f"Config asks for n={n} eigenpairs, model stores {model.n}")

    ids, _ = neighbors(model, queries, config.k)
    diff = permuted_differences(model, queries, ids)
    parts = []
    for sl, packs in zip(model.plan.set_slices(), model.packs):
        n_s = min(n, packs.width)
        vectors = packs.vectors[ids][..., :n_s]
        values = packs.values[ids][..., :n_s]
        proj = np.einsum("qkw,qkwn->qkn", diff[:, :, sl], vectors)
        parts.append(normalized_l1(proj, values))
    contributions = np.stack(parts, axis=-1)
    return BlockScores(scores=contributions.sum(axis=(1, 2)), neighbor_ids=ids, contributions=contributions)


def score_knnn(model: TrainedModel, query, config: ScoreConfig) -> tuple[float, QueryBreakdown]:
    """
    Score one query; the breakdown holds the k x S per-neighbor, per-set sums.

    Raises:
        PlanMismatch: query dimension differs from the model
        NotEnoughNeighbors: config.k exceeds the training size
    """
    q = as_queries(model, query)
    block = knnn_block(model, q, config.validate())
    breakdown = QueryBreakdown(neighbor_ids=block.neighbor_ids[0], contributions=block.contributions[0])
    return float(block.scores[0]), breakdown
