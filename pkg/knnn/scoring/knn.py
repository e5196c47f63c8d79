"""Baseline: sum of Euclidean distances to the k nearest training rows."""

from __future__ import annotations

import numpy as np

from knnn.core.models import ScoreConfig, TrainedModel
from knnn.scoring.base import BlockScores, as_queries, neighbors, single


def knn_block(model: TrainedModel, queries: np.ndarray, config: ScoreConfig) -> BlockScores:
    ids, dists = neighbors(model, queries, config.k)
    return BlockScores(scores=dists.sum(axis=1), neighbor_ids=ids, contributions=dists)


def score_knn(model: TrainedModel, query, k: int) -> float:
    q = as_queries(model, query)
    return single(knn_block(model, q, ScoreConfig(method="knn", k=k)))
