"""Shared plumbing for the scorers: query validation, neighbors, projections."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from knnn.core.errors import BadConfig, EmptyInput, NonFiniteValue, PlanMismatch
from knnn.core.models import ScoreConfig, TrainedModel
from knnn.index import knn_batch


@dataclass(frozen=True, eq=False)
class BlockScores:
    """Scores of a block of queries with their neighbors and partial sums."""
    scores: np.ndarray
    neighbor_ids: np.ndarray
    contributions: np.ndarray


BlockScorer = Callable[[TrainedModel, np.ndarray, ScoreConfig], BlockScores]


def as_queries(model: TrainedModel, queries) -> np.ndarray:
    """(Q, D) float array of queries, checked against the model's plan."""
    q = np.asarray(getattr(queries, "rows", queries), dtype=np.float64)
    if q.ndim == 1:
        q = q[None, :]
    if q.ndim != 2 or q.shape[1] != model.plan.dim:
        raise PlanMismatch(
            f"Query dimension {q.shape[-1] if q.ndim else 0} does not match model dimension {model.plan.dim}"
        )
    if q.shape[0] == 0:
        raise EmptyInput("No queries to score")
    if not np.all(np.isfinite(q)):
        raise NonFiniteValue("Queries contain NaN or infinite values")
    return q


def check_plan(model: TrainedModel, config: ScoreConfig) -> None:
    if config.L is not None and config.L != model.plan.set_width:
        raise PlanMismatch(f"Config set width L={config.L} differs from the model's L={model.plan.set_width}")


def neighbors(model: TrainedModel, queries: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Full-vector neighbors; distances are permutation invariant so original rows serve."""
    return knn_batch(model.train.rows, queries, k)


def permuted_differences(model: TrainedModel, queries: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """(Q, k, D) differences f - f_i in permuted coordinates."""
    return model.plan.apply(queries)[:, None, :] - model.permuted_rows[ids]


def normalized_l1(projections: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Σ_j |projection_j| / √e_j over the trailing eigen axis."""
    return np.sum(np.abs(projections) / np.sqrt(values), axis=-1)


def eigen_count(model: TrainedModel, config: ScoreConfig) -> int:
    n = config.n if config.n is not None else model.plan.set_width
    if n > model.plan.set_width:
        raise BadConfig(f"n={n} exceeds the set width L={model.plan.set_width}")
    return n


def single(block: BlockScores) -> float:
    return float(block.scores[0])
