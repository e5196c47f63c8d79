"""Scorer registry, model construction and batch scoring."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, Optional

import numpy as np

from knnn.core import config as settings
from knnn.core.errors import BadConfig, NotEnoughNeighbors, PlanMismatch
from knnn.core.models import FeatureMatrix, QueryBreakdown, ScoreConfig, ScoreReport, TrainedModel
from knnn.index import fit
from knnn.partition import make_plan
from knnn.scoring.base import BlockScorer, BlockScores, as_queries
from knnn.scoring.global_norm import global_block, global_eigenpacks, score_global
from knnn.scoring.knn import knn_block, score_knn
from knnn.scoring.local_norm import local_block, score_local
from knnn.scoring.nnn import knnn_block, score_knnn

logger = logging.getLogger(__name__)

SCORERS: Dict[str, BlockScorer] = {
    "knn": knn_block,
    "global": global_block,
    "local": local_block,
    "knnn": knnn_block,
}

# Queries per block handed to one worker
SCORE_BLOCK = 256


def resolve_method(config: ScoreConfig) -> str:
    """Scorer name actually run for `config` (knnn with k_nnn=0 runs knn)."""
    return config.effective_method


def build_model(
    train: FeatureMatrix,
    config: Optional[ScoreConfig] = None,
    threads: Optional[int] = None,
    floor_ratio: Optional[float] = None,
) -> TrainedModel:
    """
    Plan the partition and precompute whatever the configured method needs.

    knnn fits per-point packs, global computes the training-wide packs, knn
    and local need nothing beyond the plan.
    """
    config = (config or ScoreConfig()).validate()
    floor_ratio = settings.EIGEN_FLOOR if floor_ratio is None else floor_ratio
    set_width = config.set_width_for(train.dim)
    n = config.eigen_count_for(train.dim)
    if n > set_width:
        raise BadConfig(f"n={n} exceeds the set width L={set_width}")
    if config.k > train.n_rows:
        raise NotEnoughNeighbors(requested=config.k, available=train.n_rows)

    plan = make_plan(train, set_width, config.reorder)
    method = resolve_method(config)
    if method == "knnn":
        model = fit(train, plan, config.k_nnn, n, threads=threads, floor_ratio=floor_ratio)
        return replace(model, config=config)
    global_packs = global_eigenpacks(train, plan, n, floor_ratio) if method == "global" else ()
    return TrainedModel(
        train=train,
        plan=plan,
        k_nnn=0,
        n=n,
        global_packs=global_packs,
        config=config,
        floor_ratio=floor_ratio,
    )


def ensure_method_state(
    model: TrainedModel,
    config: ScoreConfig,
    threads: Optional[int] = None,
) -> TrainedModel:
    """
    Same model, with any state `config` needs and the model lacks added.

    The partition plan is kept; a config asking for a different L raises.
    """
    config = config.validate()
    if config.L is not None and config.L != model.plan.set_width:
        raise PlanMismatch(f"Config L={config.L} differs from the model's L={model.plan.set_width}")
    n = config.n if config.n is not None else model.plan.set_width
    method = resolve_method(config)
    if method == "knnn" and (not model.has_packs or model.k_nnn != config.k_nnn or model.n < n):
        fitted = fit(model.train, model.plan, config.k_nnn, n, threads=threads, floor_ratio=model.floor_ratio)
        return replace(model, k_nnn=fitted.k_nnn, n=fitted.n, packs=fitted.packs)
    if method == "global" and (not model.has_global or any(p.n < min(n, p.dim) for p in model.global_packs)):
        packs = global_eigenpacks(model.train, model.plan, n, model.floor_ratio)
        return replace(model, global_packs=packs)
    return model


def _score_block(model: TrainedModel, queries: np.ndarray, config: ScoreConfig) -> BlockScores:
    return SCORERS[resolve_method(config)](model, queries, config)


def score_batch(
    model: TrainedModel,
    queries,
    config: Optional[ScoreConfig] = None,
    threads: Optional[int] = None,
    with_breakdown: bool = False,
) -> ScoreReport:
    """
    Score every query row, in order.

    Queries are cut into fixed-size blocks scored on a thread pool; a
    query's score depends only on the query and the model.
    """
    config = (config or model.config or ScoreConfig()).validate()
    q = as_queries(model, queries)
    model = ensure_method_state(model, config, threads=threads)
    workers = settings.resolve_threads(threads)

    t0 = time.perf_counter()
    spans = [(s, min(q.shape[0], s + SCORE_BLOCK)) for s in range(0, q.shape[0], SCORE_BLOCK)]

    def run(span):
        return _score_block(model, q[span[0]:span[1]], config)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            blocks = list(ex.map(run, spans))
    else:
        blocks = [run(span) for span in spans]

    scores = np.concatenate([b.scores for b in blocks])
    elapsed = time.perf_counter() - t0
    breakdown = None
    if with_breakdown:
        breakdown = [
            QueryBreakdown(neighbor_ids=ids, contributions=contrib)
            for b in blocks
            for ids, contrib in zip(b.neighbor_ids, b.contributions)
        ]
    logger.info("Scored %d queries with %s in %.3fs", q.shape[0], config.label(), elapsed)
    return ScoreReport(
        scores=scores,
        config=config,
        breakdown=breakdown,
        timings={"total": elapsed, "per_query": elapsed / q.shape[0]},
    )


__all__ = [
    "SCORERS",
    "build_model",
    "ensure_method_state",
    "resolve_method",
    "score_batch",
    "score_global",
    "score_knn",
    "score_knnn",
    "score_local",
]
