"""
Feature partitioning: identity split or greedy correlation reordering.

The greedy order keeps feature 0 first. Every later position inside a set
takes the unplaced feature with the highest mean |Pearson| against the last
(up to) two placed features; a position that opens a new set takes the
lowest such mean instead. Ties go to the lowest original index.
"""

from __future__ import annotations

import logging

import numpy as np

from knnn.core.errors import BadWidth
from knnn.core.models import FeatureMatrix, PartitionPlan
from knnn.linalg import abs_correlation_matrix

logger = logging.getLogger(__name__)


def _check_width(dim: int, set_width: int) -> None:
    if set_width < 1 or set_width > dim:
        raise BadWidth(f"Set width L={set_width} must satisfy 1 <= L <= D={dim}")


def identity_plan(dim: int, set_width: int) -> PartitionPlan:
    """Features in original order, split into contiguous sets of width L."""
    _check_width(dim, set_width)
    return PartitionPlan(permutation=np.arange(dim), set_width=set_width)


def greedy_order(corr: np.ndarray, set_width: int) -> np.ndarray:
    """Greedy permutation from a D x D |correlation| matrix."""
    dim = corr.shape[0]
    placed = [0]
    unplaced = list(range(1, dim))
    for position in range(1, dim):
        recent = placed[-2:]
        opens_set = position % set_width == 0
        best = None
        best_score = None
        for j in unplaced:
            score = float(np.mean(corr[j, recent]))
            if best is None or (score < best_score if opens_set else score > best_score):
                best, best_score = j, score
        placed.append(best)
        unplaced.remove(best)
    return np.array(placed, dtype=np.int64)


def correlation_plan(train: FeatureMatrix, set_width: int) -> PartitionPlan:
    """
    Reorder features so mutually correlated ones share a set.

    Raises:
        BadWidth: L outside 1..D
        DegenerateSample: fewer than 2 training rows
    """
    _check_width(train.dim, set_width)
    corr = abs_correlation_matrix(train.rows)
    order = greedy_order(corr, set_width)
    plan = PartitionPlan(permutation=order, set_width=set_width)
    logger.debug("Correlation plan (L=%d): %s", set_width, plan.sets())
    return plan


def make_plan(train: FeatureMatrix, set_width: int, reorder: bool) -> PartitionPlan:
    if reorder and train.dim > 1:
        return correlation_plan(train, set_width)
    return identity_plan(train.dim, set_width)
