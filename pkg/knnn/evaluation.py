"""AUROC by the rank-sum identity, with average ranks for tied scores."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from knnn.core.errors import DegenerateLabels, LabelMismatch, NonFiniteValue
from knnn.core.models import RocResult


def auroc(scores, labels) -> RocResult:
    """
    Probability that a random anomalous (label 1) row outscores a random
    normal (label 0) row, ties counted as one half.

    Raises:
        LabelMismatch: lengths differ or a label is not 0/1
        DegenerateLabels: only one class present
    """
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(labels).ravel()
    if s.shape[0] != y.shape[0]:
        raise LabelMismatch(f"{s.shape[0]} scores for {y.shape[0]} labels")
    if not np.all(np.isfinite(s)):
        raise NonFiniteValue("Scores contain NaN or infinite values")
    if not np.all((y == 0) | (y == 1)):
        raise LabelMismatch("Labels must be 0 or 1")
    positive = y == 1
    n_pos = int(np.count_nonzero(positive))
    n_neg = int(y.shape[0] - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels(f"AUROC needs both classes, got {n_pos} positive and {n_neg} negative")
    ranks = rankdata(s, method="average")
    rank_sum = float(np.sum(ranks[positive]))
    value = (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    return RocResult(auroc=min(1.0, max(0.0, value)), n_pos=n_pos, n_neg=n_neg)
