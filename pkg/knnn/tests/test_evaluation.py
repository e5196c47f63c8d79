"""Tests for AUROC."""

import numpy as np
import pytest

from knnn.core.errors import DegenerateLabels, LabelMismatch, NonFiniteValue
from knnn.evaluation import auroc


def test_perfect_separation():
    """Every anomaly above every normal gives 1.0."""
    roc = auroc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])
    assert roc.auroc == 1.0
    assert (roc.n_pos, roc.n_neg) == (2, 2)


def test_inverted_separation():
    """Every anomaly below every normal gives 0.0."""
    assert auroc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]).auroc == 0.0


def test_interleaved():
    """Anomalies at ranks 1 and 4 of four: one win, one loss each."""
    assert auroc([3.0, 1.0, 2.0, 4.0], [0, 1, 0, 1]).auroc == 0.5


def test_all_tied_is_half():
    """Constant scores count every pair as half."""
    assert auroc(np.ones(6), [0, 1, 0, 1, 1, 0]).auroc == 0.5


def test_partial_ties():
    """A tied anomaly/normal pair counts one half."""
    # pairs: (1 vs 0.5) win, (1 vs 1) half, (0.2 vs 0.5) loss, (0.2 vs 1) loss
    assert auroc([0.5, 1.0, 1.0, 0.2], [0, 0, 1, 1]).auroc == pytest.approx(1.5 / 4)


def test_matches_pairwise_count(rng):
    """Rank identity agrees with the direct pairwise definition."""
    scores = rng.integers(0, 5, size=40).astype(float)
    labels = rng.integers(0, 2, size=40)
    labels[:2] = [0, 1]
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    assert auroc(scores, labels).auroc == pytest.approx(wins / (pos.size * neg.size), abs=1e-12)


def test_monotone_transform_invariant(rng):
    """A strictly increasing transform of the scores keeps the AUROC."""
    scores = rng.normal(size=50)
    labels = (rng.random(50) > 0.5).astype(int)
    labels[:2] = [0, 1]
    assert auroc(np.exp(3.0 * scores), labels).auroc == auroc(scores, labels).auroc


def test_single_class_rejected():
    """Only one class present is an error."""
    with pytest.raises(DegenerateLabels, match="both classes"):
        auroc([0.1, 0.2], [1, 1])


def test_length_mismatch():
    """Scores and labels must align."""
    with pytest.raises(LabelMismatch, match="3 scores for 2 labels"):
        auroc([0.1, 0.2, 0.3], [0, 1])


def test_bad_label_value():
    """Labels other than 0/1 are rejected."""
    with pytest.raises(LabelMismatch):
        auroc([0.1, 0.2], [0, 2])


def test_nan_score_rejected():
    """NaN scores are rejected."""
    with pytest.raises(NonFiniteValue):
        auroc([0.1, float("nan")], [0, 1])


def test_matches_pairwise_count_random_instances(rng):
    """100 random instances of up to 200 rows agree with the pairwise count."""
    for _ in range(100):
        size = int(rng.integers(2, 201))
        scores = rng.integers(0, 20, size=size).astype(float) / 4.0
        labels = rng.integers(0, 2, size=size)
        labels[:2] = [0, 1]
        pos = scores[labels == 1]
        neg = scores[labels == 0]
        wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
        assert abs(auroc(scores, labels).auroc - wins / (pos.size * neg.size)) <= 1e-12


def test_negated_scores_complement(rng):
    """Negating the scores turns the AUROC into its complement."""
    scores = np.round(rng.normal(size=120), 1)
    labels = rng.integers(0, 2, size=120)
    labels[:2] = [0, 1]
    assert auroc(-scores, labels).auroc == pytest.approx(1.0 - auroc(scores, labels).auroc, abs=1e-12)
