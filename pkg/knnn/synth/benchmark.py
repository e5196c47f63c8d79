"""Train / labeled-test construction for the synthetic evaluation protocol."""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

from knnn.core.constants import NEGATIVES_MARGIN
from knnn.core.errors import BadSpec
from knnn.core.models import Box, FeatureMatrix, LabeledSet, SynthSpec
from knnn.data import split_half
from knnn.synth.prng import derive_seed, permutation
from knnn.synth.shapes import generate, sample_correlation_breaks, sample_negatives

logger = logging.getLogger(__name__)

# Sub-seed streams of one benchmark seed
SPLIT_STREAM = 1
NEGATIVES_STREAM = 2
SHUFFLE_STREAM = 3


def negatives_box(pool: FeatureMatrix, spec: SynthSpec) -> Box:
    """Explicit spec box, else the pool's bounding box widened by the negatives margin."""
    if spec.bbox is not None:
        return spec.bbox
    return Box.around(pool.rows).expand(NEGATIVES_MARGIN)


def make_benchmark(spec: SynthSpec, n_train: int, n_test: int) -> tuple[FeatureMatrix, LabeledSet]:
    """
    Build (train, test) for one shape and seed.

    2 * n_train on-shape points are generated and split in half: one half
    trains, the other joins the test set as normals (label 0). n_test
    anomalies (label 1) are sampled uniformly over the pool's bounding box;
    fig6 anomalies are correlation breaks instead. The test set is
    the shuffled union.
    """
    if n_train < 2:
        raise BadSpec(f"n_train must be >= 2, got {n_train}")
    if n_test < 1:
        raise BadSpec(f"n_test must be >= 1, got {n_test}")

    pool = generate(replace(spec, n_points=2 * n_train))
    train, normals = split_half(pool, derive_seed(spec.seed, SPLIT_STREAM))

    negatives_seed = derive_seed(spec.seed, NEGATIVES_STREAM)
    if spec.shape == "fig6":
        anomalies = sample_correlation_breaks(n_test, negatives_seed)
    else:
        anomalies = sample_negatives(negatives_box(pool, spec), n_test, negatives_seed)

    rows = np.vstack([normals.rows, anomalies.rows])
    labels = np.concatenate([np.zeros(normals.n_rows, dtype=np.int8), np.ones(n_test, dtype=np.int8)])
    order = permutation(rows.shape[0], derive_seed(spec.seed, SHUFFLE_STREAM))
    test = LabeledSet(FeatureMatrix(rows[order]), labels[order])

    logger.info(
        "Benchmark %s seed=%d: train=%d, test=%d (%d normal, %d anomalous)",
        spec.shape, spec.seed, train.n_rows, test.features.n_rows, test.n_negative, test.n_positive,
    )
    return train, test
