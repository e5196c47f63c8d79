"""Seeded synthetic data: PRNG, shape generators and benchmark construction."""

from knnn.synth.prng import Xoshiro256pp, derive_seed, permutation
from knnn.synth.shapes import generate, sample_correlation_breaks, sample_negatives, shape_dim

__all__ = [
    "Xoshiro256pp",
    "derive_seed",
    "permutation",
    "generate",
    "sample_correlation_breaks",
    "sample_negatives",
    "shape_dim",
]
