"""Pytest fixtures for knnn tests."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Ensure knnn is importable (run from project root or knnn/)
_root = Path(__file__).resolve().parent.parent.parent
if str(_root) not in sys.path:
    sys.path.insert(0, str(_root))


@pytest.fixture
def rng():
    """Seeded numpy generator for test data (the library itself never uses it)."""
    return np.random.default_rng(20240607)


@pytest.fixture
def gaussian_train(rng):
    """40 x 3 Gaussian training matrix."""
    from knnn.core.models import FeatureMatrix

    return FeatureMatrix(rng.normal(size=(40, 3)))


@pytest.fixture
def planar_train(rng):
    """30 x 2 training matrix with anisotropic spread."""
    from knnn.core.models import FeatureMatrix

    return FeatureMatrix(rng.normal(size=(30, 2)) * np.array([2.0, 0.5]))


@pytest.fixture
def fitted_model(planar_train):
    """knnn model on the planar fixture (k=3, k_nnn=5)."""
    from knnn.core.models import ScoreConfig
    from knnn.scoring import build_model

    return build_model(planar_train, ScoreConfig(method="knnn", k=3, k_nnn=5), threads=1)


@pytest.fixture
def benchmark():
    """Factory: benchmark(shape, seed=0, n_train=250, n_test=1000, noise=None)."""
    from knnn.core.models import SynthSpec
    from knnn.synth.benchmark import make_benchmark

    def _make(shape: str, seed: int = 0, n_train: int = 250, n_test: int = 1000, noise=None):
        spec = SynthSpec(shape=shape, n_points=2 * n_train, noise=noise, seed=seed)
        return make_benchmark(spec, n_train, n_test)

    return _make


@pytest.fixture
def write_rows(tmp_path):
    """Write a list of rows (or lines) to a CSV file under tmp_path."""

    def _write(name: str, rows) -> Path:
        p = tmp_path / name
        lines = [",".join(repr(float(v)) for v in row) if not isinstance(row, str) else row for row in rows]
        p.write_text("".join(line + "\n" for line in lines))
        return p

    return _write
