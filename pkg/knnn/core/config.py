"""
Runtime settings and benchmark presets.

Settings are read from environment variables with sensible defaults; CLI
flags override them. Presets bundle the synthetic evaluation protocols.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional

from knnn.core.constants import DEFAULT_N_TEST, DEFAULT_N_TRAIN


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    return int(raw) if raw else default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "").strip()
    return float(raw) if raw else default


# Workers for fit / batch scoring / heatmaps (0 or unset = all cores)
THREADS = _env_int("KNNN_THREADS", 0) or (os.cpu_count() or 1)

# Relative eigenvalue floor: e -> max(e, ratio * largest eigenvalue of the pack)
EIGEN_FLOOR = _env_float("KNNN_EIGEN_FLOOR", 1e-6)

# Symmetric eigensolver limits
MAX_EIG_DIM = _env_int("KNNN_MAX_EIG_DIM", 64)
JACOBI_MAX_SWEEPS = _env_int("KNNN_JACOBI_SWEEPS", 100)
JACOBI_TOLERANCE = 1e-12

# Memory budget for one block of a distance scan or batched eigen solve
CHUNK_BYTES = _env_int("KNNN_CHUNK_BYTES", 64 * 1024 * 1024)


def resolve_threads(threads: Optional[int]) -> int:
    """CLI value wins; anything < 1 falls back to the environment default."""
    if threads is None or threads < 1:
        return THREADS
    return threads


@dataclass
class BenchmarkPreset:
    """Preset configuration for a synthetic evaluation protocol."""
    name: str
    description: str
    shapes: List[str]
    seeds: int
    n_train: int
    n_test: int
    grid: str
    noise: Optional[float] = None


FOUR_METHOD_GRID = "knn:k=3; global:k=3; local:k=3; knnn:k=3,k_nnn=25"

PRESETS: Dict[str, BenchmarkPreset] = {
    "planar": BenchmarkPreset(
        name="planar",
        description="Moons / circles / Swiss roll, all four methods, 5 seeds",
        shapes=["moons", "circles", "swissroll"],
        seeds=5,
        n_train=DEFAULT_N_TRAIN,
        n_test=DEFAULT_N_TEST,
        grid=FOUR_METHOD_GRID,
    ),
    "neighbor-counts": BenchmarkPreset(
        name="neighbor-counts",
        description="Three lines, neighbors vs neighbors-of-neighbors grid",
        shapes=["threelines"],
        seeds=5,
        n_train=DEFAULT_N_TRAIN,
        n_test=DEFAULT_N_TEST,
        grid=(
            "knnn:k=1,k_nnn=75; knnn:k=3,k_nnn=20|25|75; knnn:k=4,k_nnn=20; "
            "knnn:k=5,k_nnn=15; knnn:k=10,k_nnn=5; knn:k=60|75|80"
        ),
    ),
    "quick": BenchmarkPreset(
        name="quick",
        description="Single-seed moons smoke run (~seconds)",
        shapes=["moons"],
        seeds=1,
        n_train=DEFAULT_N_TRAIN,
        n_test=1000,
        grid=FOUR_METHOD_GRID,
    ),
}


def get_preset(preset_name: str) -> Optional[BenchmarkPreset]:
    """Get a preset configuration by name."""
    return PRESETS.get(preset_name.lower())


def list_presets() -> List[BenchmarkPreset]:
    """List all available presets."""
    return list(PRESETS.values())
