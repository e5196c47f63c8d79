"""Data models shared across the fit / score / evaluate pipeline."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from knnn.core.constants import (
    DEFAULT_K,
    DEFAULT_K_NNN,
    DEFAULT_SET_WIDTH,
    METHODS,
)
from knnn.core.errors import (
    BadConfig,
    BadWidth,
    DimensionMismatch,
    EmptyInput,
    LabelMismatch,
    NonFiniteValue,
)


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True, order="C")
    arr.setflags(write=False)
    return arr


# ============================================================================
# Features
# ============================================================================

@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """
    N feature vectors of dimension D, immutable once built.

    Row identities are dense 0-based integers in row order.
    """
    rows: np.ndarray

    def __post_init__(self):
        rows = _frozen_array(self.rows)
        if rows.ndim != 2:
            raise DimensionMismatch(f"Expected a 2-D array of rows, got shape {rows.shape}")
        if rows.shape[0] == 0:
            raise EmptyInput("Feature matrix has no rows")
        if rows.shape[1] == 0:
            raise DimensionMismatch("Feature vectors must have dimension >= 1")
        if not np.all(np.isfinite(rows)):
            raise NonFiniteValue("Feature matrix contains NaN or infinite entries")
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.n_rows)

    def take(self, indices: Sequence[int] | np.ndarray) -> FeatureMatrix:
        """New matrix of the selected rows, re-identified 0..len-1."""
        return FeatureMatrix(self.rows[np.asarray(indices, dtype=np.int64)])

    def __len__(self) -> int:
        return self.n_rows


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """Feature rows with binary labels (0 = normal, 1 = anomalous)."""
    features: FeatureMatrix
    labels: np.ndarray

    def __post_init__(self):
        labels = _frozen_array(self.labels, dtype=np.int8).ravel()
        if labels.shape[0] != self.features.n_rows:
            raise LabelMismatch(
                f"{labels.shape[0]} labels for {self.features.n_rows} feature rows"
            )
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise LabelMismatch("Labels must be 0 (normal) or 1 (anomalous)")
        object.__setattr__(self, "labels", labels)

    @property
    def n_positive(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def n_negative(self) -> int:
        return int(np.count_nonzero(self.labels == 0))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; `lo` and `hi` have one entry per dimension."""
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def is_degenerate(self) -> bool:
        if len(self.lo) != len(self.hi) or not self.lo:
            return True
        return any(not (math.isfinite(l) and math.isfinite(h)) or h <= l for l, h in zip(self.lo, self.hi))

    def expand(self, margin: float) -> Box:
        """Widen every side by `margin` times that axis' extent."""
        pad = [margin * e for e in self.extent]
        return Box(
            lo=tuple(l - p for l, p in zip(self.lo, pad)),
            hi=tuple(h + p for h, p in zip(self.hi, pad)),
        )

    @classmethod
    def around(cls, rows: np.ndarray) -> Box:
        return cls(lo=tuple(float(v) for v in rows.min(axis=0)), hi=tuple(float(v) for v in rows.max(axis=0)))


# ============================================================================
# Linear algebra
# ============================================================================

@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Square matrix symmetrized on construction as (A + Aᵀ) / 2."""
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"Expected a non-empty square matrix, got shape {a.shape}")
        object.__setattr__(self, "entries", _frozen_array((a + a.T) / 2.0))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True, eq=False)
class EigenPack:
    """
    Leading eigenpairs of one covariance matrix.

    Attributes:
        values: n eigenvalues, sorted non-increasing (floored when stored in a model)
        vectors: L x n matrix whose columns are unit eigenvectors matching `values`
    """
    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values).ravel()
        vectors = _frozen_array(self.vectors)
        if vectors.ndim != 2 or vectors.shape[1] != values.shape[0]:
            raise DimensionMismatch(
                f"{values.shape[0]} eigenvalues do not match vectors of shape {vectors.shape}"
            )
        if values.shape[0] > vectors.shape[0]:
            raise DimensionMismatch("An eigen pack cannot hold more pairs than its dimension")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[0])


@dataclass(frozen=True, eq=False)
class SetPacks:
    """
    Eigen packs of every training point for one feature set.

    values has shape (N, n_s); vectors has shape (N, w_s, n_s).
    """
    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        object.__setattr__(self, "vectors", _frozen_array(self.vectors))

    @property
    def n_points(self) -> int:
        return int(self.values.shape[0])

    @property
    def n(self) -> int:
        return int(self.values.shape[1])

    @property
    def width(self) -> int:
        return int(self.vectors.shape[1])


# ============================================================================
# Partitioning
# ============================================================================

@dataclass(frozen=True, eq=False)
class PartitionPlan:
    """
    Feature permutation plus a split of the permuted features into sets.

    All sets have width `set_width` except possibly the last one.
    """
    permutation: np.ndarray
    set_width: int

    def __post_init__(self):
        perm = _frozen_array(self.permutation, dtype=np.int64).ravel()
        d = perm.shape[0]
        if d < 1:
            raise DimensionMismatch("A partition plan needs at least one feature")
        if not np.array_equal(np.sort(perm), np.arange(d)):
            raise BadConfig("Plan permutation is not a bijection on 0..D-1")
        if self.set_width < 1 or self.set_width > d:
            raise BadWidth(f"Set width L={self.set_width} must satisfy 1 <= L <= D={d}")
        object.__setattr__(self, "permutation", perm)

    @property
    def dim(self) -> int:
        return int(self.permutation.shape[0])

    @property
    def set_count(self) -> int:
        return -(-self.dim // self.set_width)

    @property
    def boundaries(self) -> tuple[int, ...]:
        return tuple(range(0, self.dim, self.set_width))

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(min(self.set_width, self.dim - b) for b in self.boundaries)

    def set_slices(self) -> list[slice]:
        return [slice(b, b + w) for b, w in zip(self.boundaries, self.widths)]

    def sets(self) -> list[tuple[int, ...]]:
        """Original feature indices of every set, in permuted order."""
        return [tuple(int(i) for i in self.permutation[s]) for s in self.set_slices()]

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.empty_like(self.permutation)
        inv[self.permutation] = np.arange(self.dim)
        inv.setflags(write=False)
        return inv

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Permute the trailing feature axis of a vector or matrix."""
        return np.asarray(x)[..., self.permutation]

    def invert(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x)[..., self.inverse]

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.permutation.astype("<i8").tobytes())
        h.update(int(self.set_width).to_bytes(8, "little"))
        return h.hexdigest()


# ============================================================================
# Neighbors, configs, models
# ============================================================================

@dataclass(frozen=True, eq=False)
class NeighborQueryResult:
    neighbor_ids: np.ndarray
    distances: np.ndarray

    @property
    def k(self) -> int:
        return int(self.neighbor_ids.shape[0])


@dataclass(frozen=True)
class ScoreConfig:
    """
    Scorer selection and hyperparameters.

    Attributes:
        method: one of knn, global, local, knnn
        k: query-neighbor count
        k_nnn: neighbors-of-neighbors count (knnn only; 0 is an alias for knn)
        n: eigenpairs per set (None = keep all, i.e. the set width)
        L: set width (None = min(5, D))
        reorder: correlation-driven feature reordering instead of identity order
    """
    method: str = "knnn"
    k: int = DEFAULT_K
    k_nnn: int = DEFAULT_K_NNN
    n: Optional[int] = None
    L: Optional[int] = None
    reorder: bool = True

    def validate(self) -> ScoreConfig:
        if self.method not in METHODS:
            raise BadConfig(f"Unknown method {self.method!r}; expected one of {', '.join(METHODS)}")
        if self.k < 1:
            raise BadConfig(f"k must be >= 1, got {self.k}")
        if self.method == "knnn" and self.k_nnn != 0 and self.k_nnn < 2:
            raise BadConfig(f"k_nnn must be >= 2 (or 0 for plain k-NN), got {self.k_nnn}")
        if self.n is not None and self.n < 1:
            raise BadConfig(f"n must be >= 1, got {self.n}")
        if self.L is not None and self.L < 1:
            raise BadWidth(f"L must be >= 1, got {self.L}")
        return self

    @property
    def effective_method(self) -> str:
        if self.method == "knnn" and self.k_nnn == 0:
            return "knn"
        return self.method

    def set_width_for(self, dim: int) -> int:
        return self.L if self.L is not None else min(DEFAULT_SET_WIDTH, dim)

    def eigen_count_for(self, dim: int) -> int:
        return self.n if self.n is not None else self.set_width_for(dim)

    def label(self) -> str:
        parts = [f"k={self.k}"]
        if self.method == "knnn":
            parts.append(f"k_nnn={self.k_nnn}")
        if self.L is not None:
            parts.append(f"L={self.L}")
        if self.n is not None:
            parts.append(f"n={self.n}")
        if not self.reorder:
            parts.append("no-reorder")
        return f"{self.method}({', '.join(parts)})"


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """
    Training features plus the frozen plan and precomputed eigen statistics.

    Attributes:
        train: training features in original feature order
        plan: feature partition used for every per-set computation
        k_nnn: neighbors-of-neighbors used for `packs` (0 when not fitted)
        n: eigenpairs requested per set
        packs: one SetPacks per feature set (empty unless fitted for knnn)
        global_packs: one EigenPack per feature set over the whole training set
        config: scorer configuration the model was built for
        floor_ratio: relative eigenvalue floor applied to stored eigenvalues
    """
    train: FeatureMatrix
    plan: PartitionPlan
    k_nnn: int
    n: int
    packs: tuple[SetPacks, ...] = ()
    global_packs: tuple[EigenPack, ...] = ()
    config: Optional[ScoreConfig] = None
    floor_ratio: float = 1e-6

    def __post_init__(self):
        if self.plan.dim != self.train.dim:
            raise DimensionMismatch(
                f"Plan dimension {self.plan.dim} does not match training dimension {self.train.dim}"
            )

    @property
    def n_rows(self) -> int:
        return self.train.n_rows

    @property
    def dim(self) -> int:
        return self.train.dim

    @property
    def has_packs(self) -> bool:
        return bool(self.packs)

    @property
    def has_global(self) -> bool:
        return bool(self.global_packs)

    @cached_property
    def permuted_rows(self) -> np.ndarray:
        rows = np.ascontiguousarray(self.plan.apply(self.train.rows))
        rows.setflags(write=False)
        return rows


# ============================================================================
# Scores and evaluation results
# ============================================================================

@dataclass(frozen=True, eq=False)
class QueryBreakdown:
    """Neighbor ids with their per-neighbor (and per-set) contributions."""
    neighbor_ids: np.ndarray
    contributions: np.ndarray

    def to_dict(self) -> dict:
        return {
            "neighbor_ids": [int(i) for i in self.neighbor_ids],
            "contributions": np.asarray(self.contributions).tolist(),
        }


@dataclass(eq=False)
class ScoreReport:
    scores: np.ndarray
    config: ScoreConfig
    breakdown: Optional[List[QueryBreakdown]] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def n_queries(self) -> int:
        return int(self.scores.shape[0])


@dataclass(frozen=True)
class RocResult:
    auroc: float
    n_pos: int
    n_neg: int


@dataclass(frozen=True)
class SweepRow:
    config: ScoreConfig
    roc: RocResult

    @property
    def auroc(self) -> float:
        return self.roc.auroc


@dataclass
class BenchmarkRow:
    shape: str
    config: ScoreConfig
    aurocs: List[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.aurocs)) if self.aurocs else float("nan")

    @property
    def std(self) -> float:
        return float(np.std(self.aurocs)) if self.aurocs else float("nan")


# ============================================================================
# Synthetic data and heatmaps
# ============================================================================

@dataclass(frozen=True)
class SynthSpec:
    """
    Seeded synthetic dataset description.

    `noise` None selects the per-shape default; `bbox` None derives the
    negatives box from the generated points.
    """
    shape: str
    n_points: int
    noise: Optional[float] = None
    seed: int = 0
    bbox: Optional[Box] = None


@dataclass(frozen=True, eq=False)
class HeatmapGrid:
    """Scores on a width x height grid, row 0 at the top (largest y)."""
    bbox: Box
    width: int
    height: int
    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.shape != (self.height, self.width):
            raise DimensionMismatch(
                f"Grid values have shape {values.shape}, expected {(self.height, self.width)}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("Heatmap grid contains non-finite scores")
        object.__setattr__(self, "values", values)

    def cell_centers(self) -> np.ndarray:
        return grid_centers(self.bbox, self.width, self.height)


def grid_centers(bbox: Box, width: int, height: int) -> np.ndarray:
    """(height * width, 2) cell centers in row-major order, top row first."""
    (xmin, ymin), (xmax, ymax) = bbox.lo, bbox.hi
    dx = (xmax - xmin) / width
    dy = (ymax - ymin) / height
    xs = xmin + (np.arange(width) + 0.5) * dx
    ys = ymax - (np.arange(height) + 0.5) * dy
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])
