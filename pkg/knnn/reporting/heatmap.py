"""
Scorer heatmaps over a 2-D box, exported as a raw-score CSV and an 8-bit
binary PGM. Row 0 of both is the top of the box (largest y).
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from knnn.core.constants import HEATMAP_MARGIN, DEFAULT_RESOLUTION
from knnn.core.errors import BadConfig, DimensionError
from knnn.core.models import Box, HeatmapGrid, ScoreConfig, TrainedModel, grid_centers
from knnn.scoring import score_batch

logger = logging.getLogger(__name__)


def default_bbox(model: TrainedModel) -> Box:
    return Box.around(model.train.rows).expand(HEATMAP_MARGIN)


def render_heatmap(
    model: TrainedModel,
    config: Optional[ScoreConfig] = None,
    bbox: Optional[Box] = None,
    resolution: tuple[int, int] = DEFAULT_RESOLUTION,
    threads: Optional[int] = None,
) -> HeatmapGrid:
    """
    Score every cell center of a width x height grid over `bbox`.

    Raises:
        DimensionError: model is not 2-D
        BadConfig: degenerate box or non-positive resolution
    """
    if model.dim != 2:
        raise DimensionError(f"Heatmaps need 2-D data, model has D={model.dim}")
    width, height = resolution
    if width < 1 or height < 1:
        raise BadConfig(f"Resolution must be at least 1x1, got {width}x{height}")
    bbox = bbox or default_bbox(model)
    if bbox.dim != 2 or bbox.is_degenerate():
        raise BadConfig(f"Heatmap box {bbox} is degenerate")
    report = score_batch(model, grid_centers(bbox, width, height), config, threads=threads)
    logger.info("Rendered %dx%d heatmap in %.2fs", width, height, report.timings["total"])
    return HeatmapGrid(bbox=bbox, width=width, height=height, values=report.scores.reshape(height, width))


def grid_to_gray(values: np.ndarray) -> np.ndarray:
    """Min-max map to 0..255, half-up rounding; a constant grid is all 0."""
    lo = float(values.min())
    hi = float(values.max())
    if hi <= lo:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = 255.0 * (values - lo) / (hi - lo)
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)


def pgm_bytes(grid: HeatmapGrid) -> bytes:
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + grid_to_gray(grid.values).tobytes()


def write_pgm(grid: HeatmapGrid, path: str | Path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(pgm_bytes(grid))
    return p


def write_heatmap_csv(grid: HeatmapGrid, path: str | Path) -> Path:
    """One grid row per line, top row first, 17 significant digits."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        for row in grid.values:
            fh.write(",".join(format(float(v), ".17g") for v in row))
            fh.write("\n")
    return p


def write_heatmap(grid: HeatmapGrid, prefix: str | Path) -> tuple[Path, Path]:
    """Write <prefix>.csv and <prefix>.pgm."""
    prefix = str(prefix)
    return write_heatmap_csv(grid, prefix + ".csv"), write_pgm(grid, prefix + ".pgm")
