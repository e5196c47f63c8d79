"""CSV tables for sweeps and benchmarks."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Optional, Sequence

from knnn.core.constants import SWEEP_CSV_HEADER
from knnn.core.models import BenchmarkRow, ScoreConfig, SweepRow

BENCHMARK_CSV_HEADER = ("shape", "method", "k", "k_nnn", "L", "n", "reorder", "mean_auroc", "std_auroc", "seeds")


def config_fields(config: ScoreConfig, dim: int) -> list:
    """method, k, k_nnn, L, n, reorder with defaults resolved against `dim`."""
    method = config.effective_method
    return [
        method,
        config.k,
        config.k_nnn if method == "knnn" else 0,
        config.set_width_for(dim),
        config.eigen_count_for(dim),
        1 if config.reorder else 0,
    ]


def sweep_csv(rows: Sequence[SweepRow], dim: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        writer.writerow(config_fields(row.config, dim) + [f"{row.auroc:.6f}"])
    return buf.getvalue()


def benchmark_csv(rows: Sequence[BenchmarkRow], dims: dict[str, int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCHMARK_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [row.shape]
            + config_fields(row.config, dims[row.shape])
            + [f"{row.mean:.6f}", f"{row.std:.6f}", len(row.aurocs)]
        )
    return buf.getvalue()


def emit(text: str, path: Optional[str | Path] = None) -> None:
    """Write to `path`, or to stdout when no path is given."""
    if path is None:
        print(text, end="")
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")
