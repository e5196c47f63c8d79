"""JSON report output."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from knnn.core.models import BenchmarkRow, QueryBreakdown, ScoreConfig, SweepRow


def _config_dict(config: ScoreConfig) -> dict:
    return {
        "method": config.method,
        "effective_method": config.effective_method,
        "k": config.k,
        "k_nnn": config.k_nnn,
        "L": config.L,
        "n": config.n,
        "reorder": config.reorder,
        "label": config.label(),
    }


def _dump(report: dict, path: str | Path, console=None):
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w") as fh:
        json.dump(report, fh, indent=2)
    if console:
        console.print(f"\n[green]JSON report written → {p}[/green]")


def write_sweep_json(rows: Sequence[SweepRow], path: str | Path, console=None):
    best = max(rows, key=lambda r: r.auroc) if rows else None
    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "summary": {
            "configs": len(rows),
            "best": best.config.label() if best else None,
            "best_auroc": best.auroc if best else None,
        },
        "rows": [
            {
                "config": _config_dict(r.config),
                "auroc": r.auroc,
                "n_pos": r.roc.n_pos,
                "n_neg": r.roc.n_neg,
            }
            for r in rows
        ],
    }
    _dump(report, path, console)


def write_benchmark_json(rows: Sequence[BenchmarkRow], path: str | Path, console=None):
    best: dict[str, BenchmarkRow] = {}
    for r in rows:
        if r.shape not in best or r.mean > best[r.shape].mean:
            best[r.shape] = r
    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "summary": {
            shape: {"best": r.config.label(), "mean_auroc": r.mean}
            for shape, r in best.items()
        },
        "rows": [
            {
                "shape": r.shape,
                "config": _config_dict(r.config),
                "aurocs": r.aurocs,
                "mean": r.mean,
                "std": r.std,
            }
            for r in rows
        ],
    }
    _dump(report, path, console)


def write_breakdown_json(breakdown: Sequence[QueryBreakdown], config: ScoreConfig, path: str | Path, console=None):
    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "config": _config_dict(config),
        "queries": [b.to_dict() for b in breakdown],
    }
    _dump(report, path, console)
