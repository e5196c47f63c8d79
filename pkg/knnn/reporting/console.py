"""Rich console reporting."""

from __future__ import annotations

from typing import Sequence

from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

from knnn.core.constants import METHOD_COLOR
from knnn.core.models import BenchmarkRow, SweepRow

console = Console(stderr=True)


def _auroc_style(value: float, best: float) -> str:
    if value == best:
        return "bold green"
    if value >= best - 0.01:
        return "green"
    if value >= 0.75:
        return "yellow"
    return "red"


def print_sweep(rows: Sequence[SweepRow], title: str = "Sweep"):
    if not rows:
        console.print("[yellow]  No configurations evaluated.[/yellow]")
        return
    best = max(r.auroc for r in rows)
    table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold")
    table.add_column("Config", style="white")
    table.add_column("Method", no_wrap=True)
    table.add_column("Pos", justify="right")
    table.add_column("Neg", justify="right")
    table.add_column("AUROC", justify="right")
    for r in rows:
        method = r.config.effective_method
        table.add_row(
            r.config.label(),
            Text(method, style=METHOD_COLOR.get(method, "white")),
            str(r.roc.n_pos),
            str(r.roc.n_neg),
            Text(f"{r.auroc:.4f}", style=_auroc_style(r.auroc, best)),
        )
    console.print(table)


def print_benchmark(rows: Sequence[BenchmarkRow], title: str = "Benchmark"):
    if not rows:
        console.print("[yellow]  No benchmark rows.[/yellow]")
        return
    table = Table(title=title, box=box.ROUNDED, show_header=True, header_style="bold")
    table.add_column("Shape", style="cyan", no_wrap=True)
    table.add_column("Config", style="white")
    table.add_column("Seeds", justify="right")
    table.add_column("Mean AUROC", justify="right")
    table.add_column("Std", justify="right", style="dim")

    best_per_shape: dict[str, float] = {}
    for r in rows:
        best_per_shape[r.shape] = max(best_per_shape.get(r.shape, 0.0), r.mean)
    for r in rows:
        table.add_row(
            r.shape,
            r.config.label(),
            str(len(r.aurocs)),
            Text(f"{r.mean:.4f}", style=_auroc_style(r.mean, best_per_shape[r.shape])),
            f"{r.std:.4f}",
        )
    console.print(table)

    winners = []
    for shape, best in best_per_shape.items():
        top = next(r for r in rows if r.shape == shape and r.mean == best)
        winners.append(f"[cyan]{shape}[/cyan]: {top.config.label()} ({best:.4f})")
    console.print("\n  " + "  |  ".join(winners))
