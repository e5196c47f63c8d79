#!/usr/bin/env python3
"""
knnn — neighbors-of-neighbors anomaly scoring

Install:
    pip install -r requirements.txt

Usage:
    python -m knnn synth --shape threelines --out-prefix runs/lines
    python -m knnn build --train runs/lines_train.csv --k 3 --k-nnn 25 --out runs/lines.knnn
    python -m knnn sweep --train runs/lines_train.csv --test runs/lines_test.csv \\
        --labels runs/lines_labels.csv --grid "knn:k=75; knnn:k=3,k_nnn=25"
    python -m knnn heatmap --model runs/lines.knnn --res 200x200 --out-prefix runs/lines_map
    python -m knnn bench --preset planar --json runs/planar.json
"""

from __future__ import annotations

import logging
import sys
import time
from dataclasses import replace
from datetime import datetime

from rich.console import Console
from rich.panel import Panel

from knnn import __version__
from knnn.cli import parse_args
from knnn.core import config as settings
from knnn.core.config import FOUR_METHOD_GRID, get_preset
from knnn.core.constants import DEFAULT_N_TEST, DEFAULT_N_TRAIN, EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE
from knnn.core.errors import KnnnError
from knnn.core.models import ScoreConfig, SynthSpec
from knnn.data import load_csv, load_labeled, load_labels, load_scores, write_csv, write_labels, write_scores
from knnn.evaluation import auroc
from knnn.model_file import load_model, save_model
from knnn.reporting import (
    benchmark_csv,
    print_benchmark,
    print_sweep,
    sweep_csv,
    write_benchmark_json,
    write_breakdown_json,
    write_sweep_json,
)
from knnn.reporting.csv_out import emit
from knnn.reporting.heatmap import render_heatmap, write_heatmap
from knnn.scoring import build_model, score_batch
from knnn.sweep import parse_grid, run_benchmark, sweep
from knnn.synth.benchmark import make_benchmark
from knnn.synth.shapes import shape_dim

console = Console(stderr=True)
logger = logging.getLogger("knnn")


def setup_logging(debug: bool = False, quiet: bool = False):
    level = logging.DEBUG if debug else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def _override(config: ScoreConfig, args) -> ScoreConfig:
    """Apply the optional --method/--k/--k-nnn/--n flags to a stored config."""
    changes = {
        key: getattr(args, key)
        for key in ("method", "k", "k_nnn", "n")
        if getattr(args, key, None) is not None
    }
    return replace(config, **changes).validate()


# ============================================================================
# Commands
# ============================================================================

def cmd_build(args) -> int:
    train = load_csv(args.train, has_header=args.header)
    config = ScoreConfig(
        method=args.method,
        k=args.k,
        k_nnn=args.k_nnn,
        n=args.n,
        L=args.L,
        reorder=args.reorder,
    ).validate()
    t0 = time.perf_counter()
    model = build_model(train, config, threads=args.threads, floor_ratio=args.floor)
    elapsed = time.perf_counter() - t0
    save_model(model, args.out)
    console.print(
        f"[green]✓[/green] {config.label()}  D={model.dim}  L={model.plan.set_width}  "
        f"S={model.plan.set_count}  → {args.out}"
    )
    console.print(
        f"  [dim]Fit {elapsed:.3f}s  ({elapsed / train.n_rows * 1e3:.3f} ms per training point)[/dim]"
    )
    return EXIT_OK


def cmd_score(args) -> int:
    model = load_model(args.model)
    queries = load_csv(args.queries, has_header=args.header)
    config = _override(model.config or ScoreConfig(), args)
    report = score_batch(model, queries, config, threads=args.threads, with_breakdown=bool(args.breakdown))
    if args.out:
        write_scores(report.scores, args.out)
    else:
        emit("".join(f"{float(v):.17g}\n" for v in report.scores))
    if args.breakdown:
        write_breakdown_json(report.breakdown, config, args.breakdown, console=console)
    console.print(
        f"  [dim]Scored {report.n_queries} queries with {config.label()} in "
        f"{report.timings['total']:.3f}s  ({report.timings['per_query'] * 1e3:.3f} ms per query)[/dim]"
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    scores = load_scores(args.scores, has_header=args.header)
    labels = load_labels(args.labels, has_header=args.header)
    roc = auroc(scores, labels)
    print(f"{roc.auroc:.4f}")
    console.print(f"  [dim]AUROC over {roc.n_pos} anomalous / {roc.n_neg} normal rows[/dim]")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SynthSpec(
        shape=args.shape,
        n_points=2 * args.n_train,
        noise=args.noise,
        seed=args.seed,
        bbox=args.bbox,
    )
    train, test = make_benchmark(spec, args.n_train, args.n_test)
    prefix = args.out_prefix
    write_csv(train, f"{prefix}_train.csv")
    write_csv(test.features, f"{prefix}_test.csv")
    write_labels(test.labels, f"{prefix}_labels.csv")
    console.print(
        f"[green]✓[/green] {args.shape} seed={args.seed}: train={train.n_rows}  "
        f"test={test.features.n_rows} ({test.n_positive} anomalous) → {prefix}_*.csv"
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    train = load_csv(args.train, has_header=args.header)
    test = load_labeled(args.test, args.labels, has_header=args.header)
    rows = sweep(train, test, args.grid, threads=args.threads, show_progress=not args.quiet)
    print_sweep(rows)
    emit(sweep_csv(rows, train.dim), args.out)
    if args.json_out:
        write_sweep_json(rows, args.json_out, console=console)
    return EXIT_OK


def cmd_heatmap(args) -> int:
    model = load_model(args.model)
    config = _override(model.config or ScoreConfig(), args)
    grid = render_heatmap(model, config, bbox=args.bbox, resolution=args.res, threads=args.threads)
    csv_path, pgm_path = write_heatmap(grid, args.out_prefix)
    console.print(f"[green]✓[/green] {grid.width}x{grid.height} {config.label()} → {csv_path}, {pgm_path}")
    return EXIT_OK


def cmd_bench(args) -> int:
    preset = get_preset(args.preset) if args.preset else None
    shapes = args.shapes or (preset.shapes if preset else ["moons"])
    seeds = args.seeds or (preset.seeds if preset else 5)
    n_train = args.n_train or (preset.n_train if preset else DEFAULT_N_TRAIN)
    n_test = args.n_test or (preset.n_test if preset else DEFAULT_N_TEST)
    configs = args.grid or parse_grid(preset.grid if preset else FOUR_METHOD_GRID)
    noise = args.noise if args.noise is not None else (preset.noise if preset else None)

    rows = run_benchmark(
        shapes, seeds, n_train, n_test, configs,
        noise=noise, threads=args.threads, show_progress=not args.quiet,
    )
    print_benchmark(rows, title=f"Benchmark ({preset.name}: {preset.description})" if preset else "Benchmark")
    emit(benchmark_csv(rows, {s: shape_dim(s) for s in shapes}), args.out)
    if args.json_out:
        write_benchmark_json(rows, args.json_out, console=console)
    return EXIT_OK


HANDLERS = {
    "build": cmd_build,
    "score": cmd_score,
    "eval": cmd_eval,
    "synth": cmd_synth,
    "sweep": cmd_sweep,
    "heatmap": cmd_heatmap,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(debug=args.debug, quiet=args.quiet)
    if not args.quiet:
        console.print(
            Panel(
                "\n".join([
                    f"[bold cyan]knnn v{__version__}[/bold cyan]",
                    f"Command : {args.command}",
                    f"Threads : {settings.resolve_threads(args.threads)}",
                    f"Started : {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
                ]),
                title="k-NNN anomaly scoring",
                border_style="cyan",
            )
        )

    try:
        return HANDLERS[args.command](args)
    except (KnnnError, OSError) as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
