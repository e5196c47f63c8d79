"""Configuration sweeps and the multi-seed synthetic benchmark runner."""

from __future__ import annotations

import itertools
import logging
from dataclasses import replace
from typing import Iterable, List, Optional, Sequence

from rich.console import Console
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)

from knnn.core.constants import METHODS
from knnn.core.errors import BadConfig
from knnn.core.models import (
    BenchmarkRow,
    EigenPack,
    FeatureMatrix,
    LabeledSet,
    PartitionPlan,
    ScoreConfig,
    SweepRow,
    SynthSpec,
    TrainedModel,
)
from knnn.evaluation import auroc
from knnn.index import fit
from knnn.partition import make_plan
from knnn.scoring import resolve_method, score_batch
from knnn.scoring.global_norm import global_eigenpacks
from knnn.synth.benchmark import make_benchmark

logger = logging.getLogger(__name__)

console = Console(stderr=True)

GRID_KEYS = ("k", "k_nnn", "L", "n", "reorder")


# ============================================================================
# Grid parsing
# ============================================================================

def _parse_value(key: str, raw: str):
    token = raw.strip().lower()
    if key == "reorder":
        if token in ("1", "true", "yes", "on"):
            return True
        if token in ("0", "false", "no", "off"):
            return False
        raise BadConfig(f"reorder expects true/false, got {raw!r}")
    if key in ("L", "n") and token in ("none", "auto", ""):
        return None
    try:
        return int(token)
    except ValueError:
        raise BadConfig(f"{key} expects an integer, got {raw!r}") from None


def parse_grid(grid: str) -> List[ScoreConfig]:
    """
    Expand "method:key=v|v2,...; method:..." into configs, in written order.

    Alternatives separated by '|' expand to their cartesian product, the
    first key varying slowest.
    """
    configs: List[ScoreConfig] = []
    for entry in grid.split(";"):
        entry = entry.strip()
        if not entry:
            continue
        method, _, body = entry.partition(":")
        method = method.strip()
        if method not in METHODS:
            raise BadConfig(f"Unknown method {method!r} in grid entry {entry!r}")
        keys: list[str] = []
        choices: list[list] = []
        for item in filter(None, (part.strip() for part in body.split(","))):
            key, sep, values = item.partition("=")
            key = key.strip()
            if not sep or key not in GRID_KEYS:
                raise BadConfig(f"Bad grid item {item!r}; keys are {', '.join(GRID_KEYS)}")
            if key in keys:
                raise BadConfig(f"Key {key!r} repeated in grid entry {entry!r}")
            keys.append(key)
            choices.append([_parse_value(key, v) for v in values.split("|")])
        for combo in itertools.product(*choices):
            configs.append(ScoreConfig(method=method, **dict(zip(keys, combo))).validate())
    if not configs:
        raise BadConfig(f"Grid {grid!r} holds no configurations")
    return configs


# ============================================================================
# Sweep
# ============================================================================

class ModelCache:
    """
    Fitted state shared across configs: one plan per (L, reorder), one
    neighbor-of-neighbor fit per (plan, k_nnn, n), one global pack set per
    (plan, n).
    """

    def __init__(self, train: FeatureMatrix, threads: Optional[int] = None):
        self.train = train
        self.threads = threads
        self.plans: dict[tuple[int, bool], PartitionPlan] = {}
        self.fits: dict[tuple[str, int, int], TrainedModel] = {}
        self.globals: dict[tuple[str, int], tuple[EigenPack, ...]] = {}
        self.fit_count = 0

    def plan_for(self, config: ScoreConfig) -> PartitionPlan:
        key = (config.set_width_for(self.train.dim), config.reorder and self.train.dim > 1)
        if key not in self.plans:
            self.plans[key] = make_plan(self.train, key[0], config.reorder)
        return self.plans[key]

    def model_for(self, config: ScoreConfig) -> TrainedModel:
        plan = self.plan_for(config)
        n = config.eigen_count_for(self.train.dim)
        method = resolve_method(config)
        if method == "knnn":
            key = (plan.digest(), config.k_nnn, n)
            if key not in self.fits:
                self.fits[key] = fit(self.train, plan, config.k_nnn, n, threads=self.threads)
                self.fit_count += 1
            return replace(self.fits[key], config=config)
        packs: tuple[EigenPack, ...] = ()
        if method == "global":
            key = (plan.digest(), n)
            if key not in self.globals:
                self.globals[key] = global_eigenpacks(self.train, plan, n)
            packs = self.globals[key]
        return TrainedModel(train=self.train, plan=plan, k_nnn=0, n=n, global_packs=packs, config=config)


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[bold cyan]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    )


def sweep(
    train: FeatureMatrix,
    test: LabeledSet,
    configs: Sequence[ScoreConfig],
    threads: Optional[int] = None,
    show_progress: bool = False,
    cache: Optional[ModelCache] = None,
) -> List[SweepRow]:
    """
    AUROC of every config on one train/test split; rows keep config order.
    """
    cache = cache or ModelCache(train, threads=threads)
    rows: List[SweepRow] = []
    progress = _progress() if show_progress else None
    task = progress.add_task(f"Sweeping {len(configs)} config(s)", total=len(configs)) if progress else None

    def run_all():
        for config in configs:
            model = cache.model_for(config.validate())
            report = score_batch(model, test.features, config, threads=threads)
            roc = auroc(report.scores, test.labels)
            logger.info("%s: AUROC %.4f", config.label(), roc.auroc)
            rows.append(SweepRow(config=config, roc=roc))
            if progress:
                progress.advance(task)

    if progress:
        with progress:
            run_all()
    else:
        run_all()
    return rows


# ============================================================================
# Benchmark
# ============================================================================

def run_benchmark(
    shapes: Iterable[str],
    seeds: int,
    n_train: int,
    n_test: int,
    configs: Sequence[ScoreConfig],
    noise: Optional[float] = None,
    threads: Optional[int] = None,
    show_progress: bool = False,
) -> List[BenchmarkRow]:
    """
    Mean / std AUROC per (shape, config) over seeds 0..seeds-1.
    """
    shapes = list(shapes)
    if seeds < 1:
        raise BadConfig(f"seeds must be >= 1, got {seeds}")
    table = {(shape, i): BenchmarkRow(shape=shape, config=c) for shape in shapes for i, c in enumerate(configs)}
    progress = _progress() if show_progress else None
    task = progress.add_task(f"Benchmark {len(shapes)} shape(s) x {seeds} seed(s)", total=len(shapes) * seeds) if progress else None

    def run_all():
        for shape in shapes:
            for seed in range(seeds):
                train, test = make_benchmark(SynthSpec(shape=shape, n_points=2 * n_train, noise=noise, seed=seed), n_train, n_test)
                for i, row in enumerate(sweep(train, test, configs, threads=threads)):
                    table[(shape, i)].aurocs.append(row.auroc)
                if progress:
                    progress.advance(task)

    if progress:
        with progress:
            run_all()
    else:
        run_all()
    return [table[(shape, i)] for shape in shapes for i in range(len(configs))]
