"""CLI argument parsing."""

from __future__ import annotations

import argparse

from knnn import __version__
from knnn.core.config import PRESETS
from knnn.core.constants import (
    DEFAULT_K,
    DEFAULT_K_NNN,
    DEFAULT_N_TEST,
    DEFAULT_N_TRAIN,
    DEFAULT_RESOLUTION,
    METHODS,
    SHAPES,
)
from knnn.core.errors import BadConfig
from knnn.core.models import Box, ScoreConfig
from knnn.sweep import parse_grid


# ============================================================================
# Typed flag values
# ============================================================================

def positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def nonneg_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return value


def nonneg_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {raw!r}") from None
    if not value >= 0.0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a finite number >= 0, got {raw!r}")
    return value


def positive_float(raw: str) -> float:
    value = nonneg_float(raw)
    if value == 0.0:
        raise argparse.ArgumentTypeError("expected a number > 0")
    return value


def parse_bbox(raw: str) -> Box:
    """'xmin,ymin,xmax,ymax' -> Box."""
    try:
        xmin, ymin, xmax, ymax = (float(v) for v in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected xmin,ymin,xmax,ymax, got {raw!r}") from None
    box = Box(lo=(xmin, ymin), hi=(xmax, ymax))
    if box.is_degenerate():
        raise argparse.ArgumentTypeError(f"box {raw!r} needs xmin < xmax and ymin < ymax")
    return box


def parse_resolution(raw: str) -> tuple[int, int]:
    """'WxH' -> (W, H)."""
    width, sep, height = raw.lower().partition("x")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected WxH, got {raw!r}")
    return positive_int(width), positive_int(height)


def parse_grid_arg(raw: str) -> list[ScoreConfig]:
    try:
        return parse_grid(raw)
    except BadConfig as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def parse_shapes(raw: str) -> list[str]:
    shapes = [s.strip() for s in raw.split(",") if s.strip()]
    unknown = [s for s in shapes if s not in SHAPES]
    if not shapes or unknown:
        raise argparse.ArgumentTypeError(f"shapes must be drawn from {', '.join(SHAPES)}, got {raw!r}")
    return shapes


# ============================================================================
# Parser
# ============================================================================

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--threads",
        type=positive_int,
        default=None,
        metavar="N",
        help="Worker threads for fit / scoring (default: KNNN_THREADS or all cores)",
    )
    p.add_argument("--debug", action="store_true", help="Enable debug logging")
    p.add_argument("--quiet", "-q", action="store_true", help="Only log warnings and errors")
    p.add_argument("--header", action="store_true", help="Input CSV files start with a header line")
    return p


def _scorer_flags(p: argparse.ArgumentParser, required_defaults: bool):
    """--method/--k/--k-nnn/--n; without defaults they act as overrides."""
    p.add_argument("--method", choices=METHODS, default="knnn" if required_defaults else None)
    p.add_argument("--k", type=positive_int, default=DEFAULT_K if required_defaults else None, metavar="K",
                   help=f"Query neighbors (default: {DEFAULT_K})")
    p.add_argument("--k-nnn", dest="k_nnn", type=nonneg_int, default=DEFAULT_K_NNN if required_defaults else None,
                   metavar="K", help=f"Neighbors of neighbors; 0 = plain k-NN (default: {DEFAULT_K_NNN})")
    p.add_argument("--n", type=positive_int, default=None, metavar="N",
                   help="Eigenpairs kept per feature set (default: L)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(
        prog="knnn",
        description="knnn — neighbors-of-neighbors anomaly scoring",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"knnn {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    b = sub.add_parser("build", parents=[common], help="Fit a model from a training CSV")
    b.add_argument("--train", required=True, metavar="CSV")
    _scorer_flags(b, required_defaults=True)
    b.add_argument("--L", dest="L", type=positive_int, default=None, metavar="L",
                   help="Feature set width (default: min(5, D))")
    b.add_argument("--reorder", action=argparse.BooleanOptionalAction, default=True,
                   help="Correlation-driven feature reordering (default: on)")
    b.add_argument("--floor", type=positive_float, default=None, metavar="RATIO",
                   help="Relative eigenvalue floor (default: KNNN_EIGEN_FLOOR or 1e-6)")
    b.add_argument("--out", required=True, metavar="MODEL")

    s = sub.add_parser("score", parents=[common], help="Score query rows against a model")
    s.add_argument("--model", required=True, metavar="MODEL")
    s.add_argument("--queries", required=True, metavar="CSV")
    s.add_argument("--out", metavar="CSV", help="Score file (default: stdout)")
    s.add_argument("--breakdown", metavar="FILE", help="Write per-query neighbors and contributions as JSON")
    _scorer_flags(s, required_defaults=False)

    e = sub.add_parser("eval", parents=[common], help="AUROC of a score file against labels")
    e.add_argument("--scores", required=True, metavar="CSV")
    e.add_argument("--labels", required=True, metavar="CSV")

    y = sub.add_parser("synth", parents=[common], help="Generate a synthetic benchmark")
    y.add_argument("--shape", required=True, choices=SHAPES)
    y.add_argument("--n-train", dest="n_train", type=positive_int, default=DEFAULT_N_TRAIN, metavar="N")
    y.add_argument("--n-test", dest="n_test", type=positive_int, default=DEFAULT_N_TEST, metavar="N")
    y.add_argument("--noise", type=nonneg_float, default=None, metavar="SIGMA",
                   help="Gaussian noise std-dev (default: per shape)")
    y.add_argument("--seed", type=nonneg_int, default=0)
    y.add_argument("--bbox", type=parse_bbox, default=None, metavar="XMIN,YMIN,XMAX,YMAX",
                   help="Box for uniform anomalies (default: shape box + 20%%)")
    y.add_argument("--out-prefix", dest="out_prefix", required=True, metavar="PREFIX",
                   help="Writes PREFIX_train.csv, PREFIX_test.csv, PREFIX_labels.csv")

    w = sub.add_parser("sweep", parents=[common], help="AUROC of a grid of configs")
    w.add_argument("--train", required=True, metavar="CSV")
    w.add_argument("--test", required=True, metavar="CSV")
    w.add_argument("--labels", required=True, metavar="CSV")
    w.add_argument("--grid", required=True, type=parse_grid_arg, metavar="SPEC",
                   help='e.g. "knn:k=75; knnn:k=3,k_nnn=25|75"')
    w.add_argument("--out", metavar="CSV", help="Result table (default: stdout)")
    w.add_argument("--json", dest="json_out", metavar="FILE", help="Write JSON report to FILE")

    h = sub.add_parser("heatmap", parents=[common], help="Score a 2-D grid and write CSV + PGM")
    h.add_argument("--model", required=True, metavar="MODEL")
    _scorer_flags(h, required_defaults=False)
    h.add_argument("--bbox", type=parse_bbox, default=None, metavar="XMIN,YMIN,XMAX,YMAX",
                   help="Grid box (default: training box + 20%%)")
    h.add_argument("--res", type=parse_resolution, default=DEFAULT_RESOLUTION, metavar="WxH",
                   help="Grid resolution (default: 200x200)")
    h.add_argument("--out-prefix", dest="out_prefix", required=True, metavar="PREFIX")

    m = sub.add_parser("bench", parents=[common], help="Multi-seed synthetic benchmark")
    m.add_argument("--preset", choices=sorted(PRESETS), default=None,
                   help="Built-in protocol; explicit flags override it")
    m.add_argument("--shapes", type=parse_shapes, default=None, metavar="S1,S2")
    m.add_argument("--seeds", type=positive_int, default=None, metavar="N")
    m.add_argument("--n-train", dest="n_train", type=positive_int, default=None, metavar="N")
    m.add_argument("--n-test", dest="n_test", type=positive_int, default=None, metavar="N")
    m.add_argument("--noise", type=nonneg_float, default=None, metavar="SIGMA")
    m.add_argument("--grid", type=parse_grid_arg, default=None, metavar="SPEC")
    m.add_argument("--out", metavar="CSV", help="Result table (default: stdout)")
    m.add_argument("--json", dest="json_out", metavar="FILE", help="Write JSON report to FILE")
    return p


def parse_args(args: list[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(args)
