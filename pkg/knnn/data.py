"""
Embedding / label CSV ingestion and deterministic dataset splitting.

Embedding CSV: one vector per line, comma-separated numeric fields, no
quoting, optional single header line, LF or CRLF endings. Labels travel in
a separate one-column file aligned by row order.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from knnn.core.errors import EmptyInput, LabelMismatch, ParseError
from knnn.core.models import FeatureMatrix, LabeledSet
from knnn.synth.prng import permutation

logger = logging.getLogger(__name__)

# Plain decimal or exponent notation; no underscores, inf or nan spellings
NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def _data_lines(path: Path, has_header: bool) -> Iterable[tuple[int, str]]:
    """Yield (1-based line number, line) for non-blank data lines."""
    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise ParseError(path, raw[: e.start].count(b"\n") + 1, "not valid UTF-8") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if has_header and lineno == 1:
            continue
        if line.strip():
            yield lineno, line


def load_csv(path: str | Path, has_header: bool = False) -> FeatureMatrix:
    """
    Read an embedding CSV into a FeatureMatrix, preserving row order.

    Raises:
        ParseError: malformed, non-finite or ragged row (with its line number)
        EmptyInput: no data rows
    """
    p = Path(path)
    rows: list[list[float]] = []
    width = None
    for lineno, line in _data_lines(p, has_header):
        fields = [f.strip() for f in line.split(",")]
        if not all(NUMBER.fullmatch(f) for f in fields):
            raise ParseError(p, lineno, f"non-numeric field in {line.strip()!r}")
        values = [float(f) for f in fields]
        if not all(np.isfinite(values)):
            raise ParseError(p, lineno, "value overflows a double")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(p, lineno, f"expected {width} fields, found {len(values)}")
        rows.append(values)
    if not rows:
        raise EmptyInput(f"{p}: no data rows")
    logger.debug("Loaded %d x %d features from %s", len(rows), width, p)
    return FeatureMatrix(np.array(rows, dtype=np.float64))


def write_csv(matrix: FeatureMatrix | np.ndarray, path: str | Path) -> None:
    """Write rows with 17 significant digits so a reload is bit-exact."""
    rows = matrix.rows if isinstance(matrix, FeatureMatrix) else np.atleast_2d(matrix)
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(",".join(format(float(v), ".17g") for v in row))
            fh.write("\n")


def load_labels(path: str | Path, has_header: bool = False) -> np.ndarray:
    """Read a one-integer-per-line 0/1 label file."""
    p = Path(path)
    labels: list[int] = []
    for lineno, line in _data_lines(p, has_header):
        token = line.strip()
        if token not in ("0", "1"):
            raise ParseError(p, lineno, f"label must be 0 or 1, found {token!r}")
        labels.append(int(token))
    if not labels:
        raise EmptyInput(f"{p}: no labels")
    return np.array(labels, dtype=np.int8)


def write_labels(labels: np.ndarray, path: str | Path) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("".join(f"{int(v)}\n" for v in labels), encoding="utf-8")


def load_scores(path: str | Path, has_header: bool = False) -> np.ndarray:
    """Read a one-column score file."""
    matrix = load_csv(path, has_header=has_header)
    if matrix.dim != 1:
        raise ParseError(path, 1, f"score file must have one column, found {matrix.dim}")
    return matrix.rows[:, 0].copy()


def write_scores(scores: np.ndarray, path: str | Path) -> None:
    write_csv(np.asarray(scores, dtype=np.float64).reshape(-1, 1), path)


def load_labeled(
    features_path: str | Path,
    labels_path: str | Path,
    has_header: bool = False,
) -> LabeledSet:
    features = load_csv(features_path, has_header=has_header)
    labels = load_labels(labels_path)
    if labels.shape[0] != features.n_rows:
        raise LabelMismatch(
            f"{labels_path} has {labels.shape[0]} labels but {features_path} has {features.n_rows} rows"
        )
    return LabeledSet(features, labels)


def split_half(matrix: FeatureMatrix, seed: int) -> tuple[FeatureMatrix, FeatureMatrix]:
    """
    Seeded split: the first ceil(N/2) rows of a Fisher-Yates permutation
    train, the rest test.
    """
    n = matrix.n_rows
    if n < 2:
        raise EmptyInput(f"Splitting needs at least 2 rows, got {n}")
    order = permutation(n, seed)
    cut = (n + 1) // 2
    return matrix.take(order[:cut]), matrix.take(order[cut:])
