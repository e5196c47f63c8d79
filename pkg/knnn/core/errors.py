"""Domain error hierarchy."""

from __future__ import annotations

from pathlib import Path
from typing import Optional


class KnnnError(Exception):
    """Base exception for knnn errors."""
    pass


class DegenerateSample(KnnnError):
    """Too few or inconsistent samples for a covariance / eigen estimate."""
    pass


class NoConvergence(KnnnError):
    """Jacobi sweeps exhausted before the off-diagonal norm vanished."""

    def __init__(self, message: str, sweeps: int, residual: float):
        super().__init__(message)
        self.sweeps = sweeps
        self.residual = residual


class DimensionMismatch(KnnnError):
    pass


class DimensionError(KnnnError):
    """Operation requires a specific dimensionality (e.g. 2-D heatmaps)."""
    pass


class ParseError(KnnnError):
    def __init__(self, path: Path | str, line: int, message: str):
        super().__init__(f"{path}: line {line}: {message}")
        self.path = str(path)
        self.line = line


class EmptyInput(KnnnError):
    pass


class LabelMismatch(KnnnError):
    pass


class NotEnoughNeighbors(KnnnError):
    def __init__(self, requested: int, available: int, message: Optional[str] = None):
        super().__init__(
            message
            or f"Not enough neighbors: requested {requested}, only {available} eligible"
        )
        self.requested = requested
        self.available = available


class BadWidth(KnnnError):
    pass


class BadConfig(KnnnError):
    pass


class PlanMismatch(KnnnError):
    pass


class BadSpec(KnnnError):
    pass


class DegenerateLabels(KnnnError):
    pass


class ModelFileError(KnnnError):
    """Base for model file decoding failures."""

    def __init__(self, path: Path | str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = str(path)


class ChecksumMismatch(ModelFileError):
    pass


class UnsupportedVersion(ModelFileError):
    pass


class TruncatedFile(ModelFileError):
    pass


class BadMagic(ModelFileError):
    pass


class NonFiniteValue(KnnnError):
    pass
