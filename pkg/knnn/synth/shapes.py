"""
Seeded 2-D shape generators plus the 4-D correlated-pairs example.

Geometry is pinned so every run (and every implementation) agrees:

    moons       upper arc (cos t, sin t), t in [0, pi]; lower arc
                (1 - cos t, 1 - sin t - 0.5) interleaving with it
    circles     radii 1.0 and 0.5 around the origin
    swissroll   (t cos t, t sin t) / 3, t uniform in [1.5 pi, 4.5 pi]
    threelines  y=0 and y=1 for x in [0, 1]; x=1.5 for y in [0, 1]
    twoarcs     radii 1.0 / 1.2, 30-150 degrees, one 15-degree hole each
    fig6        features (0, 2) and (1, 3) correlated 0.95, pairs independent
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict

import numpy as np

from knnn.core.constants import (
    CORRELATION_BREAK_SHIFT,
    DEFAULT_NOISE,
    PAIR_CORRELATION,
    PLANAR_SHAPES,
    SHAPES,
)
from knnn.core.errors import BadSpec
from knnn.core.models import Box, FeatureMatrix, SynthSpec
from knnn.synth.prng import Xoshiro256pp

logger = logging.getLogger(__name__)

THREELINES_SEGMENTS = (
    ((0.0, 0.0), (1.0, 0.0)),
    ((0.0, 1.0), (1.0, 1.0)),
    ((1.5, 0.0), (1.5, 1.0)),
)

# (radius, start_deg, end_deg, hole_start_deg, hole_end_deg)
TWOARCS_ARCS = (
    (1.0, 30.0, 150.0, 75.0, 90.0),
    (1.2, 30.0, 150.0, 90.0, 105.0),
)

SWISSROLL_T_RANGE = (1.5 * math.pi, 4.5 * math.pi)


def _split_counts(n: int, parts: int) -> list[int]:
    base, rem = divmod(n, parts)
    return [base + (1 if i < rem else 0) for i in range(parts)]


def _moons(n: int, rng: Xoshiro256pp) -> np.ndarray:
    upper, _ = _split_counts(n, 2)
    t = math.pi * rng.uniforms(n)
    tu, tl = t[:upper], t[upper:]
    top = np.column_stack([np.cos(tu), np.sin(tu)])
    bottom = np.column_stack([1.0 - np.cos(tl), 1.0 - np.sin(tl) - 0.5])
    return np.vstack([top, bottom])


def _circles(n: int, rng: Xoshiro256pp) -> np.ndarray:
    outer, _ = _split_counts(n, 2)
    angle = 2.0 * math.pi * rng.uniforms(n)
    radius = np.where(np.arange(n) < outer, 1.0, 0.5)
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


def _swissroll(n: int, rng: Xoshiro256pp) -> np.ndarray:
    lo, hi = SWISSROLL_T_RANGE
    t = lo + (hi - lo) * rng.uniforms(n)
    return np.column_stack([t * np.cos(t), t * np.sin(t)]) / 3.0


def _threelines(n: int, rng: Xoshiro256pp) -> np.ndarray:
    chunks = []
    for count, ((x0, y0), (x1, y1)) in zip(_split_counts(n, 3), THREELINES_SEGMENTS):
        u = rng.uniforms(count)
        chunks.append(np.column_stack([x0 + (x1 - x0) * u, y0 + (y1 - y0) * u]))
    return np.vstack(chunks)


def _twoarcs(n: int, rng: Xoshiro256pp) -> np.ndarray:
    chunks = []
    for count, (radius, start, end, hole_lo, hole_hi) in zip(_split_counts(n, 2), TWOARCS_ARCS):
        hole = hole_hi - hole_lo
        deg = start + (end - start - hole) * rng.uniforms(count)
        deg = np.where(deg >= hole_lo, deg + hole, deg)
        rad = np.radians(deg)
        chunks.append(np.column_stack([radius * np.cos(rad), radius * np.sin(rad)]))
    return np.vstack(chunks)


def _correlated_pairs(z: np.ndarray) -> np.ndarray:
    rho = PAIR_CORRELATION
    rest = math.sqrt(1.0 - rho * rho)
    x = np.empty_like(z)
    x[:, 0] = z[:, 0]
    x[:, 1] = z[:, 1]
    x[:, 2] = rho * z[:, 0] + rest * z[:, 2]
    x[:, 3] = rho * z[:, 1] + rest * z[:, 3]
    return x


def _fig6(n: int, rng: Xoshiro256pp) -> np.ndarray:
    return _correlated_pairs(rng.normals(4 * n).reshape(n, 4))


GENERATORS: Dict[str, Callable[[int, Xoshiro256pp], np.ndarray]] = {
    "moons": _moons,
    "circles": _circles,
    "swissroll": _swissroll,
    "threelines": _threelines,
    "twoarcs": _twoarcs,
    "fig6": _fig6,
}


def resolve_noise(spec: SynthSpec) -> float:
    return DEFAULT_NOISE[spec.shape] if spec.noise is None else float(spec.noise)


def validate_spec(spec: SynthSpec) -> None:
    if spec.shape not in SHAPES:
        raise BadSpec(f"Unknown shape {spec.shape!r}; expected one of {', '.join(SHAPES)}")
    if spec.n_points < 1:
        raise BadSpec(f"n_points must be >= 1, got {spec.n_points}")
    if resolve_noise(spec) < 0 or not math.isfinite(resolve_noise(spec)):
        raise BadSpec(f"noise must be a non-negative finite std-dev, got {spec.noise}")


def generate(spec: SynthSpec) -> FeatureMatrix:
    """
    Deterministic points for `spec`; 2-D shapes get per-coordinate Gaussian noise.

    Raises:
        BadSpec: unknown shape, n_points < 1 or negative noise
    """
    validate_spec(spec)
    rng = Xoshiro256pp(spec.seed)
    points = GENERATORS[spec.shape](spec.n_points, rng)
    noise = resolve_noise(spec)
    if spec.shape in PLANAR_SHAPES and noise > 0.0:
        points = points + noise * rng.normals(points.size).reshape(points.shape)
    logger.debug("Generated %d %s points (noise=%.3g, seed=%d)", spec.n_points, spec.shape, noise, spec.seed)
    return FeatureMatrix(points)


def sample_negatives(bbox: Box, n: int, seed: int) -> FeatureMatrix:
    """n points uniform over `bbox`."""
    if bbox.is_degenerate():
        raise BadSpec(f"Degenerate sampling box {bbox}")
    if n < 1:
        raise BadSpec(f"Negative count must be >= 1, got {n}")
    rng = Xoshiro256pp(seed)
    lo = np.array(bbox.lo)
    hi = np.array(bbox.hi)
    u = rng.uniforms(n * bbox.dim).reshape(n, bbox.dim)
    return FeatureMatrix(lo + u * (hi - lo))


def sample_correlation_breaks(n: int, seed: int, shift: float = CORRELATION_BREAK_SHIFT) -> FeatureMatrix:
    """
    fig6-distributed points pushed off each pair's correlation axis.

    Every pair (0, 2) and (1, 3) moves `shift` minor-axis std-devs along
    (1, -1) / sqrt(2), with a random sign per pair. Each coordinate stays in
    the marginal N(0, 1) range; only the within-pair correlation is broken.
    """
    if n < 1:
        raise BadSpec(f"Anomaly count must be >= 1, got {n}")
    if shift < 0 or not math.isfinite(shift):
        raise BadSpec(f"shift must be a non-negative finite number, got {shift}")
    rng = Xoshiro256pp(seed)
    x = _correlated_pairs(rng.normals(4 * n).reshape(n, 4))
    signs = np.where(rng.uniforms(2 * n).reshape(n, 2) < 0.5, -1.0, 1.0)
    step = shift * math.sqrt((1.0 - PAIR_CORRELATION) / 2.0) * signs
    x[:, :2] += step
    x[:, 2:] -= step
    return FeatureMatrix(x)


def shape_dim(shape: str) -> int:
    """Feature dimension a shape generates."""
    if shape not in SHAPES:
        raise BadSpec(f"Unknown shape {shape!r}")
    return 4 if shape == "fig6" else 2
