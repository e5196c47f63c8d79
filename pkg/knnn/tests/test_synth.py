"""Tests for the seeded PRNG, shape generators and benchmark construction."""

import math

import numpy as np
import pytest

from knnn.core.errors import BadSpec
from knnn.core.models import Box, SynthSpec
from knnn.synth.prng import SplitMix64, Xoshiro256pp, derive_seed, permutation
from knnn.synth.shapes import (
    THREELINES_SEGMENTS,
    TWOARCS_ARCS,
    generate,
    sample_correlation_breaks,
    sample_negatives,
    shape_dim,
)


# ============================================================================
# PRNG
# ============================================================================

def test_splitmix64_reference_outputs():
    """splitmix64 seeded with 0 produces the published sequence."""
    sm = SplitMix64(0)
    assert sm.next() == 0xE220A8397B1DCDAF
    assert sm.next() == 0x6E789E6AA1B965F4


def test_xoshiro_deterministic():
    """Same seed, same stream."""
    a = Xoshiro256pp(42)
    b = Xoshiro256pp(42)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]


def test_uniform_range():
    """Uniform doubles lie in [0, 1)."""
    u = Xoshiro256pp(1).uniforms(5000)
    assert u.min() >= 0.0
    assert u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.02


def test_normal_box_muller_pair():
    """Two normals share one uniform pair: cosine branch first, then sine."""
    rng = Xoshiro256pp(9)
    twin = Xoshiro256pp(9)
    z1, z2 = rng.normal(), rng.normal()
    u1, u2 = twin.uniform(), twin.uniform()
    r = math.sqrt(-2.0 * math.log(1.0 - u1))
    assert z1 == r * math.cos(2.0 * math.pi * u2)
    assert z2 == r * math.sin(2.0 * math.pi * u2)


def test_permutation_bijection():
    """Fisher-Yates output is a permutation and reproducible."""
    p = permutation(100, seed=5)
    assert sorted(p.tolist()) == list(range(100))
    np.testing.assert_array_equal(p, permutation(100, seed=5))
    assert permutation(1, seed=5).tolist() == [0]


def test_derive_seed_streams_differ():
    """Sub-seeds differ per stream and per master seed."""
    seeds = {derive_seed(0, s) for s in range(5)} | {derive_seed(1, s) for s in range(5)}
    assert len(seeds) == 10


# ============================================================================
# Shapes
# ============================================================================

def test_moons_on_arcs():
    """Noiseless moons lie on one of the two arcs."""
    pts = generate(SynthSpec("moons", 4, noise=0.0, seed=11)).rows
    assert pts.shape == (4, 2)
    for x, y in pts:
        upper = abs(math.hypot(x, y) - 1.0) <= 1e-12 and y >= -1e-12
        lower = abs(math.hypot(x - 1.0, y - 0.5) - 1.0) <= 1e-12 and y <= 0.5 + 1e-12
        assert upper or lower


def test_moons_split_between_arcs():
    """ceil(n/2) upper-arc points come first."""
    pts = generate(SynthSpec("moons", 5, noise=0.0, seed=2)).rows
    np.testing.assert_allclose(np.hypot(pts[:3, 0], pts[:3, 1]), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.hypot(pts[3:, 0] - 1.0, pts[3:, 1] - 0.5), 1.0, atol=1e-12)


def test_circles_radii():
    """Noiseless circles sit on radius 1.0 or 0.5."""
    pts = generate(SynthSpec("circles", 1000, noise=0.0, seed=1)).rows
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert np.all((np.abs(r - 1.0) <= 1e-12) | (np.abs(r - 0.5) <= 1e-12))
    assert np.count_nonzero(np.abs(r - 1.0) <= 1e-12) == 500


def test_swissroll_parameter_range():
    """Swiss roll radius 3|p| is the parameter t in [1.5π, 4.5π]."""
    pts = generate(SynthSpec("swissroll", 300, noise=0.0, seed=4)).rows
    t = 3.0 * np.hypot(pts[:, 0], pts[:, 1])
    assert t.min() >= 1.5 * math.pi - 1e-9
    assert t.max() <= 4.5 * math.pi + 1e-9
    np.testing.assert_allclose(np.cos(t), 3.0 * pts[:, 0] / t, atol=1e-9)


def _segment_distance(p, a, b):
    a, b, p = np.asarray(a), np.asarray(b), np.asarray(p)
    t = np.clip(np.dot(p - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * (b - a))))


def test_threelines_on_segments():
    """Noiseless three-lines points lie exactly on a segment, evenly split."""
    pts = generate(SynthSpec("threelines", 301, seed=6)).rows
    for p in pts:
        assert min(_segment_distance(p, a, b) for a, b in THREELINES_SEGMENTS) <= 1e-12
    assert np.count_nonzero(pts[:, 1] == 0.0) == 101
    assert np.count_nonzero(pts[:, 0] == 1.5) == 100


def test_twoarcs_avoid_holes():
    """Arc points keep their radius, span and hole."""
    pts = generate(SynthSpec("twoarcs", 400, noise=0.0, seed=8)).rows
    r = np.hypot(pts[:, 0], pts[:, 1])
    deg = np.degrees(np.arctan2(pts[:, 1], pts[:, 0]))
    for radius, start, end, hole_lo, hole_hi in TWOARCS_ARCS:
        on = np.abs(r - radius) <= 1e-12
        assert np.count_nonzero(on) == 200
        assert np.all((deg[on] >= start - 1e-9) & (deg[on] <= end + 1e-9))
        assert not np.any((deg[on] > hole_lo + 1e-9) & (deg[on] < hole_hi - 1e-9))


def test_fig6_pair_correlation():
    """Features (0, 2) and (1, 3) correlate at 0.95; pairs are independent."""
    x = generate(SynthSpec("fig6", 5000, seed=3)).rows
    corr = np.corrcoef(x, rowvar=False)
    assert corr[0, 2] == pytest.approx(0.95, abs=0.02)
    assert corr[1, 3] == pytest.approx(0.95, abs=0.02)
    assert abs(corr[0, 1]) < 0.05
    assert abs(corr[2, 3]) < 0.05


def test_generate_deterministic():
    """Same spec twice is bit-identical."""
    spec = SynthSpec("moons", 50, seed=12)
    np.testing.assert_array_equal(generate(spec).rows, generate(spec).rows)


def test_generate_noise_changes_points():
    """Noise perturbs the noiseless shape."""
    clean = generate(SynthSpec("circles", 20, noise=0.0, seed=1)).rows
    noisy = generate(SynthSpec("circles", 20, noise=0.05, seed=1)).rows
    np.testing.assert_array_equal(clean.shape, noisy.shape)
    assert not np.array_equal(clean, noisy)


def test_generate_bad_specs():
    """Unknown shapes, empty counts and negative noise are rejected."""
    with pytest.raises(BadSpec, match="Unknown shape"):
        generate(SynthSpec("spiral", 10))
    with pytest.raises(BadSpec, match="n_points"):
        generate(SynthSpec("moons", 0))
    with pytest.raises(BadSpec, match="noise"):
        generate(SynthSpec("moons", 10, noise=-0.1))


def test_shape_dim():
    """fig6 is 4-D, everything else planar."""
    assert shape_dim("fig6") == 4
    assert shape_dim("moons") == 2


# ============================================================================
# Negatives and benchmarks
# ============================================================================

def test_sample_negatives_mean():
    """10000 uniform points in the unit box average (0.5, 0.5)."""
    pts = sample_negatives(Box((0.0, 0.0), (1.0, 1.0)), 10000, seed=1).rows
    np.testing.assert_allclose(pts.mean(axis=0), [0.5, 0.5], atol=0.02)


def test_sample_negatives_single_point_inside():
    """A single draw lands inside the box."""
    box = Box((-2.0, 3.0), (-1.0, 5.0))
    (x, y), = sample_negatives(box, 1, seed=99).rows
    assert -2.0 <= x < -1.0
    assert 3.0 <= y < 5.0


def test_sample_negatives_reproducible():
    """Fixed seed, fixed points."""
    box = Box((0.0, 0.0), (2.0, 2.0))
    np.testing.assert_array_equal(sample_negatives(box, 5, 3).rows, sample_negatives(box, 5, 3).rows)


def test_sample_negatives_degenerate_box():
    """A zero-width box is rejected."""
    with pytest.raises(BadSpec, match="Degenerate"):
        sample_negatives(Box((0.0, 0.0), (0.0, 1.0)), 5, seed=0)


def test_correlation_breaks_leave_pair_axis():
    """Anomalies sit about three minor-axis std-devs off each pair's axis, marginals near N(0, 1)."""
    x = sample_correlation_breaks(5000, seed=0).rows
    assert x.shape == (5000, 4)
    sigma_minor = math.sqrt(1.0 - 0.95)
    for a, b in ((0, 2), (1, 3)):
        offset = np.abs(x[:, a] - x[:, b]) / math.sqrt(2.0) / sigma_minor
        assert np.median(offset) == pytest.approx(3.0, abs=0.3)
    np.testing.assert_allclose(x.std(axis=0), math.sqrt(1.0 + 9.0 * 0.05 / 2.0), atol=0.05)


def test_correlation_breaks_without_shift_match_fig6_pairs():
    """A zero shift leaves the pair correlation at 0.95."""
    x = sample_correlation_breaks(5000, seed=1, shift=0.0).rows
    assert np.corrcoef(x, rowvar=False)[0, 2] == pytest.approx(0.95, abs=0.02)


def test_correlation_breaks_bad_arguments():
    """Empty counts and negative shifts are rejected."""
    with pytest.raises(BadSpec, match="count"):
        sample_correlation_breaks(0, seed=0)
    with pytest.raises(BadSpec, match="shift"):
        sample_correlation_breaks(5, seed=0, shift=-1.0)


def test_make_benchmark_counts(benchmark):
    """100 train rows; 100 normals plus 5000 anomalies in the test set."""
    train, test = benchmark("moons", n_train=100, n_test=5000)
    assert train.n_rows == 100
    assert test.features.n_rows == 5100
    assert test.n_negative == 100
    assert test.n_positive == 5000


def test_make_benchmark_normals_on_shape(benchmark):
    """Noiseless circles: every normal test row is on a radius."""
    _, test = benchmark("circles", n_train=50, n_test=100, noise=0.0)
    normals = test.features.rows[test.labels == 0]
    r = np.hypot(normals[:, 0], normals[:, 1])
    assert np.all((np.abs(r - 1.0) <= 1e-12) | (np.abs(r - 0.5) <= 1e-12))


def test_make_benchmark_disjoint_halves(benchmark):
    """Train rows and normal test rows come from disjoint halves of the pool."""
    train, test = benchmark("moons", seed=4, n_train=80, n_test=50)
    normals = test.features.rows[test.labels == 0]
    assert not set(map(tuple, train.rows)) & set(map(tuple, normals))


def test_make_benchmark_fig6_negatives(benchmark):
    """fig6 anomalies are 4-D and correlate well below the normals' 0.95."""
    _, test = benchmark("fig6", n_train=50, n_test=2000)
    anomalies = test.features.rows[test.labels == 1]
    assert anomalies.shape == (2000, 4)
    assert np.corrcoef(anomalies, rowvar=False)[0, 2] < 0.8


def test_make_benchmark_negatives_inside_pool_box(benchmark):
    """Planar anomalies are uniform over the generated pool's own bounding box."""
    train, test = benchmark("moons", n_train=100, n_test=3000)
    pool = np.vstack([train.rows, test.features.rows[test.labels == 0]])
    anomalies = test.features.rows[test.labels == 1]
    assert np.all(anomalies >= pool.min(axis=0))
    assert np.all(anomalies <= pool.max(axis=0))
    np.testing.assert_allclose(anomalies.min(axis=0), pool.min(axis=0), atol=0.02)
    np.testing.assert_allclose(anomalies.max(axis=0), pool.max(axis=0), atol=0.02)


def test_make_benchmark_small_train(benchmark):
    """n_train below 2 is rejected."""
    with pytest.raises(BadSpec, match="n_train"):
        benchmark("moons", n_train=1, n_test=10)
