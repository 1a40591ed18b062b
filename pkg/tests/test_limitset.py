import numpy as np
import pytest

from src.analyzers.limitset import (
    TAG_FIXED, TAG_ORBIT, compute_limit, invariance_defect, quasicircle_from_points,
    rasterize_sample, refinement_defect, render,
)
from src.exporters.images import read_ppm
from src.geometry.group import GroupSpec
from src.geometry.moebius import MoebiusMap, chordal_dist_array, is_inf
from src.utils.errors import ConfigError, OrderingFailed


def test_baseline_limit_points_are_real(baseline_spec):
    sample = compute_limit(baseline_spec, depth=6, prune_eps=1e-3)
    finite = sample.points[np.isfinite(sample.points)]
    assert len(sample) > 50
    assert np.all(np.abs(finite.imag) < 1e-9)
    assert set(sample.tags) == {TAG_FIXED}
    assert len(sample.words) == len(sample)


def test_deeper_sample_refines_shallow_one(baseline_spec):
    coarse = compute_limit(baseline_spec, depth=5, prune_eps=1e-3)
    fine = compute_limit(baseline_spec, depth=7, prune_eps=1e-3)
    assert len(fine) > len(coarse)
    assert refinement_defect(coarse, fine) <= 1e-5


def test_threads_do_not_change_the_sample(baseline_spec):
    serial = compute_limit(baseline_spec, depth=5, prune_eps=1e-3)
    threaded = compute_limit(baseline_spec, depth=5, prune_eps=1e-3, threads=3)
    assert np.array_equal(serial.points, threaded.points)


def test_cusp_fill_reaches_the_cusp(baseline_spec):
    plain = compute_limit(baseline_spec, depth=4, prune_eps=1e-4)
    filled = compute_limit(baseline_spec, depth=4, prune_eps=1e-4, cusp_fill=64)
    assert TAG_ORBIT in filled.tags
    assert len(filled) > len(plain)

    def crowd(sample):
        return int((chordal_dist_array(0j, sample.points) < 0.05).sum())

    assert crowd(filled) > crowd(plain)


def test_cyclic_sample_is_invariant():
    spec = GroupSpec((('a', MoebiusMap.scaling(4)),))
    sample = compute_limit(spec, depth=4)
    assert len(sample) == 2
    assert any(is_inf(p) for p in sample.points)
    assert invariance_defect(sample, spec) == pytest.approx(0.0, abs=1e-9)


def test_depth_must_be_positive(baseline_spec):
    with pytest.raises(ConfigError):
        compute_limit(baseline_spec, depth=0)


def test_quasicircle_orders_a_shuffled_circle():
    theta = np.linspace(0, 2 * np.pi, 200, endpoint=False)
    points = np.exp(1j * theta)
    rng = np.random.default_rng(3)
    shuffled = points[rng.permutation(len(points))]
    q = quasicircle_from_points(shuffled)
    assert q.ordered
    steps = np.abs(np.diff(np.append(q.points, q.points[0])))
    assert steps.max() < 2 * (2 * np.pi / 200)
    assert q.orientation in (1, -1)


def test_quasicircle_needs_three_points():
    with pytest.raises(OrderingFailed):
        quasicircle_from_points([0j, 1 + 0j])


def test_rasterize_sample_orientation():
    image = rasterize_sample([1.9 + 1.9j, -1.9 - 1.9j, complex(np.inf, 0)], (-2, 2, -2, 2), (8, 8))
    assert image.shape == (8, 8)
    assert image[0, 7] == 0
    assert image[7, 0] == 0
    assert int((image == 0).sum()) == 2


def test_render_writes_ppm_and_png(baseline_spec, tmp_path):
    sample = compute_limit(baseline_spec, depth=5, prune_eps=1e-3)
    paths = render(sample, (-2, 2, -2, 2), (64, 32), tmp_path / 'limit.ppm', png=True)
    assert [p.suffix for p in paths] == ['.ppm', '.png']
    image = read_ppm(paths[0])
    assert image.shape == (32, 64)
    assert (image == 0).any()
    # the baseline limit set is the real line: only the middle rows are lit
    lit_rows = set(np.nonzero(image == 0)[0])
    assert lit_rows <= {15, 16}
