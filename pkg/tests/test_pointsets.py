import numpy as np

from src.geometry.moebius import INF
from src.geometry.pointsets import clusters, dedupe, hausdorff


def test_dedupe_keeps_earliest_points():
    points = [0, 4e-7, 8e-7, 0, INF, INF]
    assert list(dedupe(points, 1e-6)) == [0, 2, 4]


def test_dedupe_of_nothing():
    assert len(dedupe([], 1e-6)) == 0


def test_dedupe_collapses_dense_clusters():
    rng = np.random.default_rng(7)
    centres = np.exp(2j * np.pi * np.arange(10) / 10) * (1 + np.arange(10) / 10)
    owner = rng.permutation(np.repeat(np.arange(10), 5000))
    offsets = (rng.random(len(owner)) + 1j * rng.random(len(owner))) * 1e-8
    points = centres[owner] + offsets
    # every fifth point repeats exactly
    points[::5] = centres[owner[::5]]

    kept = dedupe(points, 1e-6)

    assert len(kept) == 10
    expected = sorted(int(np.flatnonzero(owner == c)[0]) for c in range(10))
    assert list(kept) == expected
    assert hausdorff(points[kept], centres) < 1e-6


def test_clusters_are_ordered_by_first_member():
    groups = clusters([1, 5, 1 + 1e-4, 5 + 1e-4, -3], 1e-3)
    assert groups == [[0, 2], [1, 3], [4]]
