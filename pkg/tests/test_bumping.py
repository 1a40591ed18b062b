import numpy as np
import pytest

from src.analyzers.bumping import (
    EMPTY, FULL_BOUNDARY, INFINITE_PROPER, ONE_POINT, TWO_POINT, bump_set, classify_bump,
    common_stabilizer, maximal_collections,
)
from src.analyzers.components import make_record
from src.geometry.moebius import INF, chordal_dist, is_inf
from src.utils.errors import Inconsistent
from src.utils.tolerances import Tolerances


def _is(point, target):
    return chordal_dist(point, target) < 1e-9


def test_common_stabilizer_of_sectors(root_spec, two_sectors):
    c, o = two_sectors
    words = common_stabilizer(c, o, root_spec, 4)
    assert [w.letters for w in words] == [(1, 1)]


def test_sectors_bump_in_zero_and_infinity(root_spec, two_sectors):
    record = bump_set(two_sectors, root_spec, 4)
    assert record.cardinality_class == TWO_POINT
    assert record.component_ids == [0, 1]
    assert len(record.bump_points) == 2
    assert {is_inf(p) for p in record.bump_points} == {True, False}
    assert any(_is(p, 0j) for p in record.pair)
    assert any(_is(p, INF) for p in record.pair)
    assert record.validation_distance <= 2 * Tolerances().tau_bump
    assert [w.letters for w in record.common_stabilizer_words] == [(1, 1)]
    assert len(record.numeric_points) >= 2


def test_bump_set_needs_two_components(root_spec, two_sectors):
    with pytest.raises(ValueError):
        bump_set(two_sectors[:1], root_spec, 4)


def test_disagreeing_samples_are_inconsistent(root_spec, two_sectors):
    c, o = two_sectors
    # z -> 4z still passes on a truncated sector, but its sample never reaches 0 or ∞
    radii = 2.0 ** (np.arange(-24, 25) / 4.0)
    truncated = make_record(1, np.concatenate([radii * np.exp(0.75j * np.pi),
                                               radii * np.exp(1.25j * np.pi)]),
                            -1 + 0j, o.stabilizer_generators)
    with pytest.raises(Inconsistent) as info:
        bump_set([c, truncated], root_spec, 4)
    assert len(info.value.algebraic) == 2
    assert len(info.value.numeric) == 0
    assert info.value.distance > 2 * Tolerances().tau_bump


def test_inconsistent_candidates_are_skipped(root_spec, two_sectors, caplog):
    c, o = two_sectors
    # sector around i, missing 0 and ∞ like the truncated record above
    radii = 2.0 ** (np.arange(-24, 25) / 4.0)
    upper = make_record(2, np.concatenate([radii * np.exp(0.4j * np.pi),
                                           radii * np.exp(0.6j * np.pi)]),
                        1j, c.stabilizer_generators)
    with caplog.at_level('WARNING'):
        records = maximal_collections([c, o, upper], root_spec, 4)
    assert [sorted(r.component_ids) for r in records] == [[0, 1]]
    assert records[0].cardinality_class == TWO_POINT
    assert 'Skipping components [0, 2]' in caplog.text
    assert 'Skipping components [1, 2]' in caplog.text


def test_three_sectors_form_one_maximal_collection(rotating_spec, three_sectors):
    records = maximal_collections(three_sectors, rotating_spec, 6)
    assert len(records) == 1
    record = records[0]
    assert record.n == 3
    assert sorted(record.component_ids) == [0, 1, 2]
    assert record.cardinality_class == TWO_POINT
    assert [w.letters for w in record.common_stabilizer_words] == [(1, 1, 1)]


def test_classify_bump_classes(two_sectors):
    tol = Tolerances()
    assert classify_bump([], two_sectors, tol) == (EMPTY, None)
    kind, pair = classify_bump([1 + 0j, 1 + 1e-4j], two_sectors, tol)
    assert kind == ONE_POINT and len(pair) == 1
    kind, pair = classify_bump([0j, INF], two_sectors, tol)
    assert kind == TWO_POINT and len(pair) == 2
    ray = np.linspace(0.5, 2.0, 30) * np.exp(0.25j * np.pi)
    assert classify_bump(ray, two_sectors, tol)[0] == INFINITE_PROPER


def test_classify_bump_full_boundary():
    tol = Tolerances()
    circle = np.exp(2j * np.pi * np.arange(400) / 400)
    inside = make_record(0, circle, 0j)
    outside = make_record(1, circle, 5 + 0j)
    assert classify_bump(circle, [inside, outside], tol)[0] == FULL_BOUNDARY
