import math

import numpy as np
import pytest

from src.analyzers.bumping import bump_set
from src.analyzers.nielsen import (
    CHECK_CUSP, CHECK_NONACCUMULATING, CHECK_SIMPLE, SIMPLE_CLOSED_GEODESIC, SUBSURFACE,
    WHOLE_SURFACE, CircleSubset, Geodesic, angle_of, check_cusp, check_nonaccumulating,
    check_simple, classify_quotient, convex_hull_boundary, model_apply, nielsen_core,
    orbit_classes, point_of, pull_back_bump, resolved_mask,
)
from src.geometry.group import enumerate_words
from src.geometry.moebius import INF, HYPERBOLIC, MoebiusMap, classify, fixed_points, is_inf
from src.utils.errors import CheckFailed, TooSparse
from src.utils.tolerances import Tolerances

from .conftest import BASELINE_A, BASELINE_B


def rotation(phi):
    """Real matrix acting on the circle model as a rotation by ``phi``."""
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    return MoebiusMap.from_entries(c, s, -s, c)


def test_cayley_angles():
    assert angle_of(INF) == 0.0
    assert angle_of(0) == pytest.approx(math.pi)
    assert angle_of(1) == pytest.approx(3 * math.pi / 2)
    assert angle_of(-1) == pytest.approx(math.pi / 2)
    assert is_inf(point_of(0.0))
    for x in (-3.0, -0.2, 0.7, 12.0):
        assert point_of(angle_of(x)).real == pytest.approx(x)


def test_rotation_acts_by_its_angle():
    assert model_apply(rotation(0.5), 1.0) == pytest.approx(1.5)


def test_hull_of_three_points():
    s = CircleSubset.from_angles([0.0, math.pi / 2, math.pi])
    core = convex_hull_boundary(s)
    assert len(core) == 3
    assert Geodesic(0.0, math.pi) in core


def test_hull_of_two_points_is_one_geodesic():
    core = convex_hull_boundary(CircleSubset.from_angles([0.0, math.pi]))
    assert core == [Geodesic(0.0, math.pi)]


def test_hull_needs_two_points():
    with pytest.raises(TooSparse):
        convex_hull_boundary(CircleSubset.from_angles([1.0]))


def test_dense_subsets_have_no_hull_boundary():
    even = CircleSubset.from_angles(np.linspace(0, 2 * math.pi, 10000, endpoint=False))
    assert convex_hull_boundary(even) == []
    assert convex_hull_boundary(CircleSubset(np.zeros(0), dense=True)) == []


def test_from_angles_merges_close_angles():
    s = CircleSubset.from_angles([0.0, 1e-9, 1.0, 2 * math.pi - 1e-9])
    assert len(s) == 2


def test_simple_check():
    g = Geodesic(0.0, math.pi)
    crossing = MoebiusMap.from_entries(3, -0.25, 1, 0.25)
    assert not check_simple(g, [crossing], 1)
    assert check_simple(g, [MoebiusMap.scaling(4)], 3)


def test_accumulating_orbit_is_detected():
    phi = math.pi * (1 / 3 + 1e-6)
    g = Geodesic(0.0, math.pi / 2)
    assert not check_nonaccumulating(g, [rotation(phi)], 3)
    assert check_nonaccumulating(g, [rotation(math.pi / 3)], 3)


def test_cusp_check_on_baseline_model():
    stab = [BASELINE_A, BASELINE_B]
    to_cusp = Geodesic.between(math.pi / 2, math.pi)
    assert not check_cusp(to_cusp, stab, 4)
    axis = [angle_of(x) for x in fixed_points(BASELINE_A)]
    assert check_cusp(Geodesic.between(*axis), stab, 4)


def test_classify_quotient_reports_failed_check():
    g = Geodesic(0.0, math.pi)
    crossing = MoebiusMap.from_entries(3, -0.25, 1, 0.25)
    # the sample holds the crossing translate's endpoints, -1 and 3
    s = CircleSubset.from_angles([0.0, math.pi, angle_of(-1), angle_of(3)])
    with pytest.raises(CheckFailed) as info:
        classify_quotient([g], s, [crossing], 1, component_id=7)
    assert info.value.check_id == CHECK_SIMPLE
    assert info.value.geodesic == g


def test_orbit_classes_join_translates():
    h = MoebiusMap.scaling(4)
    g = Geodesic.between(angle_of(1.0), angle_of(2.0))
    k = g.image(h)
    assert orbit_classes([g, k], [h], 2) == [[0, 1]]
    assert orbit_classes([g, k], [MoebiusMap.scaling(9)], 2) == [[0], [1]]


def test_hyperbolic_axes_pass_every_check():
    rng = np.random.default_rng(11)
    letters = [BASELINE_A, BASELINE_A.inverse(), BASELINE_B, BASELINE_B.inverse()]
    tested = 0
    while tested < 50:
        h = MoebiusMap.identity()
        for k in rng.integers(0, 4, size=int(rng.integers(1, 5))):
            h = h @ letters[k]
        if classify(h).kind != HYPERBOLIC:
            continue
        g = Geodesic.between(*(angle_of(x) for x in fixed_points(h)))
        assert check_simple(g, [h], 2)
        assert check_nonaccumulating(g, [h], 2)
        assert check_cusp(g, [h], 2)
        tested += 1


def test_sector_core_is_one_closed_geodesic(root_spec, two_sectors):
    bump = bump_set(two_sectors, root_spec, 4)
    c = two_sectors[0]
    s = pull_back_bump(bump, c, root_spec, 4)
    assert len(s) == 2
    core = nielsen_core(bump, c, root_spec, 4)
    assert core.quotient_kind == SIMPLE_CLOSED_GEODESIC
    assert core.boundary_geodesics == [Geodesic(0.0, math.pi)]
    assert core.thickened
    assert core.image_curve_classes == [0]
    outcome = core.check_report[0]
    assert outcome[CHECK_SIMPLE] and outcome[CHECK_NONACCUMULATING] and outcome[CHECK_CUSP]
    assert [w.letters for w in core.class_words[0]][0] == (1, 1)


def test_empty_core_is_whole_surface():
    result = classify_quotient([], CircleSubset(np.zeros(0), dense=True), [], 3, component_id=2)
    assert result.quotient_kind == WHOLE_SURFACE
    assert result.boundary_geodesics == []


def test_two_boundary_classes_make_a_subsurface():
    core = [Geodesic(0.5, 1.0), Geodesic(3.0, 4.0)]
    s = CircleSubset.from_angles([0.5, 1.0, 3.0, 4.0])
    result = classify_quotient(core, s, [], 2)
    assert result.quotient_kind == SUBSURFACE
    assert result.classes == [[0], [1]]


def test_resolved_mask_wraps_around_zero():
    s = CircleSubset.from_angles([0.0, 1.0, 2 * math.pi - 0.5])
    mask = resolved_mask(s, [2 * math.pi - 1e-8, 1e-8, 1.0, 0.5, 2 * math.pi - 0.5], 1e-6)
    assert list(mask) == [True, True, True, False, True]
    assert resolved_mask(None, [0.3], 1e-6).all()
    assert resolved_mask(CircleSubset(np.zeros(0), dense=True), [0.3], 1e-6).all()


def test_unresolved_translates_are_not_compared():
    g = Geodesic(0.0, math.pi)
    crossing = MoebiusMap.from_entries(3, -0.25, 1, 0.25)
    assert check_simple(g, [crossing], 1, resolved=CircleSubset.from_angles([0.0, math.pi]))
    held = CircleSubset.from_angles([0.0, math.pi, angle_of(-1), angle_of(3)])
    assert not check_simple(g, [crossing], 1, resolved=held)


def test_baseline_orbit_hulls_pass_every_check(baseline_spec):
    tol = Tolerances()
    stab = [BASELINE_A, BASELINE_B]
    words = enumerate_words(baseline_spec, 3)
    rng = np.random.default_rng(3)
    tested = 0
    for _ in range(10):
        seed = float(rng.uniform(-4.0, 4.0))
        s = CircleSubset.from_angles([angle_of(w.map(seed)) for w in words], tol.tau_ang)
        for g in convex_hull_boundary(s, tol.gap_eps):
            assert check_simple(g, stab, 3, tol, s)
            assert check_nonaccumulating(g, stab, 3, tol, s)
            assert check_cusp(g, stab, 3, tol)
            tested += 1
    assert tested > 100
