from dataclasses import replace
from types import SimpleNamespace

import pytest

from src.analyzers import charsub
from src.analyzers.bumping import bump_set, maximal_collections
from src.analyzers.charsub import (
    SFS_SOLID_TORUS, TRIVIAL_I_BUNDLE, TWISTED_I_BUNDLE, CharPiece, Decomposition, assemble,
    curve_class_id, solid_torus_piece,
)
from src.analyzers.nielsen import nielsen_core
from src.utils.errors import CaseViolation


def test_swapped_sectors_make_a_twisted_bundle(root_spec, two_sectors):
    bump = bump_set(two_sectors, root_spec, 4)
    key = tuple(bump.component_ids)
    cores = {(key, c.id): nielsen_core(bump, c, root_spec, 4) for c in two_sectors}
    d = assemble([bump], cores, root_spec, 4, components=two_sectors)
    assert len(d.pieces) == 1
    piece = d.pieces[0]
    assert piece.kind == TWISTED_I_BUNDLE
    assert piece.n == 2
    assert piece.m == 1
    assert piece.boundary_annuli == 1
    assert piece.self_match
    assert piece.twisted
    assert piece.curve_classes == ['C0-1/0.0', 'C0-1/1.0']


def test_component_without_core_is_left_unmatched(root_spec, two_sectors):
    bump = bump_set(two_sectors, root_spec, 4)
    key = tuple(bump.component_ids)
    c = two_sectors[0]
    d = assemble([bump], {(key, c.id): nielsen_core(bump, c, root_spec, 4)}, root_spec, 4,
                 components=two_sectors)
    piece = d.pieces[0]
    assert piece.kind == TWISTED_I_BUNDLE
    assert piece.curve_classes == ['C0-1/0.0']


def test_three_sectors_make_a_solid_torus(rotating_spec, three_sectors):
    records = maximal_collections(three_sectors, rotating_spec, 6)
    d = assemble(records, {}, rotating_spec, 6, components=three_sectors)
    piece = d.pieces[0]
    assert piece.kind == SFS_SOLID_TORUS
    assert (piece.n, piece.m, piece.w) == (3, 1, 3)
    assert piece.boundary_annuli == 1
    assert set(piece.cyclic_order) == {0, 1, 2}


@pytest.mark.parametrize('labels,w', [
    ([0, 0, 0], 3),
    ([0, 1, 0, 1], 2),
    ([0, 1, 2, 3], 1),
    ([0, 1, 2, 0, 1, 2], 2),
])
def test_solid_torus_winding(labels, w):
    piece = solid_torus_piece(None, labels)
    assert piece.w == w
    assert piece.twisted is (True if w == 2 else None)
    assert piece.n == len(labels)
    assert piece.m * piece.w == piece.n


def test_solid_torus_needs_m_to_divide_n():
    with pytest.raises(CaseViolation):
        solid_torus_piece(None, [0, 1, 2, 0])


def test_curve_class_ids():
    assert curve_class_id((0, 2), 2, 1) == 'C0-2/2.1'
    assert curve_class_id((0, 1), 1, 0) != curve_class_id((1, 2), 1, 0)


def test_overlapping_rosters_are_not_disjoint():
    a = CharPiece(TRIVIAL_I_BUNDLE, 2, 2, 2, None, curve_classes=['C0.0', 'C1.0'])
    b = CharPiece(TRIVIAL_I_BUNDLE, 2, 2, 2, None, curve_classes=['C1.0', 'C2.0'])
    c = CharPiece(TRIVIAL_I_BUNDLE, 2, 2, 2, None, curve_classes=['C3.0'])
    assert Decomposition([a, c]).disjoint
    assert not Decomposition([a, b]).disjoint
    assert Decomposition([]).disjoint


def _plain_cores(bumps):
    return {(tuple(b.component_ids), cid): SimpleNamespace(image_curve_classes=[0], class_words={})
            for b in bumps for cid in b.component_ids}


def test_bumps_sharing_a_component_get_distinct_curves(rotating_spec, three_sectors):
    torus = maximal_collections(three_sectors, rotating_spec, 6)[0]
    pair = bump_set(three_sectors[:2], rotating_spec, 6)
    bumps = [torus, pair]
    d = assemble(bumps, _plain_cores(bumps), rotating_spec, 6, components=three_sectors)
    assert [p.kind for p in d.pieces] == [SFS_SOLID_TORUS, TWISTED_I_BUNDLE]
    assert d.rosters == [['C0-1-2/0.0', 'C0-1-2/1.0', 'C0-1-2/2.0'], ['C0-1/0.0', 'C0-1/1.0']]
    assert d.disjoint


def test_a_curve_claimed_twice_is_a_case_violation(rotating_spec, three_sectors):
    torus = maximal_collections(three_sectors, rotating_spec, 6)[0]
    bumps = [torus, replace(torus)]
    with pytest.raises(CaseViolation, match='already claimed'):
        assemble(bumps, _plain_cores(bumps), rotating_spec, 6, components=three_sectors)


def test_image_classes_run_once_per_bump(root_spec, two_sectors, monkeypatch):
    calls = []
    original = charsub.image_classes

    def counting(bump, *args, **kwargs):
        calls.append(tuple(bump.component_ids))
        return original(bump, *args, **kwargs)

    monkeypatch.setattr(charsub, 'image_classes', counting)
    bump = bump_set(two_sectors, root_spec, 4)
    key = tuple(bump.component_ids)
    cores = {(key, c.id): nielsen_core(bump, c, root_spec, 4) for c in two_sectors}
    assemble([bump], cores, root_spec, 4, components=two_sectors)
    assert calls == [key]
