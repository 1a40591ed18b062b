import pytest

from src.geometry.group import (
    PRUNE, GroupSpec, adjoin_sqrt, closure_maps, commutator, enumerate_words, grandma_recipe,
    iter_words, reduce, reduce_generators, stabilizer_membership, word_count,
)
from src.geometry.moebius import MoebiusMap, classify, PARABOLIC
from src.utils.errors import ConfigError, InsufficientSample, NoFuchsianModel

from .conftest import BASELINE_A, BASELINE_B


def test_baseline_commutator_is_parabolic_at_zero():
    c = commutator(BASELINE_A, BASELINE_B)
    assert c.approx_equal(MoebiusMap(-1 + 0j, 0j, -6 + 0j, -1 + 0j))
    info = classify(c)
    assert info.kind == PARABOLIC
    assert abs(info.fixed_points[0]) < 1e-12


@pytest.mark.parametrize('ta,tb', [(3, 3), (3, 3 + 0.4j), (2.2, 2.5 - 0.1j)])
def test_grandma_recipe_has_parabolic_commutator(ta, tb):
    a, b = grandma_recipe(ta, tb)
    assert a.trace() == pytest.approx(ta, abs=1e-9)
    assert b.trace() == pytest.approx(tb, abs=1e-9)
    assert commutator(a, b).trace() == pytest.approx(-2, abs=1e-6)


def test_word_counts(baseline_spec):
    single = GroupSpec((('a', BASELINE_A),))
    assert len(enumerate_words(single, 2)) == 5
    assert len(enumerate_words(baseline_spec, 2)) == 17
    assert word_count(2, 2) == 17
    assert len(enumerate_words(baseline_spec, 4)) == word_count(2, 4)


def test_enumeration_order_is_depth_first(baseline_spec):
    words = [w.letters for w in enumerate_words(baseline_spec, 2)]
    assert words[:5] == [(), (1,), (1, 1), (1, 2), (1, -2)]
    assert words[5] == (-1,)


def test_threaded_enumeration_matches_serial(baseline_spec):
    serial = [w.letters for w in enumerate_words(baseline_spec, 5)]
    threaded = [w.letters for w in enumerate_words(baseline_spec, 5, threads=4)]
    assert threaded == serial


@pytest.mark.parametrize('threads', [1, 3])
def test_harvest_keeps_only_what_it_returns(baseline_spec, threads):
    def harvest(w):
        return w.letters if len(w) == 3 else None

    kept = enumerate_words(baseline_spec, 4, threads=threads, harvest=harvest)
    expected = [w.letters for w in enumerate_words(baseline_spec, 4) if len(w) == 3]
    assert kept == expected
    assert len(kept) == 4 * 3 * 3


def test_words_are_reduced_and_maps_agree(baseline_spec):
    for w in enumerate_words(baseline_spec, 4):
        assert reduce(w.letters) == w.letters
        assert w.map.approx_equal(baseline_spec.word(w.letters).map)


def test_prune_visitor_stops_extensions(baseline_spec):
    def visitor(word, radius):
        return PRUNE if word.letters else None

    assert len(enumerate_words(baseline_spec, 6, visitor)) == 5
    assert len(list(iter_words(baseline_spec, 6, visitor))) == 5


def test_parse_and_text(baseline_spec):
    w = baseline_spec.parse('a b^-1 a')
    assert w.letters == (1, -2, 1)
    assert w.text(baseline_spec) == 'a b^-1 a'
    assert baseline_spec.parse('e').is_empty
    assert baseline_spec.parse('a a^-1').is_empty
    with pytest.raises(ConfigError):
        baseline_spec.parse('c')


def test_reduce_cancels_adjacent_inverses():
    assert reduce((1, -1, 2)) == (2,)
    assert reduce((2, 1, -1, -2, 1)) == (1,)


def test_invalid_generators_are_rejected():
    with pytest.raises(ConfigError):
        GroupSpec((('a', BASELINE_A), ('a', BASELINE_B)))
    with pytest.raises(ConfigError):
        GroupSpec((('a', MoebiusMap.identity()),))
    with pytest.raises(ConfigError):
        GroupSpec((('a', BASELINE_A),), fuchsian_model={'a': MoebiusMap.scaling(4j)})


def test_closure_and_generator_reduction(baseline_spec):
    a = baseline_spec.word((1,))
    closure = closure_maps([a.map], depth=3)
    assert (a.map @ a.map @ a.map) in closure
    assert a.map.inverse() in closure

    words = [baseline_spec.word(x) for x in [(1, 2), (1,), (2,), (1, 1)]]
    kept = reduce_generators(words)
    assert [w.letters for w in kept] == [(1,), (2,)]


def test_adjoin_sqrt_records_model_power(root_spec):
    gamma = root_spec.word((1,))
    assert gamma.map(1) == pytest.approx(-2)
    assert root_spec.adjunctions == ('a',)
    assert root_spec.model_powers == {'a': 2}
    model = root_spec.model_map((1, 1))
    assert model(1) == pytest.approx(4)
    with pytest.raises(NoFuchsianModel):
        root_spec.model_map((1,))


def test_model_map_of_root_that_stabilizes(root_spec):
    model = root_spec.model_map((1,), root_stabilizes={'a'})
    assert model(1) == pytest.approx(2)


def test_subgroup_words_expand_to_root_letters(baseline_spec):
    sub = baseline_spec.subgroup([baseline_spec.word((1, 2)), baseline_spec.word((2,))])
    assert sub.labels == ['w0', 'w1']
    assert sub.root_letters((1, -2)) == (1,)


def test_stabilizer_membership_of_sectors(root_spec, two_sectors):
    c, _ = two_sectors
    assert not stabilizer_membership(root_spec.word((1,)), c)
    assert stabilizer_membership(root_spec.word((1, 1)), c)
    assert stabilizer_membership(root_spec.word((-1, -1)), c)


def test_membership_needs_enough_points(root_spec):
    from src.analyzers.components import make_record
    tiny = make_record(0, [0j, 1, 2], 0.5)
    with pytest.raises(InsufficientSample):
        stabilizer_membership(root_spec.word((1, 1)), tiny)


def test_adjoin_sqrt_of_unknown_label(baseline_spec):
    with pytest.raises(ConfigError):
        adjoin_sqrt(baseline_spec, 'c')
