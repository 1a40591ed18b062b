import copy
import json

import pytest

from src.config import DEFAULTS, config_from_dict, load_run_config
from src.geometry.moebius import MoebiusMap
from src.utils.errors import ConfigError
from src.utils.tolerances import Tolerances

BASELINE = {
    'schema': 1,
    'name': 'baseline',
    'generators': [
        {'label': 'a', 'matrix': [1, 0, 1, 0, 1, 0, 2, 0]},
        {'label': 'b', 'matrix': [[1, 0], [-1, 0], [-1, 0], [2, 0]]},
    ],
    'depth': 6,
}


def values(**changes):
    out = copy.deepcopy(BASELINE)
    out.update(changes)
    return out


def test_minimal_config_fills_defaults():
    cfg = config_from_dict(values())
    assert cfg.spec.labels == ['a', 'b']
    assert cfg.spec.word((2,)).map.approx_equal(MoebiusMap.from_entries(1, -1, -1, 2))
    assert cfg.depth == 6
    assert cfg.stabilizer_depth == DEFAULTS['stabilizer_depth']
    assert cfg.tolerances == Tolerances()
    assert cfg.resolutions['render'] == (512, 512)


def test_bump_depth_follows_depth_unless_given():
    assert config_from_dict(values()).bump_depth == 4
    assert config_from_dict(values(depth=12)).bump_depth == 10
    assert config_from_dict(values(depth=2)).bump_depth == 1
    assert config_from_dict(values(), {'depth': 9}).bump_depth == 7
    assert config_from_dict(values(bump_depth=3), {'depth': 9}).bump_depth == 3
    assert config_from_dict(values(bump_depth=3)).depths == {
        'depth': 6, 'stabilizer_depth': DEFAULTS['stabilizer_depth'], 'bump_depth': 3}


def test_unknown_key_suggests_the_closest_one():
    raw = values()
    raw['dpeth'] = 4
    with pytest.raises(ConfigError, match="did you mean 'depth'"):
        config_from_dict(raw)


def test_depth_is_bounded():
    with pytest.raises(ConfigError):
        config_from_dict(values(depth=21))
    with pytest.raises(ConfigError):
        config_from_dict(values(depth=0))
    assert config_from_dict(values(depth=20)).depth == 20


def test_hash_is_stable_and_ignores_threads():
    first = config_from_dict(values())
    assert config_from_dict(values()).config_hash == first.config_hash
    assert config_from_dict(values(), {'threads': 4}).config_hash == first.config_hash
    assert config_from_dict(values(), {'depth': 7}).config_hash != first.config_hash


def test_overrides_skip_none_and_reject_unknown_keys():
    assert config_from_dict(values(), {'depth': None}).depth == 6
    with pytest.raises(ConfigError):
        config_from_dict(values(), {'colour': 'red'})


@pytest.mark.parametrize('name', ['fuchsian_baseline.json', 'quasi_fuchsian_torus.json',
                                  'adjoined_root.json'])
def test_shipped_configs_load(name):
    cfg = load_run_config(name)
    assert cfg.spec.rank == 2
    assert cfg.source.endswith(name)
    assert cfg.assumptions


def test_adjoined_config_records_the_root():
    cfg = load_run_config('adjoined_root.json')
    assert cfg.spec.adjunctions == ('a',)
    assert cfg.spec.model_powers == {'a': 2}
    assert cfg.spec.word((1,)).map(1) == pytest.approx(-2)
    # b is bent off the real line, so the group is not Fuchsian
    assert abs(cfg.spec.word((2,)).map.trace().imag) > 0.5
    assert cfg.spec.model_map((2,)).trace().imag == pytest.approx(0)


def test_recipe_and_generators_are_exclusive():
    with pytest.raises(ConfigError):
        config_from_dict(values(recipe={'ta': 3, 'tb': 3}))


def test_recipe_builds_two_generators():
    raw = values(recipe={'ta': 3, 'tb': [3, 0.4]})
    raw['generators'] = []
    cfg = config_from_dict(raw)
    assert cfg.spec.rank == 2
    assert cfg.spec.word((2,)).map.trace() == pytest.approx(3 + 0.4j)


def test_invalid_values_are_rejected():
    with pytest.raises(ConfigError):
        config_from_dict(values(viewport=[1, -1, -1, 1]))
    with pytest.raises(ConfigError):
        config_from_dict(values(uniform={'side': 'left'}))
    with pytest.raises(ConfigError):
        config_from_dict(values(tolerances={'tau_bump': -1}))
    with pytest.raises(ConfigError):
        config_from_dict(values(generators=[{'label': 'a', 'matrix': [1, 0, 0]}]))


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / 'absent.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"schema": 1,')
    with pytest.raises(ConfigError):
        load_run_config(broken)
    good = tmp_path / 'good.json'
    good.write_text(json.dumps(values()))
    assert load_run_config(good).name == 'baseline'
