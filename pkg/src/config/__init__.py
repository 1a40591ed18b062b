"""
Configuration Module

Run configurations for the analyzer, plus the example configurations shipped with it:
- fuchsian_baseline.json: two real generators with a parabolic commutator
- quasi_fuchsian_torus.json: a quasi-Fuchsian punctured torus built from traces
- adjoined_root.json: a punctured torus bent about the axis of a, with a twisted
  square root of a adjoined
"""

import copy
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field

from ..geometry.group import MAX_DEPTH, GroupSpec, adjoin_sqrt, grandma_recipe
from ..geometry.moebius import MoebiusMap
from ..utils.errors import ConfigError
from ..utils.matching import unknown_key_message
from ..utils.tolerances import Tolerances

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

DEFAULTS = {
    'schema': SCHEMA_VERSION,
    'name': '',
    'generators': [],
    'recipe': None,
    'adjunctions': [],
    'fuchsian_model': {},
    'assumptions': [],
    'depth': 12,
    'prune_eps': 1e-4,
    'stabilizer_depth': 6,
    # None: two less than 'depth'
    'bump_depth': None,
    'cusp_fill': 0,
    'resolutions': {'components': 128, 'render': [512, 512], 'uniform': 128},
    'viewport': [-2.0, 2.0, -2.0, 2.0],
    'tolerances': {},
    'uniform': {'n_pairs': 200, 'translates': 6, 'side': 'inside', 'component': 0, 'translate': None},
    'outputs': {'image': 'limit.ppm', 'png': False},
    'threads': 1,
    'seed': 0,
}

NESTED_KEYS = {
    'resolutions': ('components', 'render', 'uniform'),
    'uniform': ('n_pairs', 'translates', 'side', 'component', 'translate'),
    'outputs': ('image', 'png'),
    'recipe': ('ta', 'tb', 'root'),
}
GENERATOR_KEYS = ('label', 'matrix')
ADJUNCTION_KEYS = ('label', 'twist')
DEPTH_KEYS = ('depth', 'stabilizer_depth', 'bump_depth')
# Common-stabilizer search runs this much shallower than the limit set by default
BUMP_DEPTH_OFFSET = 2

# Not part of the configuration hash: thread count does not change any result
UNHASHED_KEYS = ('threads',)


@dataclass
class RunConfig:
    """A validated run configuration."""
    spec: GroupSpec
    name: str
    depth: int
    prune_eps: float
    stabilizer_depth: int
    bump_depth: int
    cusp_fill: int
    resolutions: dict
    viewport: tuple
    tolerances: Tolerances
    uniform: dict
    outputs: dict
    threads: int
    seed: int
    assumptions: list = field(default_factory=list)
    config_hash: str = ''
    source: str = None
    values: dict = field(default_factory=dict)

    @property
    def depths(self):
        return {key: getattr(self, key) for key in DEPTH_KEYS}


def _check_keys(values, allowed, where):
    if not isinstance(values, dict):
        raise ConfigError(f"{where} must be an object, got {type(values).__name__}")
    for key in values:
        if key not in allowed:
            raise ConfigError(unknown_key_message(key, allowed, where))


def parse_complex(value, where):
    """``[re, im]`` or a plain number."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    raise ConfigError(f"{where} must be a number or [re, im], got {value!r}")


def parse_matrix(value, where):
    """Eight reals ``[a_re, a_im, ..., d_im]`` or four ``[re, im]`` pairs."""
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{where} must be a list, got {value!r}")
    try:
        if len(value) == 8 and all(not isinstance(x, (list, tuple)) for x in value):
            return MoebiusMap.from_real8(value)
        if len(value) == 4:
            a, b, c, d = (parse_complex(x, where) for x in value)
            return MoebiusMap.from_entries(a, b, c, d)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {str(e)}")
    raise ConfigError(f"{where} must hold 8 reals or 4 [re, im] pairs")


def _positive_int(value, where, upper=None):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{where} must be a positive integer, got {value!r}")
    if upper is not None and value > upper:
        raise ConfigError(f"{where} must be at most {upper}, got {value}")
    return value


def _merge(values):
    merged = copy.deepcopy(DEFAULTS)
    for key, value in values.items():
        if key in NESTED_KEYS and key != 'recipe' and isinstance(value, dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return merged


def build_group(values):
    """GroupSpec of a merged configuration: generators or recipe, model, then adjunctions."""
    recipe = values.get('recipe')
    if recipe is not None:
        if values['generators']:
            raise ConfigError("Give either 'generators' or 'recipe', not both")
        _check_keys(recipe, NESTED_KEYS['recipe'], 'recipe')
        root = recipe.get('root', 'minus')
        if root not in ('minus', 'plus'):
            raise ConfigError(f"recipe.root must be 'minus' or 'plus', got {root!r}")
        a, b = grandma_recipe(parse_complex(recipe.get('ta'), 'recipe.ta'),
                              parse_complex(recipe.get('tb'), 'recipe.tb'), root)
        generators = (('a', a), ('b', b))
    else:
        if not values['generators']:
            raise ConfigError("The configuration needs 'generators' or 'recipe'")
        generators = []
        for i, entry in enumerate(values['generators']):
            _check_keys(entry, GENERATOR_KEYS, f"generators[{i}]")
            if 'label' not in entry or 'matrix' not in entry:
                raise ConfigError(f"generators[{i}] needs 'label' and 'matrix'")
            generators.append((str(entry['label']), parse_matrix(entry['matrix'], f"generators[{i}].matrix")))
        generators = tuple(generators)

    model = {}
    _check_keys(values['fuchsian_model'], [label for label, _ in generators], 'fuchsian_model')
    for label, matrix in values['fuchsian_model'].items():
        model[label] = parse_matrix(matrix, f"fuchsian_model.{label}")

    spec = GroupSpec(generators, fuchsian_model=model, name=str(values.get('name', '')))
    for i, entry in enumerate(values['adjunctions']):
        _check_keys(entry, ADJUNCTION_KEYS, f"adjunctions[{i}]")
        if 'label' not in entry:
            raise ConfigError(f"adjunctions[{i}] needs 'label'")
        try:
            spec = adjoin_sqrt(spec, entry['label'], twist=bool(entry.get('twist', False)))
        except ConfigError:
            raise
        except Exception as e:
            raise ConfigError(f"adjunctions[{i}]: {str(e)}")
    return spec


def validate(values):
    """Check a merged configuration, raising ConfigError on the first problem."""
    if values['schema'] != SCHEMA_VERSION:
        raise ConfigError(f"Unsupported schema {values['schema']!r}; expected {SCHEMA_VERSION}")
    for key in DEPTH_KEYS:
        _positive_int(values[key], key, MAX_DEPTH)
    if isinstance(values['cusp_fill'], bool) or not isinstance(values['cusp_fill'], int) or values['cusp_fill'] < 0:
        raise ConfigError(f"cusp_fill must be a non-negative integer, got {values['cusp_fill']!r}")
    if not isinstance(values['prune_eps'], (int, float)) or values['prune_eps'] <= 0:
        raise ConfigError(f"prune_eps must be positive, got {values['prune_eps']!r}")
    for key in ('resolutions', 'uniform', 'outputs'):
        _check_keys(values[key], NESTED_KEYS[key], key)
    res = values['resolutions']
    _positive_int(res['components'], 'resolutions.components')
    _positive_int(res['uniform'], 'resolutions.uniform')
    if not isinstance(res['render'], (list, tuple)) or len(res['render']) != 2:
        raise ConfigError(f"resolutions.render must be [width, height], got {res['render']!r}")
    for x in res['render']:
        _positive_int(x, 'resolutions.render')
    vp = values['viewport']
    if not isinstance(vp, (list, tuple)) or len(vp) != 4 or not (vp[0] < vp[1] and vp[2] < vp[3]):
        raise ConfigError(f"viewport must be [xmin, xmax, ymin, ymax] with xmin < xmax, ymin < ymax")
    uni = values['uniform']
    _positive_int(uni['n_pairs'], 'uniform.n_pairs')
    _positive_int(uni['translates'], 'uniform.translates')
    if uni['side'] not in ('inside', 'outside'):
        raise ConfigError(f"uniform.side must be 'inside' or 'outside', got {uni['side']!r}")
    if isinstance(uni['component'], bool) or not isinstance(uni['component'], int) or uni['component'] < 0:
        raise ConfigError(f"uniform.component must be a non-negative integer")
    _positive_int(values['threads'], 'threads')
    if isinstance(values['seed'], bool) or not isinstance(values['seed'], int):
        raise ConfigError(f"seed must be an integer, got {values['seed']!r}")
    if not isinstance(values['assumptions'], list):
        raise ConfigError("assumptions must be a list of strings")


def config_hash(values):
    """SHA-256 of the canonical JSON of a validated configuration."""
    hashed = {k: v for k, v in values.items() if k not in UNHASHED_KEYS}
    text = json.dumps(hashed, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def resolve_path(path):
    """Existing path as given, or the same name inside this package directory."""
    if os.path.exists(path):
        return path
    current_dir = os.path.dirname(os.path.abspath(__file__))
    candidate = os.path.join(current_dir, path)
    if os.path.exists(candidate):
        return candidate
    raise ConfigError(f"Configuration file not found: {path}")


def config_from_dict(values, overrides=None, source=None):
    """
    Build a RunConfig from a raw mapping.

    Parameters:
    -----------
    values : dict
        Parsed configuration.
    overrides : dict, optional
        Top-level values taking precedence (command-line flags); None entries are ignored.
    """
    _check_keys(values, list(DEFAULTS), 'configuration')
    merged = _merge(values)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in DEFAULTS:
            raise ConfigError(unknown_key_message(key, list(DEFAULTS), 'overrides'))
        merged[key] = value
    if merged['bump_depth'] is None and isinstance(merged['depth'], int):
        merged['bump_depth'] = max(1, merged['depth'] - BUMP_DEPTH_OFFSET)
    validate(merged)
    tolerances = Tolerances.from_mapping(merged['tolerances'])
    spec = build_group(merged)
    res = merged['resolutions']
    cfg = RunConfig(
        spec=spec,
        name=str(merged['name']),
        depth=merged['depth'],
        prune_eps=float(merged['prune_eps']),
        stabilizer_depth=merged['stabilizer_depth'],
        bump_depth=merged['bump_depth'],
        cusp_fill=merged['cusp_fill'],
        resolutions={'components': res['components'], 'render': tuple(res['render']), 'uniform': res['uniform']},
        viewport=tuple(float(x) for x in merged['viewport']),
        tolerances=tolerances,
        uniform=dict(merged['uniform']),
        outputs=dict(merged['outputs']),
        threads=merged['threads'],
        seed=merged['seed'],
        assumptions=[str(a) for a in merged['assumptions']],
        config_hash=config_hash(merged),
        source=source,
        values=merged,
    )
    logger.info(f"Loaded configuration '{cfg.name}' ({cfg.spec.rank} generators, "
                f"depth {cfg.depth}, hash {cfg.config_hash[:12]})")
    return cfg


def load_run_config(path, overrides=None):
    """
    Load and validate a JSON run configuration.

    Relative names not found from the working directory are looked up in this
    package directory, so ``fuchsian_baseline.json`` finds the shipped example.

    Raises
    ------
    ConfigError
        Missing file, invalid JSON, unknown keys or invalid values.
    """
    resolved = resolve_path(str(path))
    try:
        with open(resolved, 'r', encoding='utf-8') as f:
            values = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in configuration file {resolved}: {str(e)}")
    return config_from_dict(values, overrides, source=resolved)


__all__ = ['RunConfig', 'load_run_config', 'config_from_dict', 'parse_matrix', 'config_hash']
