"""
Report writers: JSON analysis reports and pandas CSV diagnostics.

Every JSON report carries ``schema`` and ``group`` (the configuration hash) and is
written with sorted keys, so a fixed configuration gives byte-identical files.
"""

import json
import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from ..geometry.moebius import is_inf
from ..utils.errors import ConfigError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
# Digits kept for floats in reports
DIGITS = 12


def point_to_json(p):
    """``[re, im]`` for a finite point, the string ``"inf"`` for ∞."""
    p = complex(p)
    if is_inf(p):
        return 'inf'
    return [round(p.real, DIGITS), round(p.imag, DIGITS)]


def points_to_json(points):
    return [point_to_json(p) for p in np.asarray(points, dtype=complex).ravel()]


def number_to_json(x):
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return 'nan'
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return round(x, DIGITS)


def _words(words, spec=None):
    return [w.text(spec) if spec is not None else list(w.letters) for w in words]


def _envelope(group, assumptions=(), depths=None, tolerances=None):
    return {
        'schema': SCHEMA_VERSION,
        'group': group,
        'assumptions': list(assumptions),
        'depths': dict(depths or {}),
        'tolerances': dict(tolerances or {}),
    }


def write_json(report, path):
    """Write a report dictionary deterministically; returns the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(report, f, sort_keys=True, indent=2)
        f.write('\n')
    logger.info(f"Wrote report {path}")
    return path


def load_report(path):
    """
    Read a report back and check its schema version.

    Raises
    ------
    ConfigError
        If the file is not a JSON object with ``schema == 1``.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            report = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON in report {path}: {str(e)}")
    if not isinstance(report, dict) or report.get('schema') != SCHEMA_VERSION:
        raise ConfigError(f"Report {path} does not carry schema {SCHEMA_VERSION}")
    return report


def piece_to_dict(piece):
    entry = {
        'kind': piece.kind,
        'n': piece.n,
        'm': piece.m,
        'boundary_annuli': piece.boundary_annuli,
        'curve_classes': list(piece.curve_classes),
        'bump': {
            'points': points_to_json(piece.bump.bump_points) if piece.bump is not None else [],
            'class': piece.bump.cardinality_class if piece.bump is not None else None,
        },
    }
    if piece.w is not None:
        entry['w'] = piece.w
    if piece.twisted is not None:
        entry['twisted'] = bool(piece.twisted)
    if piece.self_match:
        entry['self_match'] = True
    if piece.cyclic_order:
        entry['cyclic_order'] = list(piece.cyclic_order)
    return entry


def decomposition_to_dict(d, group='', assumptions=(), depths=None, tolerances=None):
    report = _envelope(group, assumptions, depths, tolerances)
    report['pieces'] = [piece_to_dict(p) for p in d.pieces]
    report['untracked_regions'] = list(d.untracked_regions)
    return report


def emit_decomposition(d, path, group='', assumptions=(), depths=None, tolerances=None):
    """Write the decomposition report; an empty decomposition gives an empty piece list."""
    return write_json(decomposition_to_dict(d, group, assumptions, depths, tolerances), path)


def component_to_dict(record, spec=None):
    return {
        'id': record.id,
        'stabilizer_generators': _words(record.stabilizer_generators, spec),
        'boundary_points': len(record.quasicircle),
        'ordered': bool(record.quasicircle.ordered),
        'interior_witness': point_to_json(record.interior_witness),
        'raster_region_id': record.raster_region_id,
        'pixel_count': int(record.pixel_count),
        'stabilizer_depth': record.stabilizer_depth,
    }


def emit_components(records, path, group='', spec=None, untracked=(), stable=None, **meta):
    report = _envelope(group, **meta)
    report['components'] = [component_to_dict(r, spec) for r in records]
    report['untracked_regions'] = list(untracked)
    report['stable_under_doubling'] = stable
    return write_json(report, path)


def bump_to_dict(bump, spec=None):
    return {
        'component_ids': list(bump.component_ids),
        'class': bump.cardinality_class,
        'points': points_to_json(bump.bump_points),
        'numeric_points': len(bump.numeric_points) if bump.numeric_points is not None else 0,
        'common_stabilizer': _words(bump.common_stabilizer_words, spec),
        'validation_distance': number_to_json(bump.validation_distance),
        'pair': points_to_json(bump.pair) if bump.pair else None,
    }


def emit_bumps(bumps, path, group='', spec=None, **meta):
    report = _envelope(group, **meta)
    report['bumps'] = [bump_to_dict(b, spec) for b in bumps]
    return write_json(report, path)


def core_to_dict(core):
    checks = {}
    for cid, outcome in core.check_report.items():
        checks[str(cid)] = {k: (bool(v) if isinstance(v, (bool, np.bool_)) else number_to_json(v))
                            for k, v in outcome.items()}
    return {
        'component_id': core.component_id,
        'quotient_kind': core.quotient_kind,
        'boundary_geodesics': [[number_to_json(g.start), number_to_json(g.end)]
                               for g in core.boundary_geodesics],
        'image_curve_classes': list(core.image_curve_classes),
        'classes': [list(c) for c in core.classes],
        'checks': checks,
        'thickened': bool(core.thickened),
    }


def emit_nielsen(entries, path, group='', **meta):
    """``entries`` is a list of ``(bump_component_ids, NielsenCoreResult)``."""
    report = _envelope(group, **meta)
    report['cores'] = [dict(core_to_dict(core), bump=list(ids)) for ids, core in entries]
    return write_json(report, path)


def emit_uniform(estimate, path, group='', series=None, **meta):
    report = _envelope(group, **meta)
    report['a_hat'] = number_to_json(estimate.a_hat)
    report['b_hat'] = number_to_json(estimate.b_hat)
    report['witness_a'] = points_to_json(estimate.witness_a)
    report['witness_b'] = points_to_json(estimate.witness_b)
    report['n_pairs'] = estimate.n_pairs
    report['resolution'] = estimate.resolution
    report['bounds'] = 'lower'
    if series is not None:
        report['translates'] = {
            'b_hat': [number_to_json(b) for b in series.b_hat],
            'a_hat': [number_to_json(a) for a in series.a_hat],
            'chart': points_to_json(series.chart.entries) if series.chart is not None else None,
            'window_radius': number_to_json(series.window_radius),
        }
    return write_json(report, path)


def _write_csv(df, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    logger.info(f"Saved {len(df)} rows to {path}")
    return path


def write_uniform_pairs_csv(estimate, path):
    return _write_csv(pd.DataFrame(estimate.pairs), path)


def write_limit_csv(sample, path):
    z = np.asarray(sample.points, dtype=complex)
    inf = np.array([is_inf(p) for p in z], dtype=bool)
    df = pd.DataFrame({
        're': np.where(inf, np.nan, z.real),
        'im': np.where(inf, np.nan, z.imag),
        'is_inf': inf,
        'word_length': sample.word_lengths,
        'tag': list(sample.tags),
    })
    return _write_csv(df, path)


def write_components_csv(records, path, spec=None):
    rows = []
    for r in records:
        for w in r.stabilizer_generators or [None]:
            rows.append({
                'component_id': r.id,
                'pixel_count': int(r.pixel_count),
                'boundary_points': len(r.quasicircle),
                'stabilizer_word': (w.text(spec) if spec is not None else str(w.letters)) if w else '',
                'word_length': len(w) if w else 0,
            })
    columns = ['component_id', 'pixel_count', 'boundary_points', 'stabilizer_word', 'word_length']
    return _write_csv(pd.DataFrame(rows, columns=columns), path)
