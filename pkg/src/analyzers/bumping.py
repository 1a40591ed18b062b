"""
Bumping sets of component collections.

The algebraic side is the limit set of the common stabilizer (sampled like any other
limit set); the numeric side is the part of one component's boundary sample lying
within ``tau_bump`` of every other one. The two must agree within ``2 * tau_bump``.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..geometry.group import closure_maps, enumerate_words, reduce_generators, stabilizer_membership
from ..geometry.moebius import MapSet, MoebiusMap
from ..geometry.pointsets import as_points, clusters, diameter, hausdorff, near_mask, one_sided_hausdorff, representative
from ..utils.errors import EmptyGroup, Inconsistent
from ..utils.tolerances import Tolerances
from .components import bump_candidates
from .limitset import DEFAULT_PRUNE_EPS, compute_limit

logger = logging.getLogger(__name__)

TWO_POINT = 'TwoPoint'
INFINITE_PROPER = 'InfiniteProper'
FULL_BOUNDARY = 'FullBoundary'
# Internal classes, never reported
EMPTY = 'Empty'
ONE_POINT = 'OnePoint'

REPORTED_CLASSES = (TWO_POINT, INFINITE_PROPER, FULL_BOUNDARY)


@dataclass
class BumpRecord:
    """A bumping collection with its sampled bump set."""
    component_ids: list
    bump_points: np.ndarray
    cardinality_class: str
    common_stabilizer_words: list
    numeric_points: np.ndarray = None
    validation_distance: float = 0.0
    pair: tuple = None
    depth: int = 0
    stabilizer_words: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.component_ids)


def common_stabilizer(c1, c2, spec, depth, tol=None, threads=1):
    """Enumerated words up to ``depth`` stabilizing both records, reduced to generators."""
    tol = tol or Tolerances()
    singles = spec.generator_words()
    if all(stabilizer_membership(g, c1, tol) and stabilizer_membership(g, c2, tol) for g in singles):
        logger.info(f"Every generator stabilizes components {c1.id} and {c2.id}")
        return singles
    accepted = []
    closure = MapSet([MoebiusMap.identity()])
    for w in enumerate_words(spec, depth, threads=threads):
        if w.is_empty or w.map in closure:
            continue
        if stabilizer_membership(w, c1, tol) and stabilizer_membership(w, c2, tol):
            accepted.append(w)
            closure = closure_maps([a.map for a in accepted])
    gens = reduce_generators(accepted)
    logger.info(f"Common stabilizer of components {c1.id} and {c2.id}: "
                f"{len(gens)} generators at depth {depth}")
    return gens


def _algebraic_points(spec, words, depth, prune_eps, tol, threads, cusp_fill=0):
    if not words:
        return as_points([])
    sub = spec.subgroup(words)
    try:
        return compute_limit(sub, depth, prune_eps, tol, threads, cusp_fill).points
    except EmptyGroup:
        return as_points([])


def _intersect(samples, tol):
    base = as_points(samples[0])
    keep = np.ones(len(base), dtype=bool)
    for other in samples[1:]:
        keep &= near_mask(base, other, tol)
    return base[keep]


def classify_bump(points, collection, tol):
    """
    Cardinality class of a bump sample and, for two points, the pair.

    Two clusters of diameter ≤ 3·tau_bump make a TwoPoint bump, one makes OnePoint;
    a sample tau_gap-dense in every boundary is FullBoundary; anything else is
    InfiniteProper.
    """
    z = as_points(points)
    if len(z) == 0:
        return EMPTY, None
    limit = 3 * tol.tau_bump
    groups = clusters(z, limit)
    small = all(diameter(z[g]) <= limit for g in groups)
    if small and len(groups) == 1:
        return ONE_POINT, (representative(z),)
    if small and len(groups) == 2:
        return TWO_POINT, tuple(representative(z[g]) for g in groups)
    if all(one_sided_hausdorff(c.quasicircle.points, z) <= tol.tau_gap for c in collection):
        return FULL_BOUNDARY, None
    return INFINITE_PROPER, None


def bump_set(collection, spec, depth, tol=None, threads=1, prune_eps=DEFAULT_PRUNE_EPS,
             stabilizers=None, limit_depth=None, cusp_fill=0):
    """
    Bump record of a collection of at least two components.

    Parameters:
    -----------
    collection : list of ComponentRecord
        The components, at least two.
    spec : GroupSpec
        The group.
    depth : int
        Search depth for common stabilizers.
    limit_depth : int, optional
        Depth of the subgroup limit samples, ``depth`` when omitted.
    cusp_fill : int
        Cusp filling for the subgroup limit samples.
    stabilizers : dict, optional
        Cache of common stabilizer words keyed by component id pairs.

    Raises
    ------
    Inconsistent
        If the algebraic and numeric bump samples are more than 2·tau_bump apart, or
        a collection of more than two components does not bump in two points.
    """
    tol = tol or Tolerances()
    if len(collection) < 2:
        raise ValueError("A bumping collection needs at least two components")
    stabilizers = stabilizers if stabilizers is not None else {}

    algebraic, numeric, words_by_pair = [], [], {}
    for c1, c2 in combinations(collection, 2):
        key = (c1.id, c2.id)
        if key not in stabilizers:
            stabilizers[key] = common_stabilizer(c1, c2, spec, depth, tol, threads)
        words_by_pair[key] = stabilizers[key]
        algebraic.append(_algebraic_points(spec, stabilizers[key], limit_depth or depth, prune_eps,
                                           tol, threads, cusp_fill))
    first = collection[0]
    numeric = _intersect([bump_candidates(first, collection[1], tol)] +
                         [c.quasicircle.points for c in collection[2:]], tol.tau_bump)
    alg = _intersect(algebraic, tol.tau_bump) if all(len(a) for a in algebraic) else as_points([])

    ids = [c.id for c in collection]
    distance = hausdorff(alg, numeric)
    if (len(alg) == 0) != (len(numeric) == 0) or distance > 2 * tol.tau_bump:
        raise Inconsistent(
            f"Bump sets of components {ids} disagree: {len(alg)} algebraic vs "
            f"{len(numeric)} numeric points, Hausdorff distance {distance:.3g}",
            algebraic=alg, numeric=numeric, distance=distance)

    kind, pair = classify_bump(alg if len(alg) else numeric, collection, tol)
    if len(collection) > 2 and kind not in (TWO_POINT, EMPTY, ONE_POINT):
        raise Inconsistent(f"Collection {ids} of {len(collection)} components bumps in a "
                           f"{kind} set; more than two components can only share two points",
                           algebraic=alg, numeric=numeric, distance=distance)

    common = words_by_pair[(collection[0].id, collection[1].id)]
    logger.info(f"Bump of components {ids}: {kind}, {len(alg)} algebraic points, "
                f"validation distance {distance:.3g}")
    return BumpRecord(ids, alg if len(alg) else numeric, kind, list(common), numeric,
                      distance, pair, depth, dict(words_by_pair))


def maximal_collections(components, spec, depth, tol=None, threads=1, prune_eps=DEFAULT_PRUNE_EPS,
                        limit_depth=None, cusp_fill=0):
    """
    Inclusion-maximal bumping collections with at least two bump points.

    Each bumping pair is extended greedily by every component whose boundary contains
    all of the pair's bump points; Empty and OnePoint collections are dropped. A
    candidate whose algebraic and numeric bump sets disagree is logged and skipped.
    """
    tol = tol or Tolerances()
    if len(components) < 2:
        raise ValueError("Need at least two tracked components")
    cache = {}
    by_id = {c.id: c for c in components}
    seen = set()
    records = []
    skipped = 0
    for c1, c2 in combinations(components, 2):
        try:
            pair_record = bump_set([c1, c2], spec, depth, tol, threads, prune_eps, cache,
                                   limit_depth, cusp_fill)
        except Inconsistent as e:
            logger.warning(f"Skipping components {[c1.id, c2.id]}: {str(e)}")
            skipped += 1
            continue
        if pair_record.cardinality_class not in REPORTED_CLASSES:
            continue
        members = [c1.id, c2.id]
        for c in components:
            if c.id in members:
                continue
            if np.all(near_mask(pair_record.bump_points, c.quasicircle.points, tol.tau_bump)):
                members.append(c.id)
        key = frozenset(members)
        if key in seen:
            continue
        seen.add(key)
        if len(members) == 2:
            records.append(pair_record)
            continue
        collection = [by_id[i] for i in sorted(members)]
        try:
            records.append(bump_set(collection, spec, depth, tol, threads, prune_eps, cache,
                                    limit_depth, cusp_fill))
        except Inconsistent as e:
            # the pair itself was consistent; keep it unextended
            logger.warning(f"Keeping components {[c1.id, c2.id]} unextended, "
                           f"collection {sorted(members)} failed: {str(e)}")
            skipped += 1
            if frozenset([c1.id, c2.id]) not in seen:
                seen.add(frozenset([c1.id, c2.id]))
                records.append(pair_record)
    records.sort(key=lambda r: sorted(r.component_ids))
    logger.info(f"{len(records)} maximal bumping collections among {len(components)} components"
                f"{f', {skipped} inconsistent candidates skipped' if skipped else ''}")
    return records
