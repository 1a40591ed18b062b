"""
Components of the domain of discontinuity.

Regions come from a two-chart flood fill of the limit sample. Each tracked region
becomes a ComponentRecord carrying its boundary quasicircle, an interior witness and
the enumerated words that stabilize it.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..geometry.group import closure_maps, enumerate_words, reduce_generators, stabilizer_membership
from ..geometry.moebius import MapSet, MoebiusMap
from ..geometry.pointsets import as_points, dedupe, near_mask
from ..geometry.raster import SphereRaster
from ..utils.errors import OrderingFailed, UntrackedRegion
from ..utils.tolerances import Tolerances
from .limitset import Quasicircle, quasicircle_from_points

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 128
DEFAULT_STABILIZER_DEPTH = 6
# Boundary samples are thinned to this share of tau_bump
THINNING = 0.2


@dataclass
class ComponentRecord:
    """A tracked component of the domain of discontinuity."""
    id: int
    stabilizer_generators: list
    quasicircle: Quasicircle
    interior_witness: complex
    raster_region_id: int = None
    pixel_count: int = 0
    stabilizer_depth: int = 0

    @property
    def stabilizer_maps(self):
        return [w.map for w in self.stabilizer_generators]


@dataclass
class RegionScan:
    """Result of ``detect_components``."""
    raster: SphereRaster
    regions: list
    untracked: list
    stable: bool = None
    doubled_count: int = None
    demoted: list = field(default_factory=list)

    @property
    def resolution(self):
        return self.raster.resolution


def make_record(cid, boundary, witness, stabilizers=(), pole=None, words=None):
    """
    Build a record from an explicit boundary sample, ordering it when possible.

    Useful for components known in closed form.
    """
    points = as_points(boundary)
    try:
        q = quasicircle_from_points(points, words, pole)
    except OrderingFailed as e:
        logger.warning(f"Component {cid}: {str(e)}; keeping unordered boundary sample")
        q = Quasicircle(points, pole, 1, False, list(words or []))
    return ComponentRecord(cid, list(stabilizers), q, complex(witness))


def detect_components(sample, resolution=DEFAULT_RESOLUTION, check_stability=True):
    """
    Flood-fill the complement of a limit sample on the sphere.

    Parameters:
    -----------
    sample : LimitSample or array of complex
        The limit sample.
    resolution : int
        Pixels per chart side.
    check_stability : bool
        Also count tracked regions at twice the resolution and report whether the
        count is unchanged.

    Returns:
    --------
    RegionScan
    """
    points = sample.points if hasattr(sample, 'points') else as_points(sample)
    raster = SphereRaster(points, resolution)
    tracked = raster.tracked
    untracked = [r for r in raster.regions if not r.tracked]
    scan = RegionScan(raster, tracked, untracked)
    if check_stability:
        doubled = len(SphereRaster(points, 2 * resolution).tracked)
        scan.doubled_count = doubled
        scan.stable = doubled == len(tracked)
        if not scan.stable:
            logger.warning(f"Tracked region count changes from {len(tracked)} to {doubled} "
                           f"when resolution doubles to {2 * resolution}")
    logger.info(f"Detected {len(tracked)} tracked regions ({len(untracked)} untracked) "
                f"at resolution {resolution}")
    return scan


def find_stabilizers(record, spec, depth, tol=None, threads=1, raster=None):
    """
    Words up to ``depth`` stabilizing ``record``, reduced to a small generating list.

    Words already in the bounded closure of the accepted ones are not tested. With a
    raster, a word sending the witness into another tracked region is rejected
    without the sample test.
    """
    tol = tol or Tolerances()
    singles = spec.generator_words()
    if all(stabilizer_membership(g, record, tol) for g in singles):
        logger.info(f"Component {record.id}: every generator stabilizes it")
        return singles
    words = enumerate_words(spec, depth, threads=threads)
    accepted = []
    closure = MapSet([MoebiusMap.identity()])
    rid = record.raster_region_id
    tracked_ids = {r.id for r in raster.tracked} if raster is not None else set()
    for w in words:
        if w.is_empty or w.map in closure:
            continue
        if raster is not None and rid is not None:
            target = raster.region_of(w.map(record.interior_witness))
            if target is not None and target != rid and target in tracked_ids:
                continue
        if stabilizer_membership(w, record, tol):
            accepted.append(w)
            closure = closure_maps([a.map for a in accepted])
    gens = reduce_generators(accepted)
    logger.info(f"Component {record.id}: {len(gens)} stabilizer generators "
                f"from {len(words)} words (depth {depth})")
    return gens


def assign_stabilizers(scan, sample, spec, depth=DEFAULT_STABILIZER_DEPTH, tol=None,
                       threads=1, strict=True):
    """
    ComponentRecords for the tracked regions of ``scan``.

    The boundary of a region is the set of sample points whose wall stamp touches it;
    its stabilizer generators are found with ``find_stabilizers``.

    Raises
    ------
    UntrackedRegion
        With ``strict``, when a tracked region has fewer than ``n_min`` boundary
        points. Otherwise such regions are demoted and listed on the scan.
    """
    tol = tol or Tolerances()
    records = []
    points = sample.points
    for region in scan.regions:
        mask = scan.raster.adjacent_mask(points, region.id)
        idx = np.flatnonzero(mask)
        idx = idx[dedupe(points[idx], THINNING * tol.tau_bump)]
        if len(idx) < tol.n_min:
            message = (f"Region {region.id} has {len(idx)} boundary points "
                       f"(need {tol.n_min}) at resolution {scan.resolution}")
            if strict:
                raise UntrackedRegion(message)
            logger.warning(message)
            scan.demoted.append(region)
            continue
        record = make_record(len(records), points[idx], region.witness,
                             words=[sample.words[i] for i in idx])
        record.raster_region_id = region.id
        record.pixel_count = region.pixel_count
        record.stabilizer_depth = depth
        record.stabilizer_generators = find_stabilizers(record, spec, depth, tol, threads, scan.raster)
        records.append(record)
    return records


def bump_candidates(c1, c2, tol=None):
    """Points of c1's boundary sample within ``tau_bump`` of c2's boundary sample."""
    tol = tol or Tolerances()
    p1 = as_points(c1.quasicircle.points)
    return p1[near_mask(p1, c2.quasicircle.points, tol.tau_bump)]
