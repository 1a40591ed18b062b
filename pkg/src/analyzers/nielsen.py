"""
Nielsen cores in the Fuchsian model.

Boundary points of a component are carried to the unit circle through the Fuchsian
model of its stabilizer: fixed points of the real model maps are sent to angles by
the Cayley transform θ = 2·atan2(1, -x) (θ = 0 is ∞, θ = π is 0). The convex hull
of a circle subset is bounded by one geodesic per large complementary gap.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..geometry.group import GroupSpec, enumerate_words, stabilizer_membership
from ..geometry.moebius import INF, PARABOLIC, MoebiusMap, classify, fixed_points, is_inf
from ..geometry.pointsets import near_mask
from ..utils.errors import CheckFailed, NoFuchsianModel, TooSparse
from ..utils.tolerances import Tolerances
from .bumping import FULL_BOUNDARY

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

SIMPLE_CLOSED_GEODESIC = 'SimpleClosedGeodesic'
SUBSURFACE = 'SubsurfaceWithGeodesicBoundary'
WHOLE_SURFACE = 'WholeSurface'

CHECK_SIMPLE = 'simple'
CHECK_NONACCUMULATING = 'nonaccumulating'
CHECK_CUSP = 'cusp'

# Orbit geodesics shorter than this (or half the tested span) are ignored
SPAN_FLOOR = 0.5


def angle_of(x):
    """Circle angle of a point of ℝ ∪ ∞."""
    if is_inf(x):
        return 0.0
    return (2.0 * math.atan2(1.0, -float(np.real(x)))) % TWO_PI


def point_of(theta):
    """Inverse of ``angle_of``."""
    theta = theta % TWO_PI
    if theta == 0.0:
        return INF
    return complex(-1.0 / math.tan(theta / 2.0))


def model_apply(m, theta):
    return angle_of(m(point_of(theta)))


def circular_distance(a, b):
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


@dataclass
class CircleSubset:
    """
    Sorted angles, plus the words whose model fixed points produced them.

    ``dense`` marks the pullback of a full boundary.
    """
    angles: np.ndarray
    dense: bool = False
    sources: list = field(default_factory=list)

    def __len__(self):
        return len(self.angles)

    @classmethod
    def from_angles(cls, angles, tau_ang=1e-6, dense=False, sources=()):
        a = np.sort(np.asarray(angles, dtype=float) % TWO_PI)
        merged = []
        for t in a:
            if not merged or t - merged[-1] > tau_ang:
                merged.append(t)
        if len(merged) > 1 and merged[0] + TWO_PI - merged[-1] <= tau_ang:
            merged.pop()
        return cls(np.array(merged), dense, list(sources))


@dataclass(frozen=True)
class Geodesic:
    """A geodesic of the disc, stored with sorted endpoint angles."""
    start: float
    end: float

    @classmethod
    def between(cls, a, b, tau_ang=1e-6):
        a, b = a % TWO_PI, b % TWO_PI
        if circular_distance(a, b) <= tau_ang:
            raise ValueError(f"Geodesic endpoints {a} and {b} coincide")
        return cls(min(a, b), max(a, b))

    @property
    def endpoints(self):
        return (self.start, self.end)

    @property
    def span(self):
        return min(self.end - self.start, TWO_PI - (self.end - self.start))

    def image(self, m):
        a, b = model_apply(m, self.start), model_apply(m, self.end)
        return Geodesic(min(a, b), max(a, b))

    def distance(self, other):
        """Largest endpoint displacement under the better of the two endpoint matchings."""
        straight = max(circular_distance(self.start, other.start), circular_distance(self.end, other.end))
        crossed = max(circular_distance(self.start, other.end), circular_distance(self.end, other.start))
        return min(straight, crossed)


@dataclass
class NielsenCoreResult:
    """Hull boundary of a component's bump pullback, its orbit classes and check outcomes."""
    component_id: int
    boundary_geodesics: list
    quotient_kind: str
    image_curve_classes: list
    check_report: dict
    classes: list = field(default_factory=list)
    class_words: dict = field(default_factory=dict)
    thickened: bool = False


def _model_group(stab):
    if isinstance(stab, GroupSpec):
        return stab
    gens = [(f"s{i}", m) for i, m in enumerate(stab) if not m.is_identity()]
    return GroupSpec(tuple(gens))


def _orbit_maps(stab, depth, threads=1):
    group = _model_group(stab)
    if group.rank == 0:
        return [(0, MoebiusMap.identity())]
    return [(len(w), w.map) for w in enumerate_words(group, depth, threads=threads)]


def root_stabilizing_labels(spec, comp, tol=None):
    """Adjoined labels whose root itself stabilizes ``comp``."""
    labels = set()
    for label in spec.adjunctions:
        w = spec.word((spec.index(label) + 1,))
        if stabilizer_membership(w, comp, tol):
            labels.add(label)
    return labels


def stabilizer_model(comp, spec, tol=None):
    """Real model maps of the component's stabilizer generators."""
    if not spec.has_model:
        raise NoFuchsianModel(f"No Fuchsian model available for component {comp.id}")
    roots = root_stabilizing_labels(spec, comp, tol)
    return [spec.model_map(spec.root_letters(w.letters), roots) for w in comp.stabilizer_generators]


def pull_back_bump(bump, comp, spec, depth, tol=None, threads=1):
    """
    Circle subset of a bump seen from ``comp`` through the Fuchsian model.

    Every common-stabilizer word whose fixed points lie in the bump set contributes
    the fixed angles of its model image. A full-boundary bump pulls back to a dense set.

    Raises
    ------
    NoFuchsianModel
        If the group has no model or a needed word has no model image.
    """
    tol = tol or Tolerances()
    if bump.cardinality_class == FULL_BOUNDARY:
        return CircleSubset(np.zeros(0), dense=True)
    if not spec.has_model:
        raise NoFuchsianModel(f"Component {comp.id}: the group carries no Fuchsian model")
    roots = root_stabilizing_labels(spec, comp, tol)
    angles, sources = [], []
    words = bump.common_stabilizer_words
    if not words:
        return CircleSubset(np.zeros(0))
    sub = spec.subgroup(words)
    for w in enumerate_words(sub, depth, threads=threads):
        if w.is_empty or w.map.is_identity(tol.tau_tr):
            continue
        fixed = fixed_points(w.map, tol.tau_tr)
        if not np.all(near_mask(np.array(fixed, dtype=complex), bump.bump_points, tol.tau_bump)):
            continue
        letters = sub.root_letters(w.letters)
        model = spec.model_map(letters, roots)
        theta = tuple(angle_of(x) for x in fixed_points(model, tol.tau_tr))
        angles.extend(theta)
        sources.append((spec.word(letters), theta))
    subset = CircleSubset.from_angles(angles, tol.tau_ang, sources=sources)
    logger.info(f"Component {comp.id}: bump pulls back to {len(subset)} angles")
    return subset


def convex_hull_boundary(s, gap_eps=1e-3):
    """
    Boundary geodesics of the hyperbolic convex hull of a circle subset.

    One geodesic per complementary gap of width ≥ ``gap_eps``; a subset with no gap of
    ten times that width counts as dense and has an empty boundary.

    Raises
    ------
    TooSparse
        If the subset is not dense and has fewer than two points.
    """
    if s.dense:
        return []
    a = np.asarray(s.angles, dtype=float)
    if len(a) < 2:
        raise TooSparse(f"Circle subset has {len(a)} points; a hull boundary needs at least 2")
    nxt = np.roll(a, -1)
    gaps = (nxt - a) % TWO_PI
    gaps[-1] = a[0] + TWO_PI - a[-1]
    if gaps.max() < 10 * gap_eps:
        return []
    geodesics = []
    seen = set()
    for i in np.flatnonzero(gaps >= gap_eps):
        g = Geodesic.between(a[i], nxt[i], 0.0)
        if g not in seen:
            seen.add(g)
            geodesics.append(g)
    return geodesics


def _linked(g, h, tau_ang):
    inside = []
    for t in h.endpoints:
        if min(circular_distance(t, g.start), circular_distance(t, g.end)) <= tau_ang:
            return False
        inside.append(g.start < t < g.end)
    return inside[0] != inside[1]


def resolved_mask(resolved, thetas, tau_ang):
    """Which angles lie within ``tau_ang`` of a point of ``resolved`` (all of them when it is None or dense)."""
    t = np.asarray(thetas, dtype=float) % TWO_PI
    if resolved is None or resolved.dense:
        return np.ones(len(t), dtype=bool)
    a = np.asarray(resolved.angles, dtype=float)
    if len(a) == 0:
        return np.zeros(len(t), dtype=bool)
    i = np.searchsorted(a, t)
    left = np.abs(t - a[(i - 1) % len(a)]) % TWO_PI
    right = np.abs(t - a[i % len(a)]) % TWO_PI
    d = np.minimum(np.minimum(left, TWO_PI - left), np.minimum(right, TWO_PI - right))
    return d <= tau_ang


def _resolved_images(g, stab, depth, tol, resolved):
    """(word length, map, image) for every translate of ``g`` whose endpoints ``resolved`` contains."""
    out = []
    skipped = 0
    for n, m in _orbit_maps(stab, depth):
        h = g.image(m)
        if resolved_mask(resolved, h.endpoints, tol.tau_ang).all():
            out.append((n, m, h))
        else:
            skipped += 1
    if skipped:
        logger.debug(f"Geodesic ({g.start:.6f}, {g.end:.6f}): {skipped} translates end beyond the sample")
    return out


def check_simple(g, stab, depth, tol=None, resolved=None):
    """
    True iff no word up to ``depth`` moves ``g`` to a geodesic crossing it.

    With ``resolved`` (the circle subset ``g`` was hulled from), translates with an endpoint
    farther than ``tau_ang`` from the subset are left out: the sample cannot tell whether
    such an endpoint belongs to the invariant set or falls in a gap of the truncated orbit.
    """
    tol = tol or Tolerances()
    for _, m, h in _resolved_images(g, stab, depth, tol, resolved):
        if m.is_identity(tol.tau_tr):
            continue
        if _linked(g, h, tol.tau_ang):
            return False
    return True


def orbit_separation(g, stab, depth, tol=None, resolved=None):
    """
    Smallest distance between distinct orbit geodesics per word-length window.

    Only orbit geodesics with span at least min(span(g)/2, SPAN_FLOOR) count.
    With ``resolved``, translates ending beyond that subset are left out as in ``check_simple``.
    Returns a list with one entry per window 1..depth (inf when fewer than two).
    """
    tol = tol or Tolerances()
    floor = min(0.5 * g.span, SPAN_FLOOR)
    orbit = [(n, h) for n, _, h in _resolved_images(g, stab, depth, tol, resolved)]
    result = []
    for k in range(1, depth + 1):
        geos = [h for n, h in orbit if n <= k and h.span >= floor]
        result.append(_min_separation(geos, tol.tau_ang))
    return result


def _unique_geodesics(geos, tau_ang):
    pts = np.array([h.endpoints for h in geos]) % TWO_PI
    pts[pts >= TWO_PI] = 0.0
    both = np.vstack([pts, pts[:, ::-1]])
    n = len(pts)
    earlier = [[] for _ in range(n)]
    for i, j in cKDTree(both, boxsize=TWO_PI).query_pairs(tau_ang, p=np.inf):
        a, b = i % n, j % n
        if a != b:
            earlier[max(a, b)].append(min(a, b))
    kept = np.zeros(n, dtype=bool)
    for j in range(n):
        kept[j] = not any(kept[i] for i in earlier[j])
    return pts[kept]


def _min_separation(geos, tau_ang):
    if len(geos) < 2:
        return math.inf
    pts = _unique_geodesics(geos, tau_ang)
    n = len(pts)
    if n < 2:
        return math.inf
    both = np.vstack([pts, pts[:, ::-1]])
    dists, idx = cKDTree(both, boxsize=TWO_PI).query(pts, k=min(len(both), 4), p=np.inf)
    best = math.inf
    for i in range(n):
        for d, j in zip(dists[i], idx[i]):
            if j % n != i and np.isfinite(d):
                best = min(best, float(d))
    return best


def check_nonaccumulating(g, stab, depth, tol=None, resolved=None):
    """True iff distinct orbit geodesics stay at least ``tau_acc`` apart in every window."""
    tol = tol or Tolerances()
    return all(sep >= tol.tau_acc for sep in orbit_separation(g, stab, depth, tol, resolved))


def check_cusp(g, stab, depth, tol=None):
    """True iff no endpoint of ``g`` is within ``tau_ang`` of a parabolic fixed angle."""
    tol = tol or Tolerances()
    for _, m in _orbit_maps(stab, depth):
        info = classify(m, tol.tau_tr)
        if info.kind != PARABOLIC:
            continue
        cusp = angle_of(info.fixed_points[0])
        if any(circular_distance(t, cusp) <= tol.tau_ang for t in g.endpoints):
            return False
    return True


def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def orbit_classes(core, stab, depth, tol=None):
    """Partition of the boundary geodesics into orbit classes under the stabilizer model."""
    tol = tol or Tolerances()
    parent = list(range(len(core)))
    if len(core) > 1:
        for _, m in _orbit_maps(stab, depth):
            for i, g in enumerate(core):
                h = g.image(m)
                for j, other in enumerate(core):
                    if j != i and h.distance(other) <= 10 * tol.tau_ang:
                        a, b = _find(parent, i), _find(parent, j)
                        if a != b:
                            parent[max(a, b)] = min(a, b)
    groups = {}
    for i in range(len(core)):
        groups.setdefault(_find(parent, i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def classify_quotient(core, s, stab, depth, tol=None, component_id=None):
    """
    Quotient kind of a Nielsen core, with orbit classes and the three boundary checks.

    The simple and non-accumulating checks only compare translates whose endpoints ``s``
    resolves, so a core hulled from a depth-truncated orbit is judged at that depth.

    Raises
    ------
    CheckFailed
        When a boundary class fails the simple, non-accumulating or cusp check.
    """
    tol = tol or Tolerances()
    if s.dense or not core:
        return NielsenCoreResult(component_id, [], WHOLE_SURFACE, [], {})

    classes = orbit_classes(core, stab, depth, tol)
    report = {}
    for cid, members in enumerate(classes):
        g = core[members[0]]
        separation = orbit_separation(g, stab, depth, tol, s)
        outcome = {
            CHECK_SIMPLE: check_simple(g, stab, depth, tol, s),
            CHECK_NONACCUMULATING: all(sep >= tol.tau_acc for sep in separation),
            CHECK_CUSP: check_cusp(g, stab, depth, tol),
            'min_separation': min(separation) if separation else math.inf,
        }
        report[cid] = outcome
        for check in (CHECK_SIMPLE, CHECK_NONACCUMULATING, CHECK_CUSP):
            if not outcome[check]:
                raise CheckFailed(f"Component {component_id}: boundary class {cid} "
                                  f"({g.start:.6f}, {g.end:.6f}) fails the {check} check "
                                  f"at depth {depth}", check, g)

    class_words = {}
    for cid, members in enumerate(classes):
        words = []
        for word, theta in s.sources:
            if len(theta) == 2:
                for i in members:
                    if Geodesic.between(*theta, 0.0).distance(core[i]) <= 10 * tol.tau_ang:
                        words.append(word)
                        break
        class_words[cid] = words

    kind = SIMPLE_CLOSED_GEODESIC if len(core) == 1 else SUBSURFACE
    logger.info(f"Component {component_id}: {kind} with {len(core)} boundary geodesics "
                f"in {len(classes)} classes")
    return NielsenCoreResult(component_id, list(core), kind, list(range(len(classes))),
                             report, classes, class_words, kind == SIMPLE_CLOSED_GEODESIC)


def nielsen_core(bump, comp, spec, depth, tol=None, threads=1):
    """Pull back, hull and classify the bump of ``bump`` seen from ``comp``."""
    tol = tol or Tolerances()
    s = pull_back_bump(bump, comp, spec, depth, tol, threads)
    if s.dense:
        return classify_quotient([], s, [], depth, tol, comp.id)
    core = convex_hull_boundary(s, tol.gap_eps)
    stab = stabilizer_model(comp, spec, tol)
    return classify_quotient(core, s, stab, depth, tol, comp.id)
