"""
Combinatorial characteristic-submanifold assembly.

Every maximal bumping collection yields exactly one piece. Its kind follows from the
number of components n, the bump class and the number m of distinct image-curve
classes: components are identified when some enumerated word carries one onto the
other while preserving the bump set.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from ..geometry.group import enumerate_words, maps_component, stabilizer_membership
from ..geometry.moebius import fixed_points, normalizing_chart
from ..geometry.pointsets import near_mask, one_sided_hausdorff
from ..utils.errors import CaseViolation, UnmatchedCurve
from ..utils.tolerances import Tolerances
from .bumping import FULL_BOUNDARY, INFINITE_PROPER, TWO_POINT

logger = logging.getLogger(__name__)

TRIVIAL_I_BUNDLE = 'TrivialIBundle'
TWISTED_I_BUNDLE = 'TwistedIBundle'
SFS_SOLID_TORUS = 'SFSSolidTorus'
WHOLE_MANIFOLD_I_BUNDLE = 'WholeManifoldIBundle'

PIECE_KINDS = (TRIVIAL_I_BUNDLE, TWISTED_I_BUNDLE, SFS_SOLID_TORUS, WHOLE_MANIFOLD_I_BUNDLE)

# Half-width, in log-modulus, of the collar around the separating circle
COLLAR = 0.5


@dataclass
class CharPiece:
    """One piece of the characteristic submanifold."""
    kind: str
    n: int
    m: int
    boundary_annuli: int
    bump: object
    w: int = None
    twisted: bool = None
    base: str = None
    curve_classes: list = field(default_factory=list)
    cyclic_order: list = field(default_factory=list)
    self_match: bool = False


@dataclass
class Decomposition:
    """Pieces with their boundary-curve rosters."""
    pieces: list
    untracked_regions: list = field(default_factory=list)

    @property
    def rosters(self):
        return [list(p.curve_classes) for p in self.pieces]

    @property
    def disjoint(self):
        seen = set()
        for roster in self.rosters:
            if seen & set(roster):
                return False
            seen |= set(roster)
        return True


@dataclass(frozen=True)
class MatchedCurves:
    """Boundary classes of neighbouring components joined by an essential annulus."""
    first: tuple
    second: tuple
    word: object
    self_match: bool = False


def curve_class_id(bump_key, component_id, class_id):
    """Id of a boundary-curve class; the bump key keeps bumps on a shared component apart."""
    return f"C{'-'.join(str(i) for i in bump_key)}/{component_id}.{class_id}"


def _preserves_bump(word, bump, tol):
    image = word.map.apply_array(np.asarray(bump.bump_points, dtype=complex))
    return one_sided_hausdorff(image, bump.bump_points) <= tol.tau_bump


def image_classes(bump, components, spec, depth, tol=None, threads=1):
    """
    Partition of the bump's components into image classes.

    Returns a list of class labels aligned with ``bump.component_ids`` and the words
    that identified components (keyed by the ordered pair of ids).
    """
    tol = tol or Tolerances()
    by_id = {c.id: c for c in components}
    members = [by_id[i] for i in bump.component_ids]
    graph = nx.Graph()
    graph.add_nodes_from(bump.component_ids)
    witnesses = {}
    for w in enumerate_words(spec, depth, threads=threads):
        if w.is_empty or not _preserves_bump(w, bump, tol):
            continue
        for src in members:
            for dst in members:
                if src.id == dst.id or graph.has_edge(src.id, dst.id):
                    continue
                if maps_component(w, src, dst, tol):
                    graph.add_edge(src.id, dst.id)
                    witnesses[(src.id, dst.id)] = w
    groups = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda g: g[0])
    label = {}
    for k, g in enumerate(groups):
        for i in g:
            label[i] = k
    return [label[i] for i in bump.component_ids], witnesses


def cyclic_order(bump, components, collar=COLLAR):
    """
    Order the bump's components around its two points p, q.

    In the chart (z - p)/(z - q) the circle |z| = 1 separates p from q; each component
    is placed at the circular mean angle of its boundary points in a collar of it.
    """
    p, q = bump.pair
    chart = normalizing_chart(p, q)
    by_id = {c.id: c for c in components}
    angles = {}
    for cid in bump.component_ids:
        z = chart.apply_array(np.asarray(by_id[cid].quasicircle.points, dtype=complex))
        z = z[np.isfinite(z) & (z != 0)]
        near = z[np.abs(np.log(np.abs(z))) <= collar]
        use = near if len(near) else z
        unit = use / np.abs(use)
        angles[cid] = cmath.phase(unit.sum()) % (2 * math.pi) if len(unit) else 0.0
    return sorted(bump.component_ids, key=lambda cid: angles[cid])


def transfers_stabilizer(word, comp_c, comp_b, bump_points, tol=None):
    """
    True when a stabilizer element of C with fixed points in the bump also stabilizes B.

    Words that do not stabilize C, or whose fixed points leave the bump set, do not
    qualify and give False.
    """
    tol = tol or Tolerances()
    if not stabilizer_membership(word, comp_c, tol):
        return False
    fixed = np.array(fixed_points(word.map, tol.tau_tr), dtype=complex)
    if len(fixed) == 0 or not np.all(near_mask(fixed, bump_points, tol.tau_bump)):
        return False
    return stabilizer_membership(word, comp_b, tol)


def _same_axis(u, v, tol):
    fu = np.array(fixed_points(u.map, tol.tau_tr), dtype=complex)
    fv = np.array(fixed_points(v.map, tol.tau_tr), dtype=complex)
    if len(fu) != len(fv) or len(fu) == 0:
        return False
    return bool(np.all(near_mask(fu, fv, tol.tau_pt * 1e3)))


def pair_boundary_curves(bump, cores, spec, depth, tol=None, components=(), threads=1, labels=None):
    """
    Match boundary classes of neighbouring components of a bump.

    A class of C is defined by stabilizer words of C with fixed points in the bump;
    by stabilizer transfer such a word also stabilizes D, and the class of D defined by
    a word with the same fixed points is its partner. Pairs whose components lie in
    one image class are flagged ``self_match``. ``labels`` are the image-class labels of
    the bump's components when already known. Neighbours lacking a Nielsen core on either
    side are not matched.

    Raises
    ------
    UnmatchedCurve
        When transfer fails or D has no class with the same fixed points.
    """
    tol = tol or Tolerances()
    if bump.cardinality_class == FULL_BOUNDARY:
        return []
    by_id = {c.id: c for c in components}
    if labels is None:
        labels, _ = image_classes(bump, components, spec, depth, tol, threads)
    label_of = dict(zip(bump.component_ids, labels))
    if bump.n > 2 and bump.pair is not None and len(bump.pair) == 2:
        order = cyclic_order(bump, components)
        neighbours = [(order[i], order[(i + 1) % len(order)]) for i in range(len(order))]
    else:
        ids = bump.component_ids
        neighbours = [(ids[0], ids[1])]

    matches = []
    for cid, did in neighbours:
        if cid not in cores or did not in cores:
            logger.info(f"Bump {bump.component_ids}: no Nielsen core to match between {cid} and {did}")
            continue
        core_c, core_d = cores[cid], cores[did]
        for k, words in core_c.class_words.items():
            partner = None
            for u in words:
                if not transfers_stabilizer(u, by_id[cid], by_id[did], bump.bump_points, tol):
                    continue
                for j, others in core_d.class_words.items():
                    if any(_same_axis(u, v, tol) for v in others):
                        partner = (j, u)
                        break
                if partner:
                    break
            if partner is None:
                raise UnmatchedCurve(f"Boundary class {k} of component {cid} has no partner "
                                     f"in component {did} at depth {depth}")
            matches.append(MatchedCurves((cid, k), (did, partner[0]), partner[1],
                                         label_of[cid] == label_of[did]))
    logger.info(f"Bump {bump.component_ids}: {len(matches)} matched boundary curves")
    return matches


def solid_torus_piece(bump, class_labels):
    """
    Seifert-fibered solid torus for a collection of n > 2 components.

    ``class_labels`` gives one image-class label per component; m is the number of
    distinct labels and the fibres wind w = n / m times around the core. With w = 2 the
    torus is also a twisted I-bundle over the Möbius band and is marked ``twisted``.

    Raises
    ------
    CaseViolation
        If m does not divide n.
    """
    n = len(class_labels)
    m = len(set(class_labels))
    if n % m:
        raise CaseViolation(f"{m} image-curve classes do not divide {n} components")
    return CharPiece(SFS_SOLID_TORUS, n, m, m, bump, w=n // m, twisted=True if n // m == 2 else None)


def _swapped(labels):
    return len(set(labels)) < len(labels)


def assemble(bumps, cores, spec, depth, tol=None, components=(), threads=1):
    """
    One piece per maximal bump record.

    Parameters:
    -----------
    bumps : list of BumpRecord
        Maximal collections.
    cores : dict
        ``(tuple(component_ids), component_id) -> NielsenCoreResult``.
    spec : GroupSpec
        The group.
    depth : int
        Search depth for image classes and stabilizer transfer.
    components : list of ComponentRecord
        Records referenced by the bumps.

    Raises
    ------
    CaseViolation
        If a solid-torus collection has m not dividing n, or two pieces claim the same
        boundary curve.
    """
    tol = tol or Tolerances()
    pieces = []
    claimed = {}
    for bump in bumps:
        key = tuple(bump.component_ids)
        bump_cores = {cid: cores[(key, cid)] for cid in bump.component_ids if (key, cid) in cores}
        roster = [curve_class_id(key, cid, k)
                  for cid in bump.component_ids if cid in bump_cores
                  for k in bump_cores[cid].image_curve_classes]
        labels, _ = image_classes(bump, components, spec, depth, tol, threads)
        m = len(set(labels))

        if bump.cardinality_class == FULL_BOUNDARY:
            piece = CharPiece(WHOLE_MANIFOLD_I_BUNDLE, bump.n, m, 0, bump,
                              twisted=_swapped(labels), base='surface')
        elif bump.n > 2:
            piece = solid_torus_piece(bump, labels)
            if bump.pair is not None:
                piece.cyclic_order = cyclic_order(bump, components)
        else:
            matches = pair_boundary_curves(bump, bump_cores, spec, depth, tol, components, threads,
                                           labels)
            coincide = _swapped(labels)
            if bump.cardinality_class == TWO_POINT:
                if coincide:
                    piece = CharPiece(TWISTED_I_BUNDLE, 2, 1, 1, bump, twisted=True,
                                      base='annulus', self_match=True)
                else:
                    piece = CharPiece(TRIVIAL_I_BUNDLE, 2, 2, 2, bump, twisted=False, base='annulus')
            elif bump.cardinality_class == INFINITE_PROPER:
                boundary = len({(mt.first, mt.second) for mt in matches}) or \
                    max((len(c.image_curve_classes) for c in bump_cores.values()), default=0)
                piece = CharPiece(TWISTED_I_BUNDLE if coincide else TRIVIAL_I_BUNDLE, 2, m,
                                  boundary, bump, twisted=coincide, base='subsurface',
                                  self_match=coincide)
            else:
                continue
        for curve in roster:
            if curve in claimed:
                raise CaseViolation(f"Boundary curve {curve} of bump {bump.component_ids} is already "
                                    f"claimed by bump {claimed[curve]}")
            claimed[curve] = bump.component_ids
        piece.curve_classes = roster
        pieces.append(piece)
        logger.info(f"Bump {bump.component_ids} ({bump.cardinality_class}): {piece.kind}, "
                    f"n={piece.n}, m={piece.m}, annuli={piece.boundary_annuli}")
    return Decomposition(pieces)
