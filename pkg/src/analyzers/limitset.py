"""
Limit-set samples, quasicircles of subgroups, and raster rendering.

Limit points are harvested as attracting fixed points of enumerated words, each
tagged with the word it came from. Enumeration is pruned once a word's image disc
is smaller than ``prune_eps``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..exporters.images import write_image
from ..geometry.group import PRUNE, enumerate_words
from ..geometry.moebius import (
    ELLIPTIC, IDENTITY, PARABOLIC, attracting_fixed_point, classify, fixed_points,
)
from ..geometry.pointsets import as_points, dedupe, hausdorff, one_sided_hausdorff
from ..geometry.polygon import chart_points, order_cyclically, signed_area
from ..utils.errors import ConfigError, EmptyGroup
from ..utils.tolerances import Tolerances

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 12
DEFAULT_PRUNE_EPS = 1e-4
# Parabolic words longer than this are not used for cusp filling
CUSP_DEPTH = 4

TAG_FIXED = 'fixed'
TAG_ORBIT = 'orbit'


@dataclass
class LimitSample:
    """
    Deduplicated limit points with provenance.

    ``words`` holds the letters of the word each point came from (for orbit points,
    the parabolic word whose powers produced it).
    """
    points: np.ndarray
    tags: list
    words: list
    depth: int
    prune_eps: float = DEFAULT_PRUNE_EPS

    def __len__(self):
        return len(self.points)

    @property
    def word_lengths(self):
        return np.array([len(w) for w in self.words], dtype=int)

    def subset(self, mask):
        idx = np.flatnonzero(mask)
        return LimitSample(self.points[idx], [self.tags[i] for i in idx],
                           [self.words[i] for i in idx], self.depth, self.prune_eps)


@dataclass
class Quasicircle:
    """A cyclically ordered boundary sample and the chart pole used to order it."""
    points: np.ndarray
    pole: complex = None
    orientation: int = 1
    ordered: bool = True
    words: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)


def compute_limit(spec, depth=DEFAULT_DEPTH, prune_eps=DEFAULT_PRUNE_EPS, tol=None,
                  threads=1, cusp_fill=0, cusp_depth=CUSP_DEPTH):
    """
    Sample the limit set of the group generated by ``spec``.

    Parameters:
    -----------
    spec : GroupSpec
        Generators of the group.
    depth : int
        Maximal word length.
    prune_eps : float
        Words whose image disc has chordal radius below this are not extended.
    tol : Tolerances, optional
        Tolerance bundle (``tau_pt`` for deduplication, ``tau_tr`` for classification).
    threads : int
        Worker count for the enumeration.
    cusp_fill : int
        Orbit points P^{±k}(x), k = 1..cusp_fill, added for each parabolic word P up to
        ``cusp_depth`` letters and each generator fixed point x.

    Returns:
    --------
    LimitSample

    Raises
    ------
    EmptyGroup
        When the enumeration yields no non-identity word.
    """
    if depth < 1:
        raise ConfigError(f"depth must be at least 1, got {depth}")
    tol = tol or Tolerances()

    def visitor(word, radius):
        return PRUNE if word.letters and radius < prune_eps else None

    def harvest(w):
        if w.is_empty:
            return None
        info = classify(w.map, tol.tau_tr)
        if info.kind == IDENTITY:
            return None
        # Elliptic words count as non-trivial but contribute no point
        if info.kind == ELLIPTIC:
            return None, None
        fill = w if info.kind == PARABOLIC and len(w) <= cusp_depth else None
        return fill, (attracting_fixed_point(w.map, tol.tau_tr), w.letters)

    harvested = enumerate_words(spec, depth, visitor, threads=threads, harvest=harvest)
    if not harvested:
        raise EmptyGroup(f"No non-identity words up to depth {depth}")
    points, tags, letters = [], [], []
    parabolics = []
    for parabolic, fixed in harvested:
        if fixed is None:
            continue
        points.append(fixed[0])
        tags.append(TAG_FIXED)
        letters.append(fixed[1])
        if parabolic is not None:
            parabolics.append(parabolic)

    if cusp_fill > 0 and parabolics:
        bases = []
        for _, g in spec.generators:
            bases.extend(fixed_points(g, tol.tau_tr))
        for w in parabolics:
            for sign in (1, -1):
                step = w.map if sign > 0 else w.map.inverse()
                current = np.asarray(bases, dtype=complex)
                for _ in range(cusp_fill):
                    current = step.apply_array(current)
                    points.extend(current.tolist())
                    tags.extend([TAG_ORBIT] * len(current))
                    letters.extend([w.letters] * len(current))

    z = as_points(points)
    keep = dedupe(z, tol.tau_pt)
    sample = LimitSample(z[keep], [tags[i] for i in keep], [letters[i] for i in keep],
                         depth, prune_eps)
    logger.info(f"Limit sample: {len(sample)} points from {len(harvested)} non-identity words "
                f"(depth {depth}, prune_eps {prune_eps}, {len(parabolics)} parabolic)")
    return sample


def quasicircle_from_points(points, words=None, pole=None):
    """
    Order a boundary sample into a Quasicircle.

    Raises
    ------
    OrderingFailed
        If the sample cannot be ordered into a simple polygon.
    """
    z = as_points(points)
    order, pole = order_cyclically(z, pole)
    ordered = z[order]
    area = signed_area(chart_points(ordered, pole))
    kept_words = [words[i] for i in order] if words is not None else []
    return Quasicircle(ordered, pole, 1 if area >= 0 else -1, True, kept_words)


def subgroup_quasicircle(spec, sub_labels, depth=DEFAULT_DEPTH, prune_eps=DEFAULT_PRUNE_EPS,
                         tol=None, threads=1, cusp_fill=0):
    """Limit sample of the subgroup generated by ``sub_labels``, cyclically ordered."""
    words = [spec.word((spec.index(label) + 1,)) for label in sub_labels]
    sub = spec.subgroup(words)
    sample = compute_limit(sub, depth, prune_eps, tol, threads, cusp_fill)
    return quasicircle_from_points(sample.points, [sub.root_letters(w) for w in sample.words])


def invariance_defect(sample, spec):
    """Largest Hausdorff distance between the sample and its image under a generator or inverse."""
    worst = 0.0
    for _, g in spec.generators:
        for m in (g, g.inverse()):
            worst = max(worst, hausdorff(m.apply_array(sample.points), sample.points))
    return worst


def refinement_defect(coarse, fine):
    """How far the coarse sample sticks out of the finer one (0 for exact refinement)."""
    return one_sided_hausdorff(coarse.points, fine.points)


def rasterize_sample(points, viewport, resolution):
    """
    Pixel image of a point sample: white background, black 1-pixel stamps.

    Row 0 is the top of the viewport; points outside it (∞ included) are dropped.
    """
    xmin, xmax, ymin, ymax = viewport
    width, height = resolution
    if width <= 0 or height <= 0:
        raise ConfigError(f"Resolution must be positive, got {resolution}")
    image = np.full((height, width), 255, dtype=np.uint8)
    z = as_points(points)
    z = z[np.isfinite(z)]
    cols = np.floor((z.real - xmin) / (xmax - xmin) * width).astype(int)
    rows = np.floor((ymax - z.imag) / (ymax - ymin) * height).astype(int)
    ok = (cols >= 0) & (cols < width) & (rows >= 0) & (rows < height)
    image[rows[ok], cols[ok]] = 0
    return image


def render(sample, viewport, resolution, path, png=False):
    """Write the sample as a PPM (and optionally PNG) image; returns the written paths."""
    points = sample.points if hasattr(sample, 'points') else sample
    image = rasterize_sample(points, viewport, resolution)
    paths = write_image(image, path, png=png)
    logger.info(f"Rendered {int((image == 0).sum())} lit pixels to {paths[0]}")
    return paths
