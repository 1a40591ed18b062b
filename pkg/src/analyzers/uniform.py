"""
Numerical uniform-domain constants.

A domain bounded by a sampled curve is rasterized; for random interior pairs two
candidate arcs are found on the 8-connected cell graph: the shortest one
(line-of-sight smoothed) and a maximal-clearance one. Each pair is scored by the arc
with the better clearance ratio, taking both ratios from that arc, and the estimates
are the maxima over pairs. Any arc bounds a pair from above, so the estimates are lower
bounds for the true constants.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from ..geometry.moebius import (
    PARABOLIC, MoebiusMap, attracting_fixed_point, classify, is_inf, normalizing_chart,
    repelling_fixed_point,
)
from ..geometry.polygon import is_simple, parity_inside
from ..utils.errors import ConfigError, DegenerateCurve, Disconnected

logger = logging.getLogger(__name__)

INSIDE = 'inside'
OUTSIDE = 'outside'

DEFAULT_RESOLUTION = 128
DEFAULT_PAIRS = 200
# Minimal pair separation, in cells
MIN_SEPARATION_CELLS = 10
# Sources per Dijkstra call
SOURCE_BATCH = 32
# A curve with a point this many window radii away is treated as passing through ∞
FAR_FACTOR = 100.0

_STEPS = ((0, 1), (1, 0), (1, 1), (1, -1))

ARC_SHORTEST = 'shortest'
ARC_CLEARANCE = 'clearance'


@dataclass
class DomainRaster:
    """Cell mask of a domain over a square window, with its boundary-distance field."""
    mask: np.ndarray
    h: float
    origin: complex
    dist: np.ndarray

    @property
    def shape(self):
        return self.mask.shape

    def centre(self, row, col):
        return self.origin + complex((col + 0.5) * self.h, (row + 0.5) * self.h)

    def cell(self, z):
        z = np.asarray(z, dtype=complex) - self.origin
        return np.floor(z.imag / self.h).astype(int), np.floor(z.real / self.h).astype(int)

    def contains(self, z):
        rows, cols = self.cell(z)
        n, m = self.mask.shape
        ok = (rows >= 0) & (rows < n) & (cols >= 0) & (cols < m)
        out = np.zeros(np.shape(rows), dtype=bool)
        out[ok] = self.mask[rows[ok], cols[ok]]
        return out

    def distance_at(self, z):
        rows, cols = self.cell(z)
        n, m = self.mask.shape
        rows = np.clip(rows, 0, n - 1)
        cols = np.clip(cols, 0, m - 1)
        return np.maximum(self.dist[rows, cols], 0.5 * self.h)


@dataclass
class UniformEstimate:
    """Estimated constants with the pairs realizing them."""
    a_hat: float
    b_hat: float
    witness_a: tuple
    witness_b: tuple
    n_pairs: int
    resolution: int
    pairs: list = field(default_factory=list)


def _plane_curve(points, extent):
    """Finite polyline of a curve and whether it is closed (False when it passes through ∞)."""
    z = np.asarray(points, dtype=complex)
    size = np.where(np.isfinite(z), np.abs(z), np.inf)
    if np.all(size < FAR_FACTOR * extent):
        return z, True
    cut = int(np.argmax(size))
    z = np.roll(z, -cut)[1:]
    return z[np.isfinite(z)], False


def default_window(points):
    """Square window around the finite part of a curve, padded by a quarter of its size."""
    z = np.asarray(points, dtype=complex)
    z = z[np.isfinite(z)]
    if len(z) == 0:
        return (-2.0, 2.0, -2.0, 2.0)
    xmin, xmax, ymin, ymax = z.real.min(), z.real.max(), z.imag.min(), z.imag.max()
    half = 0.5 * max(xmax - xmin, ymax - ymin) * 1.25
    if half > 1e3 or half <= 0:
        return (-2.0, 2.0, -2.0, 2.0)
    cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
    return (cx - half, cx + half, cy - half, cy + half)


def _largest_piece(mask):
    """Largest 8-connected piece of a cell mask; pixel islands at thin tips are dropped."""
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if count <= 1:
        return mask
    sizes = ndimage.sum(mask, labels, index=np.arange(1, count + 1))
    keep = labels == (int(np.argmax(sizes)) + 1)
    logger.debug(f"Dropped {int(mask.sum() - keep.sum())} cells outside the largest of {count} pieces")
    return keep


def rasterize_quasidisc(q, side=INSIDE, resolution=DEFAULT_RESOLUTION, window=None, annulus=None):
    """
    Rasterize the domain on one side of a sampled curve.

    Parameters:
    -----------
    q : Quasicircle or array of complex
        Cyclically ordered curve sample (plane coordinates, ∞ allowed).
    side : str
        'inside' (odd upward-ray crossings) or 'outside'.
    resolution : int
        Cells per window side.
    window : tuple, optional
        (xmin, xmax, ymin, ymax); defaults to the padded bounding square of the curve.
    annulus : float, optional
        R; when given, cells outside 1/R ≤ |z| ≤ R are removed.

    Raises
    ------
    DegenerateCurve
        If the sampled polygon self-intersects.
    """
    if side not in (INSIDE, OUTSIDE):
        raise ConfigError(f"side must be '{INSIDE}' or '{OUTSIDE}', got {side!r}")
    points = q.points if hasattr(q, 'points') else q
    window = window or default_window(points)
    xmin, xmax, ymin, ymax = window
    extent = max(xmax - xmin, ymax - ymin)
    poly, closed = _plane_curve(points, extent)
    if not is_simple(poly, closed=closed):
        raise DegenerateCurve(f"Sampled curve of {len(poly)} points self-intersects")

    h = extent / resolution
    axis_x = xmin + (np.arange(resolution) + 0.5) * h
    axis_y = ymin + (np.arange(resolution) + 0.5) * h
    xs, ys = np.meshgrid(axis_x, axis_y)
    grid = (xs + 1j * ys).ravel()
    mask = parity_inside(grid, poly, closed=closed).reshape(resolution, resolution)
    if side == OUTSIDE:
        mask = ~mask
    if annulus is not None:
        r = np.abs(grid).reshape(resolution, resolution)
        mask &= (r >= 1.0 / annulus) & (r <= annulus)
    mask = _largest_piece(mask)
    dist = ndimage.distance_transform_edt(mask) * h
    return DomainRaster(mask, h, complex(xmin, ymin), dist)


def _grid_graph(d, clearance):
    n, m = d.mask.shape
    index = -np.ones((n, m), dtype=int)
    cells = np.argwhere(d.mask)
    index[cells[:, 0], cells[:, 1]] = np.arange(len(cells))
    rows, cols, weights = [], [], []
    for dr, dc in _STEPS:
        r0 = cells[:, 0]
        c0 = cells[:, 1]
        r1 = r0 + dr
        c1 = c0 + dc
        ok = (r1 >= 0) & (r1 < n) & (c1 >= 0) & (c1 < m)
        ok[ok] &= d.mask[r1[ok], c1[ok]]
        step = d.h * math.hypot(dr, dc)
        a = index[r0[ok], c0[ok]]
        b = index[r1[ok], c1[ok]]
        if clearance:
            mean = 0.5 * (d.dist[r0[ok], c0[ok]] + d.dist[r1[ok], c1[ok]])
            w = step / np.maximum(mean, 0.5 * d.h)
        else:
            w = np.full(len(a), step)
        rows.append(a)
        cols.append(b)
        weights.append(w)
    size = len(cells)
    graph = coo_matrix((np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))),
                       shape=(size, size)).tocsr()
    return graph, cells, index


def _path(pred, source_row, target):
    path = [target]
    while path[-1] != source_row:
        nxt = pred[path[-1]]
        if nxt < 0:
            return None
        path.append(nxt)
    return path[::-1]


def _visible(d, a, b):
    n = max(2, int(math.ceil(abs(b - a) / (0.5 * d.h))) + 1)
    t = np.linspace(0.0, 1.0, n)
    return bool(np.all(d.contains(a + t * (b - a))))


def string_pull(d, points):
    """Line-of-sight smoothing of a cell path: keep only the vertices needed for visibility."""
    out = [points[0]]
    i = 0
    while i < len(points) - 1:
        j = i + 1
        while j + 1 < len(points) and _visible(d, points[i], points[j + 1]):
            j += 1
        out.append(points[j])
        i = j
    return out


def arc_ratios(d, polyline, z1, z2):
    """(length / |z1 - z2|, max over the arc of min(l1, l2) / dist(z, ∂A))."""
    p = np.asarray(polyline, dtype=complex)
    seg = np.abs(np.diff(p))
    total = float(seg.sum())
    samples, arc = [p[0]], [0.0]
    run = 0.0
    for k, length in enumerate(seg):
        n = max(1, int(math.ceil(length / d.h)))
        for t in range(1, n + 1):
            samples.append(p[k] + (p[k + 1] - p[k]) * t / n)
            arc.append(run + length * t / n)
        run += length
    arc = np.array(arc)
    clear = d.distance_at(np.array(samples))
    b = float(np.max(np.minimum(arc, total - arc) / clear))
    return total / abs(z2 - z1), b


def sample_pairs(d, n_pairs, seed=0):
    """Random interior cell pairs at least ``MIN_SEPARATION_CELLS`` cells apart."""
    cells = np.argwhere(d.mask)
    if len(cells) < 2:
        raise Disconnected(f"Domain has {len(cells)} interior cells")
    rng = np.random.default_rng(seed)
    pairs = []
    attempts = 0
    while len(pairs) < n_pairs and attempts < 50 * n_pairs:
        attempts += 1
        i, j = rng.integers(0, len(cells), size=2)
        z1 = d.centre(*cells[i])
        z2 = d.centre(*cells[j])
        if abs(z1 - z2) >= MIN_SEPARATION_CELLS * d.h:
            pairs.append((int(i), int(j)))
    if not pairs:
        raise Disconnected("No interior pair is far enough apart at this resolution")
    return pairs, cells


def _paths_from(graph, sources):
    dist, pred = {}, {}
    unique = sorted(set(sources))
    for lo in range(0, len(unique), SOURCE_BATCH):
        batch = unique[lo:lo + SOURCE_BATCH]
        dd, pp = dijkstra(graph, directed=False, indices=batch, return_predecessors=True)
        for k, s in enumerate(batch):
            dist[s] = dd[k]
            pred[s] = pp[k]
    return dist, pred


def pick_arc(*candidates):
    """
    The ``(name, a, b)`` candidate a pair is scored by.

    Both ratios come from the same arc: the one with the smaller clearance ratio,
    then the smaller length ratio.
    """
    return min(candidates, key=lambda c: (c[2], c[1]))


def estimate_constants(d, n_pairs=DEFAULT_PAIRS, seed=0):
    """
    Estimate (a, b) of a rasterized domain.

    Raises
    ------
    Disconnected
        If some sampled pair has no grid path.
    """
    pairs, cells = sample_pairs(d, n_pairs, seed)
    short_graph, _, _ = _grid_graph(d, clearance=False)
    clear_graph, _, _ = _grid_graph(d, clearance=True)
    sources = [i for i, _ in pairs]
    short_dist, short_pred = _paths_from(short_graph, sources)
    _, clear_pred = _paths_from(clear_graph, sources)

    rows = []
    for i, j in pairs:
        z1, z2 = d.centre(*cells[i]), d.centre(*cells[j])
        if not np.isfinite(short_dist[i][j]):
            raise Disconnected(f"No grid path between {z1:.4g} and {z2:.4g}")
        short = [d.centre(*cells[k]) for k in _path(short_pred[i], i, j)]
        a1, b1 = arc_ratios(d, string_pull(d, short), z1, z2)
        clear = [d.centre(*cells[k]) for k in _path(clear_pred[i], i, j)]
        a2, b2 = arc_ratios(d, clear, z1, z2)
        arc, a, b = pick_arc((ARC_SHORTEST, a1, b1), (ARC_CLEARANCE, a2, b2))
        rows.append({
            'z1_re': z1.real, 'z1_im': z1.imag, 'z2_re': z2.real, 'z2_im': z2.imag,
            'separation': abs(z2 - z1),
            'a_shortest': a1, 'b_shortest': b1, 'a_clearance': a2, 'b_clearance': b2,
            'arc': arc, 'a': a, 'b': b,
        })

    ka = max(range(len(rows)), key=lambda k: rows[k]['a'])
    kb = max(range(len(rows)), key=lambda k: rows[k]['b'])

    def pair(k):
        r = rows[k]
        return (complex(r['z1_re'], r['z1_im']), complex(r['z2_re'], r['z2_im']))

    est = UniformEstimate(rows[ka]['a'], rows[kb]['b'], pair(ka), pair(kb), len(rows),
                          d.mask.shape[0], rows)
    logger.info(f"Uniform estimate over {len(rows)} pairs: a_hat={est.a_hat:.4f}, b_hat={est.b_hat:.4f}")
    return est


def translate_chart(g):
    """Chart sending g's repelling fixed point to 0 and its attracting one to ∞."""
    return normalizing_chart(repelling_fixed_point(g), attracting_fixed_point(g))


@dataclass
class TranslateSeries:
    """b_hat of successive translates, with the chart and window used."""
    b_hat: list
    a_hat: list
    chart: MoebiusMap
    window_radius: float
    pinching: object = None


def skinny_translate_diagnostic(q, g, n_translates=6, resolution=DEFAULT_RESOLUTION,
                                window_radius=None, n_pairs=60, seed=0, side=INSIDE):
    """
    b_hat of the domains bounded by g^k(q), k = 1..n_translates.

    The chart puts g's fixed points at 0 and ∞; every domain is clipped to the same
    annulus 1/R ≤ |z| ≤ R over the window [-R, R]², so translates that leave the
    annulus are seen as ever thinner slivers. A parabolic ``g`` is delegated to
    ``cusp_pinching_diagnostic`` and attached to the series.
    """
    info = classify(g)
    points = np.asarray(q.points if hasattr(q, 'points') else q, dtype=complex)
    if info.kind == PARABOLIC:
        pinch = cusp_pinching_diagnostic(points, g, resolution, n_pairs, seed, side)
        return TranslateSeries([pinch.b_hat], [pinch.a_hat], pinch.chart, None, pinch)
    if not info.is_loxodromic_like:
        raise ConfigError(f"Translate diagnostic needs a hyperbolic or loxodromic map, got {info.kind}")

    chart = translate_chart(g)
    base = chart.apply_array(points)
    if window_radius is None:
        finite = np.abs(base[np.isfinite(base)])
        window_radius = 8.0 * float(finite.max()) if len(finite) else 8.0
    R = float(window_radius)
    step = chart @ g @ chart.inverse()
    series_b, series_a = [], []
    current = base
    for k in range(1, n_translates + 1):
        current = step.apply_array(current)
        d = rasterize_quasidisc(current, side, resolution, (-R, R, -R, R), annulus=R)
        try:
            est = estimate_constants(d, n_pairs, seed)
            series_b.append(est.b_hat)
            series_a.append(est.a_hat)
        except Disconnected as e:
            logger.warning(f"Translate {k}: {str(e)}")
            series_b.append(math.nan)
            series_a.append(math.nan)
        logger.info(f"Translate {k}: b_hat={series_b[-1]:.4f}")
    return TranslateSeries(series_b, series_a, chart, R)


@dataclass
class CuspPinching:
    """Pinching of a domain whose translates under a parabolic map are disjoint."""
    max_boundary_distance: float
    a_hat: float
    b_hat: float
    widest_pair: float
    implied_b_lower: float
    translates_disjoint: bool
    chart: MoebiusMap


def parabolic_chart(g):
    """Chart conjugating a parabolic map to z ↦ z + 1."""
    p = classify(g).fixed_points[0]
    to_inf = MoebiusMap.identity() if is_inf(p) else MoebiusMap.from_entries(0, 1, 1, -p)
    h = to_inf @ g @ to_inf.inverse()
    t = h.b / h.d
    return MoebiusMap.scaling(1 / t) @ to_inf


def cusp_pinching_diagnostic(q, g, resolution=DEFAULT_RESOLUTION, n_pairs=60, seed=0, side=INSIDE):
    """
    Width-one pinching in the chart where ``g`` is z ↦ z + 1.

    If the domain is disjoint from its translate, every point is within distance 1 of
    the boundary, and a pair at separation s forces b ≥ s / (2 · max distance).
    """
    chart = parabolic_chart(g)
    points = chart.apply_array(np.asarray(q.points if hasattr(q, 'points') else q, dtype=complex))
    d = rasterize_quasidisc(points, side, resolution)
    shifted = d.contains(np.array([d.centre(r, c) - 1.0 for r, c in np.argwhere(d.mask)]))
    est = estimate_constants(d, n_pairs, seed)
    widest = max(r['separation'] for r in est.pairs)
    max_dist = float(d.dist.max())
    result = CuspPinching(max_dist, est.a_hat, est.b_hat, widest, widest / (2 * max_dist),
                          not bool(shifted.any()), chart)
    logger.info(f"Cusp pinching: max boundary distance {max_dist:.4f}, b_hat {est.b_hat:.4f}, "
                f"implied lower bound {result.implied_b_lower:.4f}")
    return result
