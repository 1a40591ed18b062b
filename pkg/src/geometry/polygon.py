"""
Closed polygons through sampled sphere curves.

A sampled curve is viewed in a rotation chart whose pole is far from the sample, where
it becomes a bounded plane polygon. This module orders samples cyclically, tests
simplicity and answers side (inside/outside) queries by ray-crossing parity.
"""

import logging
import math

import numpy as np

from ..utils.errors import OrderingFailed
from .moebius import INF, chordal_dist_array, rotation_chart

logger = logging.getLogger(__name__)

_S = math.sqrt(0.5)
POLE_CANDIDATES = (
    INF, 0j, 1 + 0j, -1 + 0j, 1j, -1j,
    complex(_S, _S), complex(-_S, _S), complex(-_S, -_S), complex(_S, -_S),
    2 + 0j, -2 + 0j, 2j, -2j, 0.5 + 0j, -0.5 + 0j, 0.5j, -0.5j,
)

# Nearest-neighbour repair looks this far ahead in angular order
REPAIR_WINDOW = 8
# Queries per block in the vectorized parity test
_BLOCK = 4096


def pick_pole(points, candidates=POLE_CANDIDATES):
    """
    The candidate farthest (in the minimal chordal sense) from the sample.

    Returns:
    --------
    tuple
        (pole, clearance) where clearance is the minimal chordal distance to the sample.
    """
    z = np.asarray(points, dtype=complex)
    best, best_clear = candidates[0], -1.0
    for p in candidates:
        clear = float(chordal_dist_array(p, z).min()) if len(z) else 2.0
        if clear > best_clear:
            best, best_clear = p, clear
    return best, best_clear


def chart_points(points, pole):
    """Sample coordinates in the rotation chart sending ``pole`` to ∞."""
    return rotation_chart(pole).apply_array(np.asarray(points, dtype=complex))


def order_cyclically(points, pole=None, window=REPAIR_WINDOW):
    """
    Cyclic order of a sampled closed curve.

    The sample is sorted by angle around its chart centroid, then repaired by
    nearest-neighbour chaining inside a sliding window of the angular order.

    Returns:
    --------
    tuple
        (order, pole): an index array and the chart pole used.

    Raises
    ------
    OrderingFailed
        If fewer than three points are given or the ordered polygon is not simple.
    """
    z = np.asarray(points, dtype=complex)
    if len(z) < 3:
        raise OrderingFailed(f"Need at least 3 points to order a closed curve, got {len(z)}")
    if pole is None:
        pole, _ = pick_pole(z)
    w = chart_points(z, pole)
    if not np.all(np.isfinite(w)):
        raise OrderingFailed("Chart pole lies on the sample")

    centre = w.mean()
    angular = list(np.argsort(np.angle(w - centre), kind='stable'))
    order = [angular.pop(0)]
    while angular:
        ahead = angular[:window]
        last = w[order[-1]]
        j = int(np.argmin(np.abs(w[ahead] - last)))
        order.append(angular.pop(j))
    order = np.array(order)

    if not is_simple(w[order]):
        raise OrderingFailed(f"Ordered sample of {len(z)} points is not a simple polygon")
    logger.debug(f"Ordered {len(z)} points in chart with pole {pole}")
    return order, pole


def _cross(o, a, b):
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def is_simple(poly, closed=True):
    """True when no two non-adjacent edges of the polygon cross strictly."""
    p = np.asarray(poly, dtype=complex)
    n = len(p)
    if n < 4:
        return True
    starts = p if closed else p[:-1]
    ends = np.roll(p, -1) if closed else p[1:]
    m = len(starts)
    idx = np.arange(m)
    for lo in range(0, m, 512):
        hi = min(lo + 512, m)
        a1 = starts[lo:hi, None]
        a2 = ends[lo:hi, None]
        b1 = starts[None, :]
        b2 = ends[None, :]
        d1 = _cross(a1, a2, b1)
        d2 = _cross(a1, a2, b2)
        d3 = _cross(b1, b2, a1)
        d4 = _cross(b1, b2, a2)
        crossing = (d1 * d2 < 0) & (d3 * d4 < 0)
        i = idx[lo:hi, None]
        j = idx[None, :]
        gap = np.abs(i - j)
        adjacent = (gap <= 1) | (closed & (gap == m - 1))
        if np.any(crossing & ~adjacent):
            return False
    return True


def parity_inside(queries, poly, closed=True):
    """
    Even-odd membership of plane points in a polygon, by upward ray crossings.

    With ``closed=False`` the last-to-first edge is left out, which is how curves
    through ∞ are handled in a finite chart.
    """
    q = np.atleast_1d(np.asarray(queries, dtype=complex))
    p = np.asarray(poly, dtype=complex)
    if closed:
        x1, y1 = p.real, p.imag
        x2, y2 = np.roll(p, -1).real, np.roll(p, -1).imag
    else:
        x1, y1 = p[:-1].real, p[:-1].imag
        x2, y2 = p[1:].real, p[1:].imag
    inside = np.zeros(len(q), dtype=bool)
    for lo in range(0, len(q), _BLOCK):
        qx = q[lo:lo + _BLOCK].real[:, None]
        qy = q[lo:lo + _BLOCK].imag[:, None]
        straddle = (x1 > qx) != (x2 > qx)
        with np.errstate(divide='ignore', invalid='ignore'):
            t = (qx - x1) / (x2 - x1)
            y_hit = y1 + t * (y2 - y1)
        hits = straddle & (y_hit > qy)
        inside[lo:lo + _BLOCK] = (hits.sum(axis=1) % 2) == 1
    return inside


def signed_area(poly):
    """Shoelace area; positive for counter-clockwise polygons."""
    p = np.asarray(poly, dtype=complex)
    q = np.roll(p, -1)
    return 0.5 * float(np.sum(p.real * q.imag - q.real * p.imag))


def side_of(points_ordered, pole, query):
    """
    True when ``query`` lies in the bounded side of the ordered curve in its chart.

    A query at the pole is on the unbounded side.
    """
    w = chart_points(points_ordered, pole)
    qw = chart_points([query], pole)
    if not np.all(np.isfinite(qw)):
        return False
    return bool(parity_inside(qw, w)[0])
