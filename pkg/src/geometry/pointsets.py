"""
Finite point sets on the Riemann sphere: deduplication, Hausdorff distances and clustering.

All distances are chordal. Points are embedded in R³ with ``sphere_coords`` where the
chordal metric is Euclidean, so KD-trees answer every neighbourhood query.
"""

import logging

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from .moebius import sphere_coords

logger = logging.getLogger(__name__)


def as_points(points):
    """Coerce a sequence of sphere points to a 1-d complex array."""
    if points is None:
        return np.zeros(0, dtype=complex)
    return np.atleast_1d(np.asarray(points, dtype=complex))


def dedupe(points, tol):
    """
    Indices of a subset with no two points within ``tol``.

    Earlier points win, so the result does not depend on anything but input order.
    A point is kept unless an earlier kept point lies within ``tol``; memory stays
    linear however dense the clusters are.
    """
    z = as_points(points)
    if len(z) == 0:
        return np.zeros(0, dtype=int)
    x = sphere_coords(z)
    # exact repeats collapse onto their first occurrence
    _, first = np.unique(x, axis=0, return_index=True)
    first = np.sort(first)
    tree = cKDTree(x[first])
    taken = np.zeros(len(first), dtype=bool)
    kept = []
    for k in range(len(first)):
        if taken[k]:
            continue
        kept.append(first[k])
        taken[tree.query_ball_point(x[first[k]], tol)] = True
    return np.asarray(kept, dtype=int)


def nearest_distances(src, dst):
    """Chordal distance from every point of ``src`` to its nearest point of ``dst``."""
    src = as_points(src)
    dst = as_points(dst)
    if len(src) == 0:
        return np.zeros(0)
    if len(dst) == 0:
        return np.full(len(src), np.inf)
    d, _ = cKDTree(sphere_coords(dst)).query(sphere_coords(src))
    return d


def one_sided_hausdorff(src, dst):
    """max over ``src`` of the distance to ``dst`` (0 for an empty ``src``)."""
    d = nearest_distances(src, dst)
    return float(d.max()) if len(d) else 0.0


def hausdorff(a, b):
    """Symmetric chordal Hausdorff distance; two empty sets are at distance 0."""
    a = as_points(a)
    b = as_points(b)
    if len(a) == 0 and len(b) == 0:
        return 0.0
    return max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a))


def near_mask(src, dst, tol):
    """Boolean mask of the points of ``src`` within ``tol`` of ``dst``."""
    return nearest_distances(src, dst) <= tol


def clusters(points, radius):
    """
    Group points into connected clusters where neighbours are within ``radius``.

    Returns lists of indices ordered by their smallest member.
    """
    z = as_points(points)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(z)))
    if len(z):
        graph.add_edges_from(cKDTree(sphere_coords(z)).query_pairs(radius))
    groups = [sorted(c) for c in nx.connected_components(graph)]
    return sorted(groups, key=lambda g: g[0])


def diameter(points):
    """Chordal diameter of a point set."""
    x = sphere_coords(as_points(points))
    if len(x) < 2:
        return 0.0
    diffs = x[:, None, :] - x[None, :, :]
    return float(np.sqrt((diffs ** 2).sum(axis=2)).max())


def representative(points):
    """The member of a cluster closest to its spherical mean."""
    z = as_points(points)
    x = sphere_coords(z)
    centre = x.mean(axis=0)
    return complex(z[int(np.argmin(((x - centre) ** 2).sum(axis=1)))])
