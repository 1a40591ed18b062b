"""
Two-chart rasterization of the Riemann sphere.

Chart 0 covers |z| ≤ 2 and chart 1 covers |1/z| ≤ 2, each on an R×R grid over
[-2, 2]². Sampled limit points become wall pixels (dilated to a fixed physical width);
the free pixels are labeled per chart and glued across the overlap 1/2 < |z| < 2.
"""

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy import ndimage

from .moebius import INF

logger = logging.getLogger(__name__)

CHART_EXTENT = 2.0
# Regions smaller than this share of a chart's pixels are not tracked
TRACK_SHARE = 1e-3
# Wall dilation at the reference resolution, in pixels
WALL_REFERENCE = 128
# Points with 1/SEAM_REACH <= |z| <= SEAM_REACH are checked in both charts
SEAM_REACH = 1.25


@dataclass(frozen=True)
class RasterRegion:
    """A connected region of the sampled complement."""
    id: int
    pixel_count: int
    witness: complex
    clearance: float
    tracked: bool


def _to_pixels(z, resolution):
    scale = resolution / (2 * CHART_EXTENT)
    cols = np.floor((z.real + CHART_EXTENT) * scale).astype(int)
    rows = np.floor((z.imag + CHART_EXTENT) * scale).astype(int)
    return rows, cols


def _centres(resolution):
    step = 2 * CHART_EXTENT / resolution
    axis = -CHART_EXTENT + (np.arange(resolution) + 0.5) * step
    xs, ys = np.meshgrid(axis, axis)
    return xs + 1j * ys


class SphereRaster:
    """
    Flood-filled complement of a limit sample on the sphere.

    Parameters:
    -----------
    points : array of complex
        The limit sample (∞ allowed).
    resolution : int
        Pixels per chart side.
    """

    def __init__(self, points, resolution):
        if resolution < 8:
            raise ValueError(f"Resolution must be at least 8, got {resolution}")
        self.resolution = resolution
        self.grid = _centres(resolution)
        self.domain = [np.abs(self.grid) <= CHART_EXTENT] * 2
        # each chart owns the half of the sphere it is centred on
        self.owned = [np.abs(self.grid) <= 1.0, np.abs(self.grid) < 1.0]
        self.walls = [self._walls(points, chart) for chart in (0, 1)]
        self.labels = []
        for chart in (0, 1):
            free = self.domain[chart] & ~self.walls[chart]
            labels, count = ndimage.label(free)
            self.labels.append(labels)
            logger.debug(f"Chart {chart}: {count} raw regions at resolution {resolution}")
        self.regions, self._lookup = self._glue()

    def _chart_coords(self, points, chart):
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        if chart == 0:
            return np.where(np.isfinite(z), z, np.nan)
        with np.errstate(divide='ignore', invalid='ignore'):
            w = np.where(np.isfinite(z), 1 / z, 0j)
        w[np.isfinite(z) & (z == 0)] = np.nan
        return w

    def _walls(self, points, chart):
        r = self.resolution
        walls = np.zeros((r, r), dtype=bool)
        c = self._chart_coords(points, chart)
        c = c[np.isfinite(c)]
        rows, cols = _to_pixels(c, r)
        ok = (rows >= 0) & (rows < r) & (cols >= 0) & (cols < r)
        walls[rows[ok], cols[ok]] = True
        return ndimage.binary_dilation(walls, iterations=self.wall_width)

    def _glue(self):
        graph = nx.Graph()
        for chart in (0, 1):
            for lab in np.unique(self.labels[chart]):
                if lab:
                    graph.add_node((chart, int(lab)))

        overlap = self.domain[0] & (np.abs(self.grid) > 0.5)
        z = self.grid[overlap]
        rows, cols = _to_pixels(1 / z, self.resolution)
        ok = (rows >= 0) & (rows < self.resolution) & (cols >= 0) & (cols < self.resolution)
        here = self.labels[0][overlap][ok]
        there = self.labels[1][rows[ok], cols[ok]]
        both = (here > 0) & (there > 0)
        for a, b in set(zip(here[both].tolist(), there[both].tolist())):
            graph.add_edge((0, a), (1, b))

        groups = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda g: g[0])
        edt = [ndimage.distance_transform_edt(~self.walls[chart]) for chart in (0, 1)]
        threshold = TRACK_SHARE * self.resolution ** 2

        regions = []
        lookup = {}
        for rid, group in enumerate(groups):
            count = 0
            best = (-1.0, None)
            for chart, lab in group:
                mask = (self.labels[chart] == lab) & self.owned[chart]
                count += int(mask.sum())
                if mask.any():
                    d = np.where(mask, edt[chart], -1.0)
                    k = np.unravel_index(int(np.argmax(d)), d.shape)
                    if d[k] > best[0]:
                        best = (float(d[k]), self._point(chart, k))
                lookup[(chart, lab)] = rid
            if best[1] is None:
                continue
            regions.append(RasterRegion(rid, count, best[1], best[0], count > threshold))
        # regions without owned pixels were skipped; keep ids dense
        remap = {r.id: i for i, r in enumerate(regions)}
        regions = [RasterRegion(remap[r.id], r.pixel_count, r.witness, r.clearance, r.tracked)
                   for r in regions]
        lookup = {k: remap[v] for k, v in lookup.items() if v in remap}
        return regions, lookup

    def _point(self, chart, index):
        c = complex(self.grid[index])
        if chart == 0:
            return c
        return INF if c == 0 else 1 / c

    @property
    def tracked(self):
        return [r for r in self.regions if r.tracked]

    def _region_array(self, chart):
        table = np.full(int(self.labels[chart].max()) + 1, -1, dtype=int)
        for (c, lab), rid in self._lookup.items():
            if c == chart:
                table[lab] = rid
        return table

    @property
    def wall_width(self):
        """Dilation radius of a wall stamp, in pixels."""
        return max(1, self.resolution // WALL_REFERENCE)

    def adjacent_mask(self, points, region_id):
        """
        Which sample points touch ``region_id``.

        A point is adjacent when some pixel of the region lies within the wall
        dilation radius plus one pixel of the point's stamp. The stamps of neighbouring
        points may sit one pixel closer to the region than the point's own, so the reach
        carries one pixel more. Points in the chart overlap are looked up in both charts.
        """
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        result = np.zeros(len(z), dtype=bool)
        reach = self.wall_width + 2
        offsets = [(dr, dc) for dr in range(-reach, reach + 1) for dc in range(-reach, reach + 1)]
        finite = np.isfinite(z)
        with np.errstate(invalid='ignore'):
            in_chart0 = finite & (np.abs(z) <= SEAM_REACH)
            in_chart1 = ~finite | (np.abs(z) >= 1 / SEAM_REACH)
        for chart, mask in ((0, in_chart0), (1, in_chart1)):
            if not mask.any():
                continue
            table = self._region_array(chart)
            c = self._chart_coords(z[mask], chart)
            c = np.where(np.isfinite(c), c, 0j)
            rows, cols = _to_pixels(c, self.resolution)
            hit = np.zeros(len(c), dtype=bool)
            for dr, dc in offsets:
                r = np.clip(rows + dr, 0, self.resolution - 1)
                k = np.clip(cols + dc, 0, self.resolution - 1)
                hit |= table[self.labels[chart][r, k]] == region_id
            result[mask] |= hit
        return result

    def region_of(self, point):
        """Region id containing ``point``, or None on a wall pixel."""
        p = complex(point)
        chart = 0 if np.isfinite(p) and abs(p) <= 1.0 else 1
        c = self._chart_coords([p], chart)[0]
        if not np.isfinite(c):
            c = 0j
        rows, cols = _to_pixels(np.array([c]), self.resolution)
        r, k = int(rows[0]), int(cols[0])
        if not (0 <= r < self.resolution and 0 <= k < self.resolution):
            return None
        lab = int(self.labels[chart][r, k])
        if lab == 0:
            return None
        return self._lookup.get((chart, lab))
