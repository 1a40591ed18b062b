"""
Geometry Package

Sphere arithmetic shared by the analyzers:
- moebius.py: Möbius maps, classification, square roots, chordal metric
- group.py: generators, words, enumeration, square-root adjunction, stabilizer test
- pointsets.py: deduplication, Hausdorff distances and clustering of sphere points
- polygon.py: cyclic ordering, simplicity and side tests for sampled curves
- raster.py: two-chart flood fill of the complement of a limit sample
"""

from .moebius import (
    INF, MoebiusMap, MapClass, apply, compose, classify, fixed_points,
    attracting_fixed_point, matrix_sqrt, chordal_dist, sphere_coords,
)
from .group import (
    GroupSpec, Word, reduce, adjoin_sqrt, enumerate_words, iter_words,
    grandma_recipe, stabilizer_membership, PRUNE,
)

__all__ = [
    'INF', 'MoebiusMap', 'MapClass', 'apply', 'compose', 'classify', 'fixed_points',
    'attracting_fixed_point', 'matrix_sqrt', 'chordal_dist', 'sphere_coords',
    'GroupSpec', 'Word', 'reduce', 'adjoin_sqrt', 'enumerate_words', 'iter_words',
    'grandma_recipe', 'stabilizer_membership', 'PRUNE',
]
