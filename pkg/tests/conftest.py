import cmath
import math

import numpy as np
import pytest

from src.analyzers.components import make_record
from src.geometry.group import GroupSpec, adjoin_sqrt
from src.geometry.moebius import INF, MoebiusMap
from src.utils.tolerances import Tolerances


BASELINE_A = MoebiusMap.from_entries(1, 1, 1, 2)
BASELINE_B = MoebiusMap.from_entries(1, -1, -1, 2)


def sector_boundary(centre, half_width=math.pi / 4, steps=40):
    """Two rays bounding the sector |arg z - centre| < half_width, with 0 and ∞."""
    radii = 2.0 ** (np.arange(-steps, steps + 1) / 4.0)
    points = [0j, INF]
    for edge in (centre - half_width, centre + half_width):
        points.extend(radii * cmath.exp(1j * edge))
    return points


def sector_record(cid, centre, stabilizers=()):
    return make_record(cid, sector_boundary(centre), cmath.exp(1j * centre), stabilizers)


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def baseline_spec():
    return GroupSpec((('a', BASELINE_A), ('b', BASELINE_B)),
                     fuchsian_model={'a': BASELINE_A, 'b': BASELINE_B}, name='baseline')


@pytest.fixture
def root_spec():
    """z -> 4z with a twisted square root adjoined: the root acts as z -> -2z."""
    four = MoebiusMap.scaling(4)
    spec = GroupSpec((('a', four),), fuchsian_model={'a': four})
    return adjoin_sqrt(spec, 'a', twist=True)


@pytest.fixture
def two_sectors(root_spec):
    """Components |arg z| < π/4 and |arg z - π| < π/4, each stabilized by z -> 4z."""
    square = root_spec.word((1, 1))
    return [sector_record(0, 0.0, [square]), sector_record(1, math.pi, [square])]


@pytest.fixture
def rotating_spec():
    """z -> 2ω z with ω a cube root of unity, modelled through its cube z -> 8z."""
    f = MoebiusMap.scaling(2 * cmath.exp(2j * math.pi / 3))
    return GroupSpec((('f', f),), fuchsian_model={'f': MoebiusMap.scaling(8)}, model_powers={'f': 3})


@pytest.fixture
def three_sectors(rotating_spec):
    cube = rotating_spec.word((1, 1, 1))
    return [sector_record(k, 2 * math.pi * k / 3, [cube]) for k in range(3)]
