"""
Möbius transformations of the Riemann sphere.

Points of the sphere are Python complex numbers, with ``INF`` standing for the
point at infinity. Maps are stored in SL(2, C) (determinant one); a matrix and
its negative act identically and compare equal.
"""

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..utils.errors import NoSquareRoot

INF = complex(math.inf, 0.0)

# Map classes by trace
IDENTITY = 'identity'
PARABOLIC = 'parabolic'
ELLIPTIC = 'elliptic'
HYPERBOLIC = 'hyperbolic'
LOXODROMIC = 'loxodromic'

MAP_KINDS = (IDENTITY, PARABOLIC, ELLIPTIC, HYPERBOLIC, LOXODROMIC)

# Default tolerances, overridable through the Tolerances bundle
TAU_DET = 1e-9
TAU_TR = 1e-8
TAU_PT = 1e-6

# Entries below this (relative to the matrix norm) count as zero
_ZERO = 1e-14
# Products with a larger squared norm are not renormalized
_RENORM_LIMIT = 1e8


def is_inf(p):
    """True when ``p`` is the point at infinity (or overflowed to it)."""
    return cmath.isinf(p)


def _clean(p):
    return INF if cmath.isinf(p) or cmath.isnan(p) else complex(p)


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """
    A fractional linear transformation z ↦ (a z + b) / (c z + d).

    Construct through ``MoebiusMap.from_entries`` to get determinant normalization.
    """
    a: complex
    b: complex
    c: complex
    d: complex

    # -- construction -------------------------------------------------------

    @classmethod
    def from_entries(cls, a, b, c, d):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0:
            raise ValueError(f"Degenerate matrix [[{a}, {b}], [{c}, {d}]] has zero determinant")
        s = cmath.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def from_real8(cls, values):
        """Build from ``[a_re, a_im, b_re, b_im, c_re, c_im, d_re, d_im]``."""
        if len(values) != 8:
            raise ValueError(f"Expected 8 reals, got {len(values)}")
        v = [float(x) for x in values]
        return cls.from_entries(complex(v[0], v[1]), complex(v[2], v[3]),
                                complex(v[4], v[5]), complex(v[6], v[7]))

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls.from_entries(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls):
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def translation(cls, t):
        return cls(1 + 0j, complex(t), 0j, 1 + 0j)

    @classmethod
    def scaling(cls, k):
        r = cmath.sqrt(complex(k))
        return cls(r, 0j, 0j, 1 / r)

    # -- basic data ---------------------------------------------------------

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def to_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def to_real8(self):
        out = []
        for x in self.entries:
            out.extend([x.real, x.imag])
        return out

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def norm2(self):
        return sum(abs(x) ** 2 for x in self.entries)

    def normalized(self):
        return MoebiusMap.from_entries(*self.entries)

    def is_real(self, tol=TAU_TR):
        """True when some sign of the matrix has real entries within ``tol``."""
        return all(abs(x.imag) <= tol for x in self.entries) or \
            all(abs(x.real) <= tol for x in self.entries)

    def is_identity(self, tol=TAU_TR):
        return (abs(self.b) <= tol and abs(self.c) <= tol and abs(self.a - self.d) <= tol
                and min(abs(self.a - 1), abs(self.a + 1)) <= tol)

    # -- algebra ------------------------------------------------------------

    def compose(self, other):
        """The map self ∘ other, renormalized to determinant one."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        p, q, r, s = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
        if abs(p) ** 2 + abs(q) ** 2 + abs(r) ** 2 + abs(s) ** 2 > _RENORM_LIMIT:
            # the determinant is lost to cancellation at this size
            return MoebiusMap(p, q, r, s)
        k = cmath.sqrt(p * s - q * r)
        return MoebiusMap(p / k, q / k, r / k, s / k)

    __matmul__ = compose

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def power(self, k):
        result = MoebiusMap.identity()
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result @ base
        return result

    def conjugate_by(self, h):
        """h ∘ self ∘ h⁻¹."""
        return h @ self @ h.inverse()

    # -- action -------------------------------------------------------------

    def __call__(self, p):
        return apply(self, p)

    def apply_array(self, z):
        """Vectorized action on a complex array; infinite entries map correctly."""
        z = np.asarray(z, dtype=complex)
        out = np.empty_like(z)
        finite = np.isfinite(z)
        a, b, c, d = self.entries
        with np.errstate(divide='ignore', invalid='ignore'):
            num = a * z[finite] + b
            den = c * z[finite] + d
            val = num / den
        val[den == 0] = INF
        out[finite] = val
        out[~finite] = (a / c) if c != 0 else INF
        bad = ~np.isfinite(out)
        out[bad] = INF
        return out

    def contraction_radius(self):
        """
        Chordal radius bound of the map's image disc.

        This is the minimal spherical derivative 1/σ², where σ is the larger
        singular value of the normalized matrix.
        """
        f = self.norm2()
        sigma2 = 0.5 * (f + math.sqrt(max(f * f - 4.0, 0.0)))
        return 1.0 / sigma2 if sigma2 > 0 else 1.0

    # -- comparison ---------------------------------------------------------

    def approx_equal(self, other, tol=TAU_DET):
        mine = self.entries
        theirs = other.entries
        plus = max(abs(x - y) for x, y in zip(mine, theirs))
        minus = max(abs(x + y) for x, y in zip(mine, theirs))
        return min(plus, minus) <= tol

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.approx_equal(other)

    # equality is up to a tolerance, so maps are collected in a MapSet rather than a set
    __hash__ = None

    def __repr__(self):
        return f"MoebiusMap(a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g}, d={self.d:.6g})"


@dataclass(frozen=True)
class MapClass:
    """Classification of a map: its kind, fixed points and trace."""
    kind: str
    fixed_points: tuple
    trace: complex

    @property
    def is_loxodromic_like(self):
        return self.kind in (HYPERBOLIC, LOXODROMIC)


def compose(f, g):
    """f ∘ g."""
    return f @ g


class MapSet:
    """
    A set of maps where membership means ``approx_equal`` to a member.

    Maps are bucketed by the log of their squared norm, which does not depend on
    the sign of the matrix. Between maps equal within ``tol`` it moves by less than
    3·tol, under one bucket width, so a lookup searches the neighbouring buckets too.
    """

    def __init__(self, maps=(), tol=TAU_DET):
        self.tol = tol
        self._width = 4 * tol
        self._buckets = defaultdict(list)
        self._size = 0
        for m in maps:
            self.add(m)

    def _key(self, m):
        return math.floor(math.log(m.norm2()) / self._width)

    def __contains__(self, m):
        k = self._key(m)
        return any(m.approx_equal(x, self.tol)
                   for j in (k - 1, k, k + 1) for x in self._buckets.get(j, ()))

    def add(self, m):
        """Add ``m`` unless an equal map is present; True when it was added."""
        if m in self:
            return False
        self._buckets[self._key(m)].append(m)
        self._size += 1
        return True

    def __len__(self):
        return self._size

    def __iter__(self):
        for k in sorted(self._buckets):
            yield from self._buckets[k]


def apply(f, p):
    """
    Apply ``f`` to a sphere point.

    ∞ goes to a/c, the pole -d/c goes to ∞.
    """
    a, b, c, d = f.entries
    if is_inf(p):
        return INF if c == 0 else _clean(a / c)
    den = c * p + d
    if den == 0:
        return INF
    return _clean((a * p + b) / den)


def _zero(x, scale):
    return abs(x) <= _ZERO * max(scale, 1.0)


def fixed_points(f, tol=TAU_TR):
    """
    Fixed points of ``f`` from c z² + (d - a) z - b = 0.

    Returns an empty tuple for the identity and one point for parabolic maps.
    """
    a, b, c, d = f.entries
    scale = max(abs(x) for x in f.entries)
    if f.is_identity(tol):
        return ()
    t = a + d
    parabolic = abs(t * t - 4) <= tol
    if _zero(c, scale):
        if parabolic or abs(a - d) <= tol * max(scale, 1.0):
            return (INF,)
        return (_clean(b / (d - a)), INF)
    if parabolic:
        return (_clean((a - d) / (2 * c)),)
    s = cmath.sqrt(t * t - 4)
    u = a - d
    # pick the sign that avoids cancellation
    if (u.conjugate() * s).real < 0:
        s = -s
    q = u + s
    z1 = q / (2 * c)
    z2 = (-2 * b / q) if q != 0 else (u - s) / (2 * c)
    return (_clean(z1), _clean(z2))


def classify(f, tol=TAU_TR):
    """
    Classify ``f`` by its trace.

    |tr² - 4| ≤ tol is parabolic; a trace with |Im tr| ≤ tol is treated as real,
    giving elliptic (|tr| < 2) or hyperbolic (|tr| > 2); otherwise loxodromic.
    """
    t = f.trace()
    if f.is_identity(tol):
        return MapClass(IDENTITY, (), t)
    fixed = fixed_points(f, tol)
    if abs(t * t - 4) <= tol:
        kind = PARABOLIC
    elif abs(t.imag) <= tol:
        kind = ELLIPTIC if abs(t.real) < 2 else HYPERBOLIC
    else:
        kind = LOXODROMIC
    return MapClass(kind, fixed, t)


def attracting_fixed_point(f, tol=TAU_TR):
    """
    The attracting fixed point of a parabolic, hyperbolic or loxodromic map.

    Returns None for the identity and for elliptic maps.
    """
    info = classify(f, tol)
    if info.kind in (IDENTITY, ELLIPTIC):
        return None
    if info.kind == PARABOLIC:
        return info.fixed_points[0]
    a, b, c, d = f.entries
    z1, z2 = info.fixed_points
    if is_inf(z2) or is_inf(z1):
        # c == 0: the finite fixed point has multiplier a/d
        return (z1 if not is_inf(z1) else z2) if abs(a) < abs(d) else INF
    return z1 if abs(c * z1 + d) > abs(c * z2 + d) else z2


def repelling_fixed_point(f, tol=TAU_TR):
    info = classify(f, tol)
    if not info.is_loxodromic_like:
        return None
    attracting = attracting_fixed_point(f, tol)
    z1, z2 = info.fixed_points
    return z2 if chordal_dist(z1, attracting) < chordal_dist(z2, attracting) else z1


def _branch(g, tol=TAU_TR):
    t = g.trace()
    if t.real < -tol or (abs(t.real) <= tol and t.imag < 0):
        return MoebiusMap(-g.a, -g.b, -g.c, -g.d)
    return g


def matrix_sqrt(f, twist=False, tol=TAU_TR):
    """
    A square root of ``f`` as a sphere action.

    The principal root satisfies g² = f as matrices; ``twist=True`` returns the
    other action root, g² = -f. Non-parabolic maps are diagonalized, parabolic
    ones use the closed form (h + sI)/sqrt(s tr h + 2). The sign of the result is
    chosen so that Re(tr g) ≥ 0, ties broken by Im(tr g) ≥ 0.

    Raises
    ------
    NoSquareRoot
        When the requested root would be a root of minus the identity.
    """
    if f.is_identity(tol):
        plus = abs(f.a - 1) <= tol
        if plus != bool(twist):
            return MoebiusMap.identity()
        raise NoSquareRoot(f"Refusing square root of minus the identity ({f!r})")

    h = MoebiusMap(-f.a, -f.b, -f.c, -f.d) if twist else f
    t = h.trace()
    if abs(t * t - 4) <= tol:
        s = 1.0 if t.real >= 0 else -1.0
        k = cmath.sqrt(s * t + 2)
        g = MoebiusMap((h.a + s) / k, h.b / k, h.c / k, (h.d + s) / k)
        return _branch(g.normalized(), tol)

    values, vectors = np.linalg.eig(h.to_array())
    mu = cmath.sqrt(complex(values[0]))
    root = vectors @ np.diag([mu, 1 / mu]) @ np.linalg.inv(vectors)
    return _branch(MoebiusMap.from_array(root), tol)


def sphere_coords(points):
    """
    Embed sphere points in R³ (unit sphere) by inverse stereographic projection.

    The Euclidean distance between embedded points is the chordal distance.
    """
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.zeros((z.shape[0], 3))
    infinite = ~np.isfinite(z)
    small = np.isfinite(z) & (np.abs(z) <= 1.0)
    large = np.isfinite(z) & (np.abs(z) > 1.0)

    zs = z[small]
    r2 = np.abs(zs) ** 2
    out[small, 0] = 2 * zs.real / (1 + r2)
    out[small, 1] = 2 * zs.imag / (1 + r2)
    out[small, 2] = (r2 - 1) / (1 + r2)

    w = 1 / z[large]
    r2 = np.abs(w) ** 2
    out[large, 0] = 2 * w.real / (1 + r2)
    out[large, 1] = -2 * w.imag / (1 + r2)
    out[large, 2] = (1 - r2) / (1 + r2)

    out[infinite] = (0.0, 0.0, 1.0)
    return out


def chordal_dist(p, q):
    """Chordal distance 2|p - q| / sqrt((1 + |p|²)(1 + |q|²)), extended to ∞."""
    x = sphere_coords([p, q])
    return math.sqrt(float(np.sum((x[0] - x[1]) ** 2)))


def chordal_dist_array(p, points):
    """Chordal distances from ``p`` to every entry of ``points``."""
    x = sphere_coords(points)
    y = sphere_coords([p])[0]
    return np.sqrt(np.sum((x - y) ** 2, axis=1))


def points_equal(p, q, tol=TAU_PT):
    return chordal_dist(p, q) <= tol


def rotation_chart(pole):
    """
    A sphere rotation sending ``pole`` to ∞ (the identity when the pole is ∞).

    Used as a chart in which curves avoiding the pole are bounded.
    """
    if is_inf(pole):
        return MoebiusMap.identity()
    p = complex(pole)
    return MoebiusMap.from_entries(p.conjugate(), 1, 1, -p)


def normalizing_chart(p, q):
    """A map sending ``p`` to 0 and ``q`` to ∞."""
    if is_inf(q):
        return MoebiusMap.from_entries(1, -p, 0, 1)
    if is_inf(p):
        return MoebiusMap.from_entries(0, 1, 1, -q)
    return MoebiusMap.from_entries(1, -p, 1, -q)
