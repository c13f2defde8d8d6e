"""Closed-form primitives of the Poincare disk model (curvature -1).

Points are complex numbers ``z`` with ``|z| < 1``; the metric is
``cosh d(z, w) = 1 + 2|z - w|^2 / ((1 - |z|^2)(1 - |w|^2))``.

A geodesic is stored by its two endpoint angles on the unit circle.
Everything else (Euclidean circle, distance to the origin, boundary arc)
is derived from the midpoint angle ``phi`` of the shorter endpoint arc and
its half-width ``alpha``: the geodesic is the set

    cos(alpha) * (1 + |z|^2) - 2 Re(z exp(-i phi)) = 0

which also covers diameters (``alpha = pi/2``).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import DegeneracyError, DegenerateBisectorError

TWO_PI = 2.0 * math.pi

BOUNDARY_MARGIN = 1e-12
GEOM_TOL = 1e-9
ON_LINE_TOL = 1e-7
RENORM_FAIL = 1e-6


def wrap_angle(theta):
    """Reduce to [0, 2pi)."""
    out = np.mod(theta, TWO_PI)
    if np.ndim(out) == 0:
        out = float(out)
        return 0.0 if out >= TWO_PI else out
    return np.where(out >= TWO_PI, 0.0, out)


def angle_diff(a, b):
    """Signed difference ``a - b`` reduced to [-pi, pi)."""
    return np.mod(np.asarray(a) - np.asarray(b) + math.pi, TWO_PI) - math.pi


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("disk point coordinates must be finite")
        if math.hypot(self.re, self.im) > 1.0 - BOUNDARY_MARGIN:
            raise ValueError(f"point ({self.re}, {self.im}) is not inside the open unit disk")

    @classmethod
    def from_complex(cls, z: complex) -> DiskPoint:
        return cls(z.real, z.imag)

    @classmethod
    def from_polar(cls, radius: float, theta: float) -> DiskPoint:
        """Point at hyperbolic distance ``radius`` from 0 in direction ``theta``."""
        return cls.from_complex(math.tanh(radius / 2.0) * cmath.exp(1j * theta))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    @property
    def radius(self) -> float:
        return 2.0 * math.atanh(math.hypot(self.re, self.im))

    @property
    def angle(self) -> float:
        return wrap_angle(math.atan2(self.im, self.re))


def as_complex(z) -> complex:
    """Accept a DiskPoint or a complex number, validating the latter."""
    if isinstance(z, DiskPoint):
        return z.z
    return DiskPoint.from_complex(complex(z)).z


@dataclass(frozen=True)
class BoundaryAngle:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @property
    def point(self) -> complex:
        return cmath.exp(1j * self.theta)


def hyp_dist(z, w) -> float:
    z, w = as_complex(z), as_complex(w)
    num = abs(z - w)
    den = math.sqrt((1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2))
    return 2.0 * math.asinh(num / den)


def hyp_dist_many(z: complex, pts: np.ndarray, cosh_half: np.ndarray | None = None) -> np.ndarray:
    """Distances from ``z`` to an array of points.

    ``cosh_half`` optionally supplies ``1 / sqrt(1 - |p|^2)`` for each point,
    computed without cancellation (for orbit points this is ``cosh(r/2)``).
    """
    pts = np.asarray(pts, dtype=complex)
    if cosh_half is None:
        cosh_half = 1.0 / np.sqrt(1.0 - np.abs(pts) ** 2)
    return 2.0 * np.arcsinh(np.abs(pts - z) * cosh_half / math.sqrt(1.0 - abs(z) ** 2))


@dataclass(frozen=True)
class MobiusMap:
    """Disk automorphism ``z -> (a z + b) / (conj(b) z + conj(a))``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        det = abs(a) ** 2 - abs(b) ** 2
        if not math.isfinite(det) or abs(det - 1.0) > RENORM_FAIL:
            raise DegeneracyError(f"|a|^2 - |b|^2 = {det!r} drifted too far from 1")
        if abs(det - 1.0) > 0.0:
            s = math.sqrt(det)
            a, b = a / s, b / s
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, theta: float) -> MobiusMap:
        return cls(cmath.exp(0.5j * theta), 0.0)

    @classmethod
    def translation(cls, direction: float, distance: float) -> MobiusMap:
        """Hyperbolic translation through 0 along ``direction`` by ``distance``."""
        return cls(math.cosh(distance / 2.0), math.sinh(distance / 2.0) * cmath.exp(1j * direction))

    def __call__(self, z):
        return mobius_apply(self, z)

    def __matmul__(self, other: MobiusMap) -> MobiusMap:
        return mobius_compose(self, other)

    def inverse(self) -> MobiusMap:
        return mobius_inverse(self)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])

    def conjugated(self, theta: float) -> MobiusMap:
        """``R_theta o self o R_theta^-1``."""
        return MobiusMap(self.a, self.b * cmath.exp(1j * theta))


def mobius_apply(m: MobiusMap, z) -> DiskPoint:
    z = as_complex(z)
    w = (m.a * z + m.b) / (m.b.conjugate() * z + m.a.conjugate())
    return DiskPoint.from_complex(w)


def mobius_compose(m: MobiusMap, n: MobiusMap) -> MobiusMap:
    """``m o n`` (apply ``n`` first)."""
    a = m.a * n.a + m.b * n.b.conjugate()
    b = m.a * n.b + m.b * n.a.conjugate()
    return MobiusMap(a, b)


def mobius_inverse(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.a.conjugate(), -m.b)


class Side(Enum):
    MINUS = -1
    ON = 0
    PLUS = 1


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Complete geodesic given by two distinct endpoint angles (stored sorted)."""

    theta1: float
    theta2: float

    def __post_init__(self):
        t1, t2 = sorted((wrap_angle(float(self.theta1)), wrap_angle(float(self.theta2))))
        gap = min(t2 - t1, TWO_PI - (t2 - t1))
        if gap <= GEOM_TOL:
            raise ValueError("geodesic endpoints coincide")
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t2)

    def __eq__(self, other):
        if not isinstance(other, Geodesic):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def isclose(self, other: Geodesic, tol: float = GEOM_TOL) -> bool:
        straight = abs(angle_diff(self.theta1, other.theta1)) + abs(angle_diff(self.theta2, other.theta2))
        # sorting can swap endpoints that straddle angle 0
        crossed = abs(angle_diff(self.theta1, other.theta2)) + abs(angle_diff(self.theta2, other.theta1))
        return bool(min(straight, crossed) <= 2 * tol)

    @property
    def endpoints(self) -> tuple[BoundaryAngle, BoundaryAngle]:
        return BoundaryAngle(self.theta1), BoundaryAngle(self.theta2)

    @cached_property
    def _normal(self) -> tuple[float, float]:
        span = self.theta2 - self.theta1
        if span <= math.pi:
            return wrap_angle(self.theta1 + span / 2.0), span / 2.0
        return wrap_angle(self.theta2 + (TWO_PI - span) / 2.0), (TWO_PI - span) / 2.0

    @property
    def phi(self) -> float:
        """Direction of the foot of the perpendicular from 0."""
        return self._normal[0]

    @property
    def half_width(self) -> float:
        """Half the angular length of the shorter boundary arc."""
        return self._normal[1]

    @property
    def is_diameter(self) -> bool:
        return abs(self.half_width - math.pi / 2.0) <= GEOM_TOL

    @cached_property
    def circle(self) -> tuple[complex, float] | None:
        """Euclidean (center, radius) of the supporting circle; None for a diameter."""
        if self.is_diameter:
            return None
        alpha = self.half_width
        return cmath.exp(1j * self.phi) / math.cos(alpha), math.tan(alpha)

    def foot(self) -> complex:
        """Closest point to the origin (Euclidean modulus tanh(delta/2))."""
        return math.tan((math.pi / 2.0 - self.half_width) / 2.0) * cmath.exp(1j * self.phi)

    def point_at(self, s):
        """Point(s) at signed arclength ``s`` from the foot."""
        t = math.tan((math.pi / 2.0 - self.half_width) / 2.0)
        w = 1j * np.tanh(np.asarray(s, dtype=float) / 2.0)
        return cmath.exp(1j * self.phi) * (w + t) / (1.0 + t * w)

    def rotated(self, theta: float) -> Geodesic:
        return Geodesic(self.theta1 + theta, self.theta2 + theta)


@dataclass(frozen=True)
class Interval:
    """Closed boundary arc ``[center - half_width, center + half_width]``."""

    center: float
    half_width: float

    def __post_init__(self):
        object.__setattr__(self, "center", wrap_angle(float(self.center)))
        hw = float(self.half_width)
        if not (0.0 < hw <= math.pi):
            raise ValueError(f"half_width must lie in (0, pi], got {hw}")
        object.__setattr__(self, "half_width", hw)

    @property
    def length(self) -> float:
        return 2.0 * self.half_width

    @property
    def left(self) -> float:
        return wrap_angle(self.center - self.half_width)

    @property
    def right(self) -> float:
        return wrap_angle(self.center + self.half_width)

    @property
    def is_full(self) -> bool:
        return self.half_width >= math.pi

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return bool(abs(angle_diff(x, self.center)) <= self.half_width + tol)

    def contains_interval(self, other: Interval, tol: float = 0.0) -> bool:
        if self.is_full:
            return True
        return bool(abs(angle_diff(other.center, self.center)) + other.half_width <= self.half_width + tol)

    def intersects(self, other: Interval) -> bool:
        return bool(abs(angle_diff(other.center, self.center)) <= self.half_width + other.half_width)


def _lambda_params(lam) -> tuple[complex, float, float]:
    lam = as_complex(lam)
    m = abs(lam)
    if m <= GEOM_TOL:
        raise DegenerateBisectorError("bisector of [0, lambda] is undefined for lambda ~ 0")
    return lam, m, math.atan2(lam.imag, lam.real)


def bisector(lam) -> Geodesic:
    """Perpendicular bisector L_lambda of the segment [0, lambda]."""
    _, m, phi = _lambda_params(lam)
    alpha = math.atan2(math.sqrt((1.0 - m) * (1.0 + m)), m)
    return Geodesic(phi - alpha, phi + alpha)


def dist_origin(g: Geodesic) -> float:
    """Hyperbolic distance from 0 to the geodesic."""
    alpha = g.half_width
    if g.is_diameter:
        return 0.0
    return -math.log(math.tan(alpha / 2.0))


def interval_at_infinity(lam) -> Interval:
    """Shorter closed boundary arc cut off by L_lambda: length 2 arccos|lambda|."""
    _, m, phi = _lambda_params(lam)
    return Interval(phi, math.atan2(math.sqrt((1.0 - m) * (1.0 + m)), m))


def signed_distance(g: Geodesic, z) -> float:
    """Hyperbolic distance from z to g, positive on the side containing 0.

    A diameter passes through 0; its positive side is the one opposite
    the direction ``g.phi``.
    """
    z = as_complex(z)
    alpha = g.half_width
    q = math.cos(alpha) * (1.0 + abs(z) ** 2) - 2.0 * (z * cmath.exp(-1j * g.phi)).real
    return math.asinh(q / (math.sin(alpha) * (1.0 - abs(z) ** 2)))


def side_of(g: Geodesic, z, tol: float = ON_LINE_TOL) -> Side:
    s = signed_distance(g, z)
    if abs(s) <= tol:
        return Side.ON
    return Side.MINUS if s > 0 else Side.PLUS


def _in_open_arc(x, start, span):
    d = np.mod(np.asarray(x) - start, TWO_PI)
    return (d > 0) & (d < span)


def klein_to_disk(k):
    k = np.asarray(k)
    return k / (1.0 + np.sqrt(1.0 - np.abs(k) ** 2))


def disk_to_klein(z):
    z = np.asarray(z)
    return 2.0 * z / (1.0 + np.abs(z) ** 2)


def geodesic_intersection(g1: Geodesic, g2: Geodesic) -> DiskPoint | None:
    """Interior crossing point of two geodesics, or None if they do not meet."""
    if g1.isclose(g2):
        raise ValueError("identical geodesics intersect in a whole line")
    span = g1.theta2 - g1.theta1
    in1 = _in_open_arc(g2.theta1, g1.theta1, span)
    in2 = _in_open_arc(g2.theta2, g1.theta1, span)
    if bool(in1) == bool(in2):
        return None
    # chords are straight in the Klein model
    p1, p2 = cmath.exp(1j * g1.theta1), cmath.exp(1j * g1.theta2)
    q1, q2 = cmath.exp(1j * g2.theta1), cmath.exp(1j * g2.theta2)
    d1, d2 = p2 - p1, q2 - q1
    den = d1.real * d2.imag - d1.imag * d2.real
    w = q1 - p1
    s = (w.real * d2.imag - w.imag * d2.real) / den
    k = p1 + s * d1
    return DiskPoint.from_complex(complex(klein_to_disk(k)))
