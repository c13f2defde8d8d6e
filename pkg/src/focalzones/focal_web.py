"""The web of perpendicular bisectors and the focal / Brillouin indices.

For ``z`` in the disk with ``r = d(0, z)``:

* ``iota``    = number of orbit points in the open disk D(z, r), equivalently
  the number of bisectors crossing the open segment (0, z);
* ``upsilon`` = number of bisectors through z;
* ``B = iota + upsilon + 1`` counts orbit points (0 included) in the
  closed disk, and ``I = upsilon + 1`` is the focal index.

The k-th zone is where ``upsilon == 0`` and ``B == k`` (so zone 1 is the
open Dirichlet domain).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import DegeneracyError, IncompleteDomainError, InvalidBoundError, MissingZoneError, TruncationError
from .fuchsian import OrbitBall, OrbitPoint
from .hypkernel import (
    ON_LINE_TOL,
    TWO_PI,
    DiskPoint,
    Geodesic,
    Interval,
    angle_diff,
    disk_to_klein,
    klein_to_disk,
    wrap_angle,
)


@dataclass(frozen=True)
class BisectorLine:
    lam: OrbitPoint
    line: Geodesic
    delta: float
    interval: Interval


@dataclass(frozen=True)
class FocalIndices:
    iota: int
    upsilon: int
    brillouin: int
    focal: int

    @classmethod
    def from_counts(cls, iota: int, upsilon: int) -> FocalIndices:
        return cls(iota, upsilon, iota + upsilon + 1, upsilon + 1)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.iota, self.upsilon, self.brillouin, self.focal


@dataclass(frozen=True, eq=False)
class Web:
    """Bisectors of all nonzero orbit points, sorted by (delta, direction).

    Arrays are indexed by line; ``source[i]`` is the ball index of the
    orbit point defining line ``i``.
    """

    ball: OrbitBall
    source: np.ndarray
    lam: np.ndarray
    delta: np.ndarray
    phi: np.ndarray
    half_width: np.ndarray
    # 1 - tanh(delta), kept separately for deep lines
    gap: np.ndarray

    def __len__(self):
        return len(self.source)

    @property
    def query_radius_limit(self) -> float:
        return self.ball.R / 2.0 if len(self) else 0.0

    @property
    def genus(self) -> int:
        return self.ball.genus

    @cached_property
    def tanh_delta(self) -> np.ndarray:
        return np.tanh(self.delta)

    @cached_property
    def _delta_key(self) -> np.ndarray:
        return np.round(self.delta, 9)

    def upto(self, delta: float) -> int:
        """Number of lines with delta <= ``delta`` (+1e-9 slack)."""
        return int(np.searchsorted(self._delta_key, delta + 1e-9, side="right"))

    def line(self, i: int) -> BisectorLine:
        j = int(self.source[i])
        lam = OrbitPoint(DiskPoint.from_complex(complex(self.lam[i])), self.ball.word(j),
                         float(self.ball.radii[j]))
        phi, hw = float(self.phi[i]), float(self.half_width[i])
        return BisectorLine(lam, Geodesic(phi - hw, phi + hw), float(self.delta[i]), Interval(phi, hw))

    @property
    def lines(self) -> list[BisectorLine]:
        return [self.line(i) for i in range(len(self))]

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        return wrap_angle(self.phi - self.half_width), wrap_angle(self.phi + self.half_width)


def build_web(ball: OrbitBall, require_complete: bool = True) -> Web:
    if require_complete and not ball.complete:
        raise TruncationError("orbit ball is not certified complete")
    idx = np.arange(1, len(ball))
    lam = ball.points[idx]
    r = ball.radii[idx]
    delta = r / 2.0
    phi = wrap_angle(np.angle(lam))
    sh = np.sinh(delta)
    # arccos(tanh(delta)) = atan2(1, sinh(delta))
    hw = np.arctan2(1.0, sh)
    gap = 2.0 / (np.exp(r) + 1.0)
    order = np.lexsort((phi, np.round(delta, 9)))
    return Web(ball, idx[order], lam[order], delta[order], phi[order], hw[order], gap[order])


def crossing_radii(web: Web, theta, stop: int | None = None) -> np.ndarray:
    """Hyperbolic radius at which the ray from 0 at angle ``theta`` crosses each line.

    Right-triangle trigonometry: tanh(delta) = tanh(rho) cos(angle to the foot).
    Lines missed by the ray get ``inf``. Broadcasts over a 1-D ``theta``
    (result shape ``(len(theta), stop)``).
    """
    stop = len(web) if stop is None else stop
    th = np.asarray(theta, dtype=float)[..., None]
    dphi = angle_diff(th, web.phi[:stop])
    cos_d = np.cos(dphi)
    # cos(dphi) - tanh(delta), without cancellation
    margin = web.gap[:stop] - 2.0 * np.sin(dphi / 2.0) ** 2
    hit = margin > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        x = web.tanh_delta[:stop] / cos_d
        one_minus_x = margin / cos_d
        rho = 0.5 * np.log1p(2.0 * x / one_minus_x)
    return np.where(hit, rho, np.inf)


def _crossing_counts(web: Web, z: complex, rz: float, tol: float) -> tuple[int, int]:
    if rz == 0.0:
        return 0, 0
    stop = web.upto(rz + tol)
    rho = crossing_radii(web, math.atan2(z.imag, z.real), stop)
    return int(np.count_nonzero(rho < rz - tol)), int(np.count_nonzero(np.abs(rho - rz) <= tol))


def indices(web: Web, z, tol_on: float = ON_LINE_TOL) -> FocalIndices:
    """Focal indices at z, cross-checked by the disk-count and ray-crossing routes."""
    zc = z.z if isinstance(z, DiskPoint) else complex(z)
    rz = 2.0 * math.atanh(abs(zc))
    if rz > web.query_radius_limit + 1e-12 and rz > 0:
        raise TruncationError(
            f"query radius {rz:.6g} exceeds the validity limit {web.query_radius_limit:.6g}")
    if rz == 0.0:
        return FocalIndices.from_counts(0, 0)
    iota_a, ups_a = web.ball.disk_counts(zc, tol_on)
    iota_b, ups_b = _crossing_counts(web, zc, rz, tol_on)
    if (iota_a, ups_a) != (iota_b, ups_b):
        raise DegeneracyError(
            f"disk count {(iota_a, ups_a)} and crossing count {(iota_b, ups_b)} disagree at "
            f"z={zc!r}; the point is within tolerance of a web line")
    return FocalIndices.from_counts(iota_a, ups_a)


@dataclass(frozen=True, eq=False)
class ZoneMap:
    """Indices on a polar grid; cell (i, j) is centred at (radii[i], thetas[j])."""

    genus: int
    radii: np.ndarray
    thetas: np.ndarray
    iota: np.ndarray
    upsilon: np.ndarray
    degenerate: np.ndarray

    @property
    def brillouin(self) -> np.ndarray:
        return self.iota + self.upsilon + 1

    @property
    def focal(self) -> np.ndarray:
        return self.upsilon + 1

    @property
    def zone(self) -> np.ndarray:
        """Zone label k where upsilon == 0, else 0 (boundary)."""
        return np.where((self.upsilon == 0) & ~self.degenerate, self.brillouin, 0)

    @property
    def boundary_fraction(self) -> float:
        return float(np.mean(self.zone == 0))

    def rows(self):
        """(r, theta, iota, upsilon, B, I, degenerate) in row-major cell order."""
        B, I = self.brillouin, self.focal
        for i, r in enumerate(self.radii):
            for j, t in enumerate(self.thetas):
                yield (float(r), float(t), int(self.iota[i, j]), int(self.upsilon[i, j]),
                       int(B[i, j]), int(I[i, j]), bool(self.degenerate[i, j]))


def classify_grid(web: Web, n_r: int, n_theta: int, r_max: float | None = None,
                  tol_on: float = ON_LINE_TOL, n_check: int = 64, chunk: int = 64) -> ZoneMap:
    """Classify a polar grid by sweeping each ray once.

    Along a ray iota only increases, by one at each crossing, so the sorted
    crossing radii give every cell on the ray. A deterministic subsample
    of ``n_check`` cells is re-evaluated with :func:`indices` (both routes).
    """
    if n_r < 16 or n_theta < 64:
        raise ValueError("grid must be at least 16 x 64")
    limit = web.query_radius_limit
    r_max = limit if r_max is None else r_max
    if r_max > limit + 1e-12:
        raise TruncationError(f"grid radius {r_max:.6g} exceeds the validity limit {limit:.6g}")
    radii = (np.arange(n_r) + 0.5) * (r_max / n_r)
    thetas = (np.arange(n_theta) + 0.5) * (TWO_PI / n_theta)
    iota = np.zeros((n_r, n_theta), dtype=np.int64)
    ups = np.zeros((n_r, n_theta), dtype=np.int64)
    stop = web.upto(r_max + tol_on)
    for lo in range(0, n_theta, chunk):
        rho = np.sort(crossing_radii(web, thetas[lo:lo + chunk], stop), axis=1)
        for jj, row in enumerate(rho):
            below = np.searchsorted(row, radii - tol_on, side="left")
            upto = np.searchsorted(row, radii + tol_on, side="right")
            iota[:, lo + jj] = below
            ups[:, lo + jj] = upto - below
    degenerate = ups > 0
    if n_check:
        rng = np.random.default_rng(0)
        cells = rng.choice(n_r * n_theta, size=min(n_check, n_r * n_theta), replace=False)
        for c in cells:
            i, j = divmod(int(c), n_theta)
            z = math.tanh(radii[i] / 2.0) * complex(math.cos(thetas[j]), math.sin(thetas[j]))
            try:
                got = indices(web, z, tol_on)
            except DegeneracyError:
                degenerate[i, j] = True
                continue
            if (got.iota, got.upsilon) != (iota[i, j], ups[i, j]):
                raise DegeneracyError(f"grid sweep disagrees with direct indices at cell {(i, j)}")
    return ZoneMap(web.genus, radii, thetas, iota, ups, degenerate)


def _clip_klein(poly: np.ndarray, phi: float, c: float) -> np.ndarray:
    """Clip a convex polygon (complex vertices) to Re(k exp(-i phi)) <= c."""
    if len(poly) == 0:
        return poly
    u = complex(math.cos(phi), -math.sin(phi))
    s = (poly * u).real - c
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = s[i], s[(i + 1) % n]
        if sp <= 0:
            out.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            out.append(p + (q - p) * (sp / (sp - sq)))
    return np.array(out, dtype=complex)


def _polygon_max_radius(poly: np.ndarray) -> float:
    m = np.abs(poly).max()
    return math.inf if m >= 1.0 else float(np.arctanh(m))


def dirichlet_domain(web: Web, n_samples: int = 129, tol_on: float = ON_LINE_TOL) -> list[BisectorLine]:
    """Lines carrying an edge of the Dirichlet domain at 0 (closure of zone 1).

    The domain is first cut out by half-plane clipping in the Klein model
    (geodesics are chords there), processing lines by increasing delta
    until no remaining line can reach the polygon. Every clipped edge is
    confirmed by finding a point with iota = 0 and upsilon = 1 on it, and
    every other line within the circumradius is sampled to confirm that no
    such point exists on it.
    """
    if len(web) == 0:
        raise IncompleteDomainError("empty web: the truncation contains no orbit points besides 0")
    limit = web.query_radius_limit
    poly = np.exp(1j * (np.arange(4) * math.pi / 2 + math.pi / 4)) * math.sqrt(2.0)
    cutters = []
    for i in range(len(web)):
        d = float(web.delta[i])
        if d > _polygon_max_radius(poly):
            break
        new = _clip_klein(poly, float(web.phi[i]), float(web.tanh_delta[i]))
        if len(new) != len(poly) or not np.allclose(new, poly, atol=1e-15):
            cutters.append(i)
        poly = new
    circumradius = _polygon_max_radius(poly)
    if not math.isfinite(circumradius) or circumradius > limit:
        raise IncompleteDomainError(
            f"Dirichlet domain not closed inside the validity radius {limit:.6g}; raise R")

    ball = web.ball
    vertices = klein_to_disk(poly)

    def is_edge_point(x: complex) -> bool:
        rx = 2.0 * math.atanh(abs(x))
        if rx > limit:
            return False
        iota, ups = ball.disk_counts(x, tol_on)
        return iota == 0 and ups == 1

    edges = []
    for i in cutters:
        on_line = []
        for k in range(len(poly)):
            mid_k = (poly[k] + poly[(k + 1) % len(poly)]) / 2.0
            u = complex(math.cos(web.phi[i]), -math.sin(web.phi[i]))
            if abs((mid_k * u).real - web.tanh_delta[i]) < 1e-9:
                on_line.append(complex(klein_to_disk(mid_k)))
        if any(is_edge_point(x) for x in on_line):
            edges.append(i)

    # independent sweep: sample along every line that could touch the domain
    hits = set()
    for i in range(web.upto(circumradius)):
        d = float(web.delta[i])
        s_max = math.acosh(max(1.0, math.cosh(circumradius) / math.cosh(d)))
        if s_max == 0.0:
            continue
        g = Geodesic(web.phi[i] - web.half_width[i], web.phi[i] + web.half_width[i])
        for x in g.point_at(np.linspace(-s_max, s_max, n_samples)[1:-1]):
            if is_edge_point(complex(x)):
                hits.add(i)
                break
    if hits - set(edges):
        raise DegeneracyError("sampling found Dirichlet edges missed by polygon clipping")
    del vertices
    return [web.line(i) for i in sorted(edges, key=lambda i: (float(web.phi[i])))]


@dataclass(frozen=True)
class ZoneRadiusStats:
    r_min: float
    r_max: float
    tau: float
    excess: float


def tau(g: int, k: int) -> float:
    """Asymptotic radius log(4 (g-1) k) of the k-th zone."""
    return math.log(4.0 * (g - 1) * k)


def zone_radius_stats(zmap: ZoneMap, k: int) -> ZoneRadiusStats:
    mask = zmap.zone == k
    if not mask.any():
        raise MissingZoneError(f"zone {k} does not occur in the grid; refine it or raise R")
    rr = np.broadcast_to(zmap.radii[:, None], mask.shape)[mask]
    r_min, r_max = float(rr.min()), float(rr.max())
    t = tau(zmap.genus, k)
    return ZoneRadiusStats(r_min, r_max, t, max(abs(r_min - t), abs(r_max - t)))


def kappa(t):
    """log(e^t + e^-t + 2) - t, mapping [0, inf) onto (0, log 4]."""
    t = np.asarray(t, dtype=float)
    out = np.log1p(np.exp(-2.0 * t) + 2.0 * np.exp(-t))
    return float(out) if out.ndim == 0 else out


def _radius_for_count(target: float) -> float:
    """Solve r + kappa(r) = log(target), i.e. cosh^2(r/2) = target / 4; 0 if target <= 4."""
    q = target / 4.0
    return 2.0 * math.acosh(math.sqrt(q)) if q > 1.0 else 0.0


def zone_radius_bracket(k: int, g: int, c_hat: Callable[[float], float],
                        max_iter: int = 200, tol: float = 1e-12) -> tuple[float, float]:
    """Radii compatible with iota = k under the counting bound |iota/cosh^2(r/2) - beta| <= C(r).

    The bounds come from log(4k/(beta +- C(r))) = r + kappa(r), each solved
    by fixed-point iteration in r starting from the C = 0 solution.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    beta = 1.0 / (g - 1)

    def solve(sign: int) -> float:
        r = _radius_for_count(4.0 * k / beta)
        for _ in range(max_iter):
            c = float(c_hat(r))
            if c < 0:
                raise InvalidBoundError("C_hat must be nonnegative")
            den = beta + sign * c
            if den <= 0:
                raise InvalidBoundError(f"C_hat({r:.6g}) = {c:.6g} >= beta = {beta:.6g}; upper bound undefined")
            nxt = _radius_for_count(4.0 * k / den)
            if abs(nxt - r) <= tol:
                return nxt
            r = nxt
        return r

    lo, hi = solve(+1), solve(-1)
    return min(lo, hi), max(lo, hi)
