"""Boundary intervals I_lambda: nesting, finite coverings, and rotation rigidity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .errors import CoverStallError, MatchingError, TruncationError
from .focal_web import Web
from .fuchsian import OrbitBall
from .hypkernel import TWO_PI, BoundaryAngle, Interval, angle_diff, wrap_angle


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """Boundary intervals of a web, longest first (the web's delta order)."""

    web: Web

    @property
    def R(self) -> float:
        return self.web.ball.R

    def __len__(self):
        return len(self.web)

    @property
    def center(self) -> np.ndarray:
        return self.web.phi

    @property
    def half_width(self) -> np.ndarray:
        return self.web.half_width

    @property
    def lengths(self) -> np.ndarray:
        return 2.0 * self.web.half_width

    @property
    def delta(self) -> np.ndarray:
        return self.web.delta

    def interval(self, i: int) -> Interval:
        return Interval(float(self.center[i]), float(self.half_width[i]))

    @property
    def intervals(self) -> list[Interval]:
        return [self.interval(i) for i in range(len(self))]

    def count_exceeding(self, eps: float) -> int:
        return int(np.count_nonzero(self.lengths > eps))


def interval_set(web: Web) -> IntervalSet:
    return IntervalSet(web)


@dataclass(frozen=True)
class NestedChain:
    intervals: list[Interval]
    indices: list[int]
    shortfall: bool


def nested_chain(iset: IntervalSet, x, depth: int, tol: float = 1e-12) -> NestedChain:
    """Greedy chain of strictly nested intervals containing x, longest first."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    theta = x.theta if isinstance(x, BoundaryAngle) else float(x)
    holds = np.abs(angle_diff(theta, iset.center)) <= iset.half_width
    chosen: list[int] = []
    for i in np.flatnonzero(holds):
        if chosen:
            cur = iset.interval(chosen[-1])
            cand = iset.interval(int(i))
            if not (cand.length < cur.length - tol and cur.contains_interval(cand)):
                continue
        chosen.append(int(i))
        if len(chosen) == depth:
            break
    return NestedChain([iset.interval(i) for i in chosen], chosen, len(chosen) < depth)


def cover_interval(iset: IntervalSet, J: Interval, eps: float) -> list[Interval]:
    """Finite cover of J by intervals of length <= eps, built by a greedy frontier sweep.

    Each step takes the admissible interval that holds the frontier strictly
    inside and reaches furthest to the right. For the full circle the sweep
    runs until it reaches back past the left end of the first pick.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    ok = iset.lengths <= eps
    c, hw = iset.center[ok], iset.half_width[ok]
    src = np.flatnonzero(ok)
    full = J.is_full
    frontier = J.center - J.half_width
    target = frontier + J.length
    picked: list[int] = []
    while True:
        off = angle_diff(frontier, c)
        inside = np.abs(off) < hw
        if not inside.any():
            raise CoverStallError(float(wrap_angle(frontier)))
        reach = np.where(inside, hw - off, -np.inf)
        k = int(np.argmax(reach))
        if not picked and full:
            target = frontier - (hw[k] + off[k]) + TWO_PI
        picked.append(int(src[k]))
        frontier = frontier + reach[k]
        if frontier >= target:
            break
    return [iset.interval(i) for i in picked]


def verify_cover(J: Interval, cover: list[Interval], eps: float | None = None) -> bool:
    """Independent check that the closed intervals cover J (endpoint sweep)."""
    if eps is not None and any(I.length > eps + 1e-12 for I in cover):
        return False
    if J.is_full:
        if any(I.is_full for I in cover):
            return True
        start, span = 0.0, TWO_PI
    else:
        start, span = J.center - J.half_width, J.length
    pieces = []
    for I in cover:
        if I.is_full:
            return True
        a = (I.center - I.half_width - start) % TWO_PI
        b = a + I.length
        pieces.append((a, b))
        if b > TWO_PI:
            pieces.append((a - TWO_PI, b - TWO_PI))
    pieces.sort()
    reached = 0.0
    for a, b in pieces:
        if a > reached:
            break
        reached = max(reached, b)
    return reached >= span


def rotation_matching(web1: Web, web2: Web, theta: float, tol: float = 1e-8) -> list[tuple[int, int]]:
    """Pair line i of web1 with the line of web2 whose lambda is e^{i theta} lambda_i."""
    b1, b2 = web1.ball, web2.ball
    z = web1.lam * np.exp(1j * theta)
    r = b1.radii[web1.source]
    hits = b2.lookup(z, r, b1.cosh_half[web1.source], tol)
    if (hits < 1).any():
        raise MatchingError(f"{int((hits < 1).sum())} lines of the first web have no rotated partner")
    line_of = np.empty(len(b2), dtype=np.int64)
    line_of[web2.source] = np.arange(len(web2))
    return list(zip(range(len(web1)), line_of[hits].tolist()))


def interval_ratio_profile(web1: Web, web2: Web, matching) -> list[tuple[float, float]]:
    out = []
    n1, n2 = len(web1), len(web2)
    for i, j in matching:
        if not (0 <= i < n1 and 0 <= j < n2):
            raise MatchingError(f"pair {(i, j)} refers to a missing line")
        out.append((float(web1.delta[i]), float(web2.half_width[j] / web1.half_width[i])))
    return out


@dataclass(frozen=True)
class RotationReport:
    candidates: list[tuple[float, float]]
    best_theta: float | None
    residual: float
    matched: bool
    tol: float

    @property
    def matching_thetas(self) -> list[float]:
        return [t for t, r in self.candidates if r <= self.tol]

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "best_theta": self.best_theta,
            "residual": self.residual,
            "candidates": [{"theta": t, "residual": r} for t, r in self.candidates],
        }


def _first_ring(ball: OrbitBall, tol: float) -> np.ndarray:
    if len(ball) < 2:
        raise TruncationError("orbit ball has no points besides 0; raise R")
    r = ball.radii
    return np.flatnonzero((np.arange(len(ball)) > 0) & (np.abs(r - r[1]) <= max(tol, 1e-9)))


class _Cloud:
    """Orbit points with a Euclidean k-d tree; distances are re-measured hyperbolically."""

    def __init__(self, pts: np.ndarray, cosh_half: np.ndarray):
        self.pts, self.ch = pts, cosh_half

    @cached_property
    def tree(self):
        return cKDTree(np.column_stack([self.pts.real, self.pts.imag]))

    def nearest(self, q: np.ndarray, q_ch: np.ndarray, k: int = 4) -> np.ndarray:
        k = min(k, len(self.pts))
        _, idx = self.tree.query(np.column_stack([q.real, q.imag]), k=k)
        idx = idx.reshape(len(q), k)
        d = 2.0 * np.arcsinh(np.abs(q[:, None] - self.pts[idx]) * q_ch[:, None] * self.ch[idx])
        return d.min(axis=1)


def _hausdorff(c1: _Cloud, inner1: np.ndarray, c2: _Cloud, inner2: np.ndarray, rot: complex) -> float:
    """Two-sided distance between rot*cloud1 and cloud2, each side probed from its inner points."""
    p1 = c1.pts[inner1] * rot
    d12 = c2.nearest(p1, c1.ch[inner1]).max() if len(p1) else 0.0
    p2 = c2.pts[inner2] / rot
    d21 = c1.nearest(p2, c2.ch[inner2]).max() if len(p2) else 0.0
    return float(max(d12, d21))


def rotation_detect(ball1: OrbitBall, ball2: OrbitBall, tol: float = 1e-8) -> RotationReport:
    """Search for theta with e^{i theta} Lambda_1 = Lambda_2 on the common ball.

    Candidates send one first-ring point of ball1 onto each first-ring point
    of ball2. Points within 1e-6 of the common radius are matched into the
    other ball but not used as probes, so boundary round-off cannot break a
    genuine match.
    """
    if not (ball1.complete and ball2.complete):
        raise TruncationError("rotation_detect needs certified complete orbit balls")
    ring1, ring2 = _first_ring(ball1, tol), _first_ring(ball2, tol)
    r1, r2 = float(ball1.radii[ring1[0]]), float(ball2.radii[ring2[0]])
    if len(ring1) != len(ring2) or abs(r1 - r2) > max(tol, 1e-9):
        return RotationReport([], None, math.inf, False, tol)
    R = min(ball1.R, ball2.R)
    n1, n2 = ball1.upto(R), ball2.upto(R)
    c1 = _Cloud(ball1.points[:n1], ball1.cosh_half[:n1])
    c2 = _Cloud(ball2.points[:n2], ball2.cosh_half[:n2])
    inner1 = np.flatnonzero(ball1.radii[:n1] <= R - 1e-6)
    inner2 = np.flatnonzero(ball2.radii[:n2] <= R - 1e-6)
    base = float(np.angle(ball1.points[ring1[0]]))
    thetas = sorted({round(float(wrap_angle(np.angle(ball2.points[j]) - base)), 15) for j in ring2})
    cands = [(t, _hausdorff(c1, inner1, c2, inner2, complex(math.cos(t), math.sin(t)))) for t in thetas]
    residual = min(r for _, r in cands)
    good = [t for t, r in cands if r <= tol]
    best = good[0] if good else min(cands, key=lambda c: (c[1], c[0]))[0]
    return RotationReport(cands, best, residual, bool(good), tol)
