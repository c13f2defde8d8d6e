"""Focal spectrum: radii where the circle C(0, r) meets the web non-generically.

Two kinds of event: the circle is tangent to a line (radius delta of that
line), or it passes through a point where two or more lines cross.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import TruncationError
from .focal_web import Web
from .fuchsian import OrbitPoint
from .hypkernel import DiskPoint, angle_diff, klein_to_disk

MERGE_TOL = 1e-7
POINT_TOL = 1e-8


class EventKind(str, Enum):
    TANGENCY = "TANGENCY"
    INTERSECTION = "INTERSECTION"


@dataclass(frozen=True)
class CrossingWitness:
    point: DiskPoint
    incident: int


@dataclass(frozen=True)
class SpectrumEvent:
    radius: float
    kind: EventKind
    multiplicity: int
    witnesses: tuple = ()
    warning: str | None = None

    def row(self) -> tuple[float, str, int]:
        return self.radius, self.kind.value, self.multiplicity


def _check_rmax(web: Web, r_max: float | None) -> float:
    limit = web.query_radius_limit
    if r_max is None:
        return limit
    if r_max > limit + 1e-12:
        raise TruncationError(f"R_max {r_max:.6g} exceeds the validity limit {limit:.6g}")
    return float(r_max)


def _groups(sorted_values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Split a sorted array into runs whose consecutive gaps are <= tol."""
    if len(sorted_values) == 0:
        return []
    breaks = np.flatnonzero(np.diff(sorted_values) > tol) + 1
    return np.split(np.arange(len(sorted_values)), breaks)


def tangency_events(web: Web, r_max: float | None = None, merge_tol: float = MERGE_TOL) -> list[SpectrumEvent]:
    r_max = _check_rmax(web, r_max)
    n = web.upto(r_max)
    delta = web.delta[:n]
    events = []
    for grp in _groups(delta, merge_tol):
        wit = []
        for i in grp:
            j = int(web.source[i])
            wit.append(OrbitPoint(DiskPoint.from_complex(complex(web.lam[i])), web.ball.word(j),
                                  float(web.ball.radii[j])))
        events.append(SpectrumEvent(float(np.mean(delta[grp])), EventKind.TANGENCY, len(grp), tuple(wit)))
    return events


def _pair_intersections(web: Web, n: int, r_max: float, chunk: int = 512):
    """All interior crossings among the first n lines with radius <= r_max.

    Returns (line_i, line_j, klein_point, hyperbolic_radius).
    """
    phi, hw, t = web.phi[:n], web.half_width[:n], web.tanh_delta[:n]
    cos_p, sin_p = np.cos(phi), np.sin(phi)
    limit = math.tanh(r_max + MERGE_TOL)
    out_i, out_j, out_k = [], [], []
    for lo in range(0, n, chunk):
        ii = np.arange(lo, min(lo + chunk, n))[:, None]
        jj = np.arange(n)[None, :]
        d = np.abs(angle_diff(phi[ii], phi[jj]))
        # endpoints interleave on the circle
        ok = (jj > ii) & (d > np.abs(hw[ii] - hw[jj])) & (d < hw[ii] + hw[jj])
        a, b = np.nonzero(ok)
        if not len(a):
            continue
        i, j = ii[a, 0], jj[0, b]
        # chords in the Klein model: Re(k e^{-i phi}) = tanh(delta)
        det = np.sin(phi[j] - phi[i])
        x = (t[i] * sin_p[j] - t[j] * sin_p[i]) / det
        y = (t[j] * cos_p[i] - t[i] * cos_p[j]) / det
        k = x + 1j * y
        keep = np.abs(k) <= limit
        out_i.append(i[keep])
        out_j.append(j[keep])
        out_k.append(k[keep])
    if not out_i:
        e = np.zeros(0, dtype=np.int64)
        return e, e, np.zeros(0, complex), np.zeros(0)
    i, j, k = np.concatenate(out_i), np.concatenate(out_j), np.concatenate(out_k)
    return i, j, k, np.arctanh(np.abs(k))


def intersection_events(web: Web, r_max: float | None = None, merge_tol: float = MERGE_TOL,
                        point_tol: float = POINT_TOL) -> list[SpectrumEvent]:
    r_max = _check_rmax(web, r_max)
    n = web.upto(r_max)
    li, lj, k, rad = _pair_intersections(web, n, r_max)
    keep = rad <= r_max + merge_tol
    li, lj, k, rad = li[keep], lj[keep], k[keep], rad[keep]
    order = np.lexsort((np.angle(k), rad))
    li, lj, k, rad = li[order], lj[order], k[order], rad[order]
    z = klein_to_disk(k)
    ch = 1.0 / np.sqrt(1.0 - np.abs(z) ** 2)

    # merge coincident crossings: union-find over a radius window
    m = len(z)
    ds = DisjointSet(range(m))
    ambiguous = set()
    wide = 10.0 * point_tol
    hi = np.searchsorted(rad, rad + wide, side="right")
    for a in range(m):
        for b in range(a + 1, hi[a]):
            dist = 2.0 * math.asinh(abs(z[a] - z[b]) * ch[a] * ch[b])
            if dist <= point_tol:
                ds.merge(a, b)
            elif dist < wide:
                ambiguous.add(a)
                ambiguous.add(b)

    points = []
    for members in ds.subsets():
        idx = sorted(members)
        lines = set(li[idx].tolist()) | set(lj[idx].tolist())
        rep = idx[0]
        points.append((float(np.mean(rad[idx])), float(np.angle(k[rep])), complex(z[rep]), len(lines),
                       any(x in ambiguous for x in idx)))
    points.sort(key=lambda p: (p[0], p[1]))

    radii = np.array([p[0] for p in points])
    events = []
    for grp in _groups(radii, merge_tol):
        wit = tuple(CrossingWitness(DiskPoint.from_complex(points[g][2]), points[g][3]) for g in grp)
        warn = None
        if any(points[g][4] for g in grp):
            warn = f"intersection points within ({point_tol:g}, {wide:g}) of each other; merge is ambiguous"
            warnings.warn(warn, RuntimeWarning, stacklevel=2)
        events.append(SpectrumEvent(float(np.mean(radii[grp])), EventKind.INTERSECTION, len(grp), wit, warn))
    return events


def focal_spectrum(web: Web, r_max: float | None = None, merge_tol: float = MERGE_TOL) -> list[SpectrumEvent]:
    ev = sorted(tangency_events(web, r_max, merge_tol) + intersection_events(web, r_max, merge_tol),
                key=lambda e: e.radius)
    # the two kinds are never merged; within a radius cluster tangency comes first
    radii = np.array([e.radius for e in ev])
    out = []
    for grp in _groups(radii, merge_tol):
        out.extend(sorted((ev[i] for i in grp), key=lambda e: (e.kind != EventKind.TANGENCY, e.radius)))
    return out


@dataclass(frozen=True)
class EventMatch:
    left: int
    right: int | None
    gap: float


@dataclass(frozen=True)
class SpectrumComparison:
    matches: list[EventMatch]
    unmatched_right: list[int] = field(default_factory=list)

    @property
    def all_matched(self) -> bool:
        return not self.unmatched_right and all(m.right is not None for m in self.matches)


def spectrum_compare(s1: list[SpectrumEvent], s2: list[SpectrumEvent], tol: float = 1e-9) -> SpectrumComparison:
    """Pair events greedily by nearest radius among events of equal kind and multiplicity."""
    free = set(range(len(s2)))
    r2 = np.array([e.radius for e in s2])
    matches = []
    for i, e in enumerate(s1):
        cands = [j for j in free if s2[j].kind == e.kind and s2[j].multiplicity == e.multiplicity
                 and abs(r2[j] - e.radius) <= tol]
        if cands:
            j = min(cands, key=lambda j: (abs(r2[j] - e.radius), j))
            free.discard(j)
            matches.append(EventMatch(i, j, float(abs(r2[j] - e.radius))))
        else:
            matches.append(EventMatch(i, None, math.inf))
    return SpectrumComparison(matches, sorted(free))
