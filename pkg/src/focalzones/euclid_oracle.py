"""Flat analog on the integer lattice Z^2, used as a brute-force oracle.

Same bookkeeping as the hyperbolic case: for z in the plane,
iota = #{lambda != 0 : |z - lambda| < |z|}, upsilon = #{lambda != 0 : |z - lambda| = |z|},
B = iota + upsilon + 1 and I = upsilon + 1. Every Brillouin zone of Z^2 has area 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, TruncationError
from .focal_web import FocalIndices

EUCLID_TOL = 1e-9


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("coordinates must be finite")

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def lattice_box(cutoff: int) -> np.ndarray:
    """Nonzero lattice points with max(|m|, |n|) <= cutoff, shape (N, 2)."""
    m, n = np.meshgrid(np.arange(-cutoff, cutoff + 1), np.arange(-cutoff, cutoff + 1), indexing="ij")
    pts = np.column_stack([m.ravel(), n.ravel()]).astype(float)
    return pts[(pts != 0).any(axis=1)]


def _check_cutoff(z: PlanePoint, cutoff: int):
    # every lambda with |z - lambda| <= |z| has |lambda| <= 2|z|
    if cutoff < 2.0 * z.norm + EUCLID_TOL:
        raise TruncationError(f"cutoff {cutoff} does not contain the disk of radius {2 * z.norm:.6g}")


def euclid_disk_counts(z: PlanePoint, cutoff: int, tol: float = EUCLID_TOL) -> tuple[int, int]:
    _check_cutoff(z, cutoff)
    lam = lattice_box(cutoff)
    d = np.hypot(lam[:, 0] - z.x, lam[:, 1] - z.y)
    r = z.norm
    return int(np.count_nonzero(d < r - tol)), int(np.count_nonzero(np.abs(d - r) <= tol))


def euclid_crossing_counts(z: PlanePoint, cutoff: int, tol: float = EUCLID_TOL) -> tuple[int, int]:
    """Bisectors of lattice points crossing the open segment (0, z), and those through z.

    The bisector {x : x.lambda = |lambda|^2 / 2} meets the segment at parameter
    |lambda|^2 / (2 z.lambda), so it crosses before z iff that lies in (0, 1).
    """
    _check_cutoff(z, cutoff)
    lam = lattice_box(cutoff)
    zl = lam[:, 0] * z.x + lam[:, 1] * z.y
    half = 0.5 * (lam ** 2).sum(axis=1)
    # margin scaled to a distance along the segment
    gap = (zl - half) / np.maximum(np.hypot(lam[:, 0], lam[:, 1]), 1.0)
    return int(np.count_nonzero(gap > tol / 2)), int(np.count_nonzero(np.abs(gap) <= tol / 2))


def euclid_indices(z: PlanePoint, cutoff: int, tol: float = EUCLID_TOL) -> FocalIndices:
    a = euclid_disk_counts(z, cutoff, tol)
    b = euclid_crossing_counts(z, cutoff, tol)
    if a != b:
        raise DegeneracyError(f"disk count {a} and crossing count {b} disagree at {z}")
    return FocalIndices.from_counts(*a)


def zone_grid(k_max: int, grid: int, half_side: float | None = None):
    """Brillouin label (0 on the web) for cell centres of the quadrant [0, L]^2.

    Z^2 is symmetric under x -> -x and y -> -y, so one quadrant suffices.
    """
    L = half_side if half_side is not None else math.sqrt(k_max / math.pi) + 1.5
    step = L / grid
    c = (np.arange(grid) + 0.5) * step
    x, y = np.meshgrid(c, c, indexing="ij")
    cutoff = int(math.ceil(2.0 * math.hypot(L, L)))
    iota = np.zeros(x.shape, dtype=np.int32)
    on = np.zeros(x.shape, dtype=bool)
    for m, n in lattice_box(cutoff):
        if m * m + n * n > 4.0 * 2.0 * L * L:
            continue
        g = x * m + y * n - 0.5 * (m * m + n * n)
        iota += g > EUCLID_TOL
        on |= np.abs(g) <= EUCLID_TOL
    label = np.where(on, 0, iota + 1)
    return label, step


def euclid_zone_area(k: int, grid: int = 1024) -> float:
    """Grid estimate of the area of the k-th zone of Z^2 (exact value 1)."""
    if not 1 <= k <= 6:
        raise ValueError("k must be in 1..6")
    if grid < 512:
        raise ValueError("grid must be at least 512")
    label, step = zone_grid(k, grid)
    mask = label == k
    if mask[-1, :].any() or mask[:, -1].any():
        raise TruncationError(f"zone {k} reaches the edge of the sampling box")
    return 4.0 * float(mask.sum()) * step * step
