"""Standard genus-g surface groups and certified truncations of the orbit of 0.

The group for genus ``g`` is generated by the ``2g`` side pairings of the
regular ``4g``-gon centred at 0 with interior angles ``pi/(2g)``: hyperbolic
translations through 0 in the directions ``k*pi/(2g)`` with
``cosh(l/2) = cot(pi/(4g))``. Opposite sides are paired, so all ``4g``
vertices form a single cycle and the relator has length ``4g``.

Letters in words are signed 1-based generator indices: ``+k`` is generator
``k-1`` and ``-k`` its inverse. A word ``[w0, w1, ..., wn]`` denotes the
point ``g_w0 g_w1 ... g_wn . 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegeneracyError, TruncationError
from .hypkernel import DiskPoint, MobiusMap, wrap_angle

DEDUP_TOL = 1e-9
# two orbit candidates closer than this but farther than dedup_tol are ambiguous
AMBIGUITY_TOL = 1e-6

_LD = np.longdouble
_CLD = np.clongdouble
_PI_LD = 4 * np.arctan(_LD(1))


@dataclass(frozen=True)
class SurfaceGroup:
    genus: int
    rotation: float = 0.0
    dedup_tol: float = DEDUP_TOL

    def __post_init__(self):
        if int(self.genus) != self.genus or self.genus < 2:
            raise ValueError(f"genus must be an integer >= 2, got {self.genus!r}")
        object.__setattr__(self, "genus", int(self.genus))
        object.__setattr__(self, "rotation", float(self.rotation))

    @property
    def n_generators(self) -> int:
        return 2 * self.genus

    @property
    def cosh_half_length(self) -> float:
        return 1.0 / math.tan(math.pi / (4 * self.genus))

    @property
    def translation_length(self) -> float:
        return 2.0 * math.acosh(self.cosh_half_length)

    @property
    def directions(self) -> list[float]:
        return [wrap_angle(k * math.pi / (2 * self.genus) + self.rotation) for k in range(self.n_generators)]

    @cached_property
    def _letter_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Extended-precision (a, b) for letters +1..+2g then -1..-2g."""
        g = self.genus
        c = 1 / np.tan(_PI_LD / (4 * g))
        s = np.sqrt(c * c - 1)
        k = np.arange(2 * g, dtype=_LD)
        th = k * _PI_LD / (2 * g) + _LD(self.rotation)
        b = s * (np.cos(th) + 1j * np.sin(th)).astype(_CLD)
        a = np.full(2 * g, c, dtype=_CLD)
        return np.concatenate([a, a]), np.concatenate([b, -b])

    @cached_property
    def generators(self) -> tuple[MobiusMap, ...]:
        a, b = self._letter_arrays
        return tuple(MobiusMap(complex(a[k]), complex(b[k])) for k in range(self.n_generators))

    def letter(self, w: int) -> MobiusMap:
        gen = self.generators[abs(w) - 1]
        return gen if w > 0 else gen.inverse()

    def evaluate(self, word) -> MobiusMap:
        m = MobiusMap.identity()
        for w in word:
            m = m @ self.letter(w)
        return m

    def conjugate(self, theta: float) -> SurfaceGroup:
        """The group ``R_theta G R_theta^-1``."""
        return SurfaceGroup(self.genus, self.rotation + theta, self.dedup_tol)


def surface_group(g: int, rotation: float = 0.0) -> SurfaceGroup:
    return SurfaceGroup(g, rotation)


def _letter_index_to_value(idx: np.ndarray, g: int) -> np.ndarray:
    n = 2 * g
    return np.where(idx < n, idx + 1, -(idx - n + 1))


def _reduced_words(a_l, b_l, length):
    """All reduced words of a given length as (a, b, first, last) arrays."""
    n = len(a_l)
    inv = (np.arange(n) + n // 2) % n
    a = np.array([1.0 + 0j])
    b = np.array([0.0 + 0j])
    first = np.array([-1])
    last = np.array([-1])
    for _ in range(length):
        na = (a[:, None] * a_l[None, :] + b[:, None] * np.conj(b_l)[None, :]).ravel()
        nb = (a[:, None] * b_l[None, :] + b[:, None] * np.conj(a_l)[None, :]).ravel()
        nlast = np.tile(np.arange(n), len(a))
        nfirst = np.repeat(first, n)
        nfirst = np.where(nfirst < 0, nlast, nfirst)
        ok = np.repeat(last, n) != inv[nlast]
        a, b, first, last = na[ok], nb[ok], nfirst[ok], nlast[ok]
    return a, b, first, last


def relator_check(group: SurfaceGroup, max_len: int = 8, chunk: int = 256) -> float:
    """Smallest operator-norm distance to +-I over nontrivial reduced words.

    Exhaustive over all reduced words of length 1..max_len, computed as
    products of a prefix half and a suffix half. Cost grows like
    ``(4g-1)^max_len``; max_len around 8 is the practical limit for g = 2.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    a_l, b_l = (x.astype(complex) for x in group._letter_arrays)
    n = len(a_l)
    inv = (np.arange(n) + n // 2) % n
    halves = {k: _reduced_words(a_l, b_l, k) for k in range((max_len + 1) // 2 + 1)}
    best = math.inf
    for total in range(1, max_len + 1):
        p = (total + 1) // 2
        pa, pb, _, plast = halves[p]
        sa, sb, sfirst, _ = halves[total - p]
        for lo in range(0, len(pa), chunk):
            ca, cb, cl = pa[lo:lo + chunk, None], pb[lo:lo + chunk, None], plast[lo:lo + chunk, None]
            a = ca * sa[None, :] + cb * np.conj(sb)[None, :]
            b = ca * sb[None, :] + cb * np.conj(sa)[None, :]
            # |a -+ 1| + |b| is the operator norm of M -+ I for M in SU(1,1)
            res = np.minimum(np.abs(a - 1), np.abs(a + 1)) + np.abs(b)
            ok = (sfirst[None, :] < 0) | (inv[cl] != sfirst[None, :])
            res = np.where(ok, res, np.inf)
            best = min(best, float(res.min()))
    return best


@dataclass(frozen=True)
class OrbitPoint:
    point: DiskPoint
    word: tuple[int, ...]
    radius: float


def _window_pairs(keys: np.ndarray, width: float):
    """Yield (i, j) index arrays with i < j and keys[j] - keys[i] <= width (keys sorted)."""
    hi = np.searchsorted(keys, keys + width, side="right")
    span = hi - np.arange(len(keys))
    kmax = int(span.max()) if len(keys) else 0
    for k in range(1, kmax):
        i = np.nonzero(span > k)[0]
        yield i, i + k


def _pair_dist(z1, z2, c1, c2):
    return 2.0 * np.arcsinh((np.abs(z1 - z2) * c1 * c2).astype(float))


def _dedup(a, b, n_old: int, dedup_tol: float) -> np.ndarray:
    """Mask of entries duplicating an earlier entry (old entries come first)."""
    z = b / np.conj(a)
    ca = np.abs(a)
    r = 2.0 * np.arcsinh(np.abs(b).astype(float))
    order = np.argsort(r, kind="stable")
    dup = np.zeros(len(a), dtype=bool)
    for i, j in _window_pairs(r[order], AMBIGUITY_TOL):
        ii, jj = order[i], order[j]
        d = _pair_dist(z[ii], z[jj], ca[ii], ca[jj])
        close = d < AMBIGUITY_TOL
        if not close.any():
            continue
        if (d[close] >= dedup_tol).any():
            worst = float(d[close][d[close] >= dedup_tol].max())
            raise DegeneracyError(
                f"orbit candidates at ambiguous distance {worst:.3g} "
                f"(dedup_tol={dedup_tol:g}); retry with a smaller radius")
        dup[np.maximum(ii, jj)[close]] = True
    if n_old and dup[:n_old].any():
        raise DegeneracyError("stored orbit points collided during enumeration")
    return dup


@dataclass(frozen=True, eq=False)
class OrbitBall:
    """Orbit points of 0 within hyperbolic radius R, sorted by (radius, angle).

    Index 0 is always the origin. ``cosh_half[i] = cosh(radii[i]/2)`` equals
    ``1/sqrt(1 - |points[i]|^2)`` but is carried separately to avoid
    cancellation near the boundary.
    """

    group: SurfaceGroup
    R: float
    points: np.ndarray
    radii: np.ndarray
    cosh_half: np.ndarray
    dedup_tol: float = DEDUP_TOL
    parents: np.ndarray | None = None
    letters: np.ndarray | None = None
    explicit_words: tuple | None = None
    complete: bool = field(default=False)

    def __len__(self):
        return len(self.points)

    @property
    def genus(self) -> int:
        return self.group.genus

    @cached_property
    def angles(self) -> np.ndarray:
        return wrap_angle(np.angle(self.points))

    @cached_property
    def _radius_key(self) -> np.ndarray:
        return np.round(self.radii, 9)

    def word(self, i: int) -> tuple[int, ...]:
        if self.explicit_words is not None:
            return tuple(self.explicit_words[i])
        out = []
        while self.parents[i] >= 0:
            out.append(int(self.letters[i]))
            i = int(self.parents[i])
        return tuple(reversed(out))

    @cached_property
    def words(self) -> list[tuple[int, ...]]:
        if self.explicit_words is not None:
            return [tuple(w) for w in self.explicit_words]
        out: list = [None] * len(self)
        out[0] = ()
        pending = list(range(1, len(self)))
        while pending:
            rest = []
            for i in pending:
                p = int(self.parents[i])
                if out[p] is None:
                    rest.append(i)
                else:
                    out[i] = out[p] + (int(self.letters[i]),)
            pending = rest
        return out

    @property
    def orbit_points(self) -> list[OrbitPoint]:
        return [OrbitPoint(DiskPoint.from_complex(complex(z)), self.words[i], float(r))
                for i, (z, r) in enumerate(zip(self.points, self.radii))]

    def upto(self, radius: float) -> int:
        """Number of stored points with radius <= ``radius`` (inclusive, +1e-9 slack)."""
        return int(np.searchsorted(self._radius_key, radius + 1e-9, side="right"))

    def distances(self, z: complex, stop: int | None = None) -> np.ndarray:
        stop = len(self) if stop is None else stop
        pts, ch = self.points[:stop], self.cosh_half[:stop]
        return 2.0 * np.arcsinh(np.abs(pts - z) * ch / math.sqrt(1.0 - abs(z) ** 2))

    def disk_counts(self, z, tol: float = 0.0) -> tuple[int, int]:
        """(#{lambda != 0 : d(z,lambda) < r(z) - tol}, #{lambda != 0 : |d(z,lambda) - r(z)| <= tol}).

        Raises TruncationError when the closed disk D(z, r(z)) may reach
        beyond the truncation radius.
        """
        z = complex(z.z if isinstance(z, DiskPoint) else z)
        rz = 2.0 * math.atanh(abs(z))
        if 2.0 * rz > self.R + 1e-12:
            raise TruncationError(
                f"query radius {rz:.6g} exceeds the validity limit R/2 = {self.R / 2:.6g}")
        stop = self.upto(2.0 * rz + 2.0 * tol)
        d = self.distances(z, stop)[1:]
        return int(np.count_nonzero(d < rz - tol)), int(np.count_nonzero(np.abs(d - rz) <= tol))

    def lookup(self, pts: np.ndarray, radii: np.ndarray, cosh_half: np.ndarray,
               tol: float = AMBIGUITY_TOL) -> np.ndarray:
        """Index of a stored point within ``tol`` of each query, or -1."""
        key = self._radius_key
        lo = np.searchsorted(key, radii - tol - 1e-9, side="left")
        hi = np.searchsorted(key, radii + tol + 1e-9, side="right")
        found = np.full(len(pts), -1, dtype=np.int64)
        best = np.full(len(pts), np.inf)
        width = int((hi - lo).max()) if len(pts) else 0
        for k in range(width):
            idx = lo + k
            valid = idx < hi
            if not valid.any():
                continue
            q = np.nonzero(valid)[0]
            s = idx[q]
            d = 2.0 * np.arcsinh(np.abs(pts[q] - self.points[s]) * cosh_half[q] * self.cosh_half[s])
            better = (d < tol) & (d < best[q])
            found[q[better]] = s[better]
            best[q[better]] = d[better]
        return found

    def certify(self, chunk: int = 1 << 19) -> bool:
        """Check closure of the ball under every generator and its inverse."""
        a_l, b_l = self.group._letter_arrays
        ch = self.cosh_half.astype(_LD)
        sh = np.sqrt(ch * ch - 1)
        unit = self.points / np.where(self.points == 0, 1, np.abs(self.points))
        a0 = ch.astype(_CLD)
        b0 = sh * unit.astype(_CLD)
        limit = math.sinh(self.R / 2.0)
        margin = 1e-9
        for lo in range(0, len(self), chunk):
            a, b = a0[lo:lo + chunk], b0[lo:lo + chunk]
            for s in range(len(a_l)):
                na = a_l[s] * a + b_l[s] * np.conj(b)
                nb = a_l[s] * b + b_l[s] * np.conj(a)
                absb = np.abs(nb).astype(float)
                inside = absb <= limit
                if not inside.any():
                    continue
                na, nb = na[inside], nb[inside]
                r = 2.0 * np.arcsinh(absb[inside])
                firm = r <= self.R - margin
                pts = (nb / np.conj(na)).astype(complex)
                found = self.lookup(pts[firm], r[firm], np.abs(na[firm]).astype(float))
                if (found < 0).any():
                    return False
        return True

    def to_dict(self) -> dict:
        words = self.words
        return {
            "genus": self.genus,
            "R": float(self.R),
            "dedup_tol": float(self.dedup_tol),
            "rotation": float(self.group.rotation),
            "points": [
                {"re": float(z.real), "im": float(z.imag), "word": list(words[i]), "r": float(self.radii[i])}
                for i, z in enumerate(self.points)
            ],
        }

    @classmethod
    def from_arrays(cls, group: SurfaceGroup, R: float, points, radii=None, words=None,
                    dedup_tol: float = DEDUP_TOL, certify: bool = True) -> OrbitBall:
        """Build a ball from explicit point data (re-sorted; completeness re-checked)."""
        points = np.asarray(points, dtype=complex)
        radii = 2.0 * np.arctanh(np.abs(points)) if radii is None else np.asarray(radii, dtype=float)
        order = np.lexsort((wrap_angle(np.angle(points)), np.round(radii, 9)))
        points, radii = points[order], radii[order]
        if words is not None:
            words = tuple(tuple(int(x) for x in words[i]) for i in order)
        if len(points) == 0 or abs(points[0]) > 1e-12:
            raise ValueError("orbit data must contain the origin")
        ball = cls(group, float(R), points, radii, np.cosh(radii / 2.0), dedup_tol,
                   explicit_words=words, complete=False)
        if certify:
            object.__setattr__(ball, "complete", ball.certify())
        return ball

    @classmethod
    def from_dict(cls, data: dict, certify: bool = True) -> OrbitBall:
        group = SurfaceGroup(int(data["genus"]), float(data.get("rotation", 0.0)),
                             float(data.get("dedup_tol", DEDUP_TOL)))
        pts = data["points"]
        points = np.array([complex(p["re"], p["im"]) for p in pts])
        radii = np.array([float(p["r"]) for p in pts])
        words = [p.get("word", []) for p in pts]
        return cls.from_arrays(group, float(data["R"]), points, radii, words,
                               float(data.get("dedup_tol", DEDUP_TOL)), certify)


def orbit_ball(group: SurfaceGroup, R: float, dedup_tol: float | None = None,
               certify: bool = True) -> OrbitBall:
    """Enumerate the orbit of 0 inside the closed ball of radius R.

    Breadth-first over right multiplication by generators (tile
    adjacency), pruned at radius R. Pruning at R loses nothing: every orbit
    point has a tile neighbour strictly closer to 0, found where the
    segment back to 0 leaves its Dirichlet tile. Candidates are compared
    only against the two previous layers because the Cayley graph is
    bipartite (the relator has even length).
    """
    if R < 0:
        raise ValueError("R must be nonnegative")
    tol = group.dedup_tol if dedup_tol is None else dedup_tol
    a_l, b_l = group._letter_arrays
    n = len(a_l)
    inv = (np.arange(n) + n // 2) % n
    limit = _LD(math.sinh(R / 2.0)) * (1 + _LD(1e-15))

    # (a, b, ids, last letter index, parent ids)
    layers = [(np.array([1], _CLD), np.array([0], _CLD), np.array([0]), np.array([-1]), np.array([-1]))]
    next_id = 1
    while len(layers[-1][0]):
        fa, fb, fids, flast, _ = layers[-1]
        na = (fa[:, None] * a_l[None, :] + fb[:, None] * np.conj(b_l)[None, :]).ravel()
        nb = (fa[:, None] * b_l[None, :] + fb[:, None] * np.conj(a_l)[None, :]).ravel()
        nlet = np.tile(np.arange(n), len(fa))
        npar = np.repeat(fids, n)
        keep = (np.abs(nb) <= limit) & (np.repeat(flast, n) != inv[nlet])
        na, nb, nlet, npar = na[keep], nb[keep], nlet[keep], npar[keep]
        old = layers[-2:]
        oa = np.concatenate([x[0] for x in old])
        ob = np.concatenate([x[1] for x in old])
        dup = _dedup(np.concatenate([oa, na]), np.concatenate([ob, nb]), len(oa), tol)[len(oa):]
        na, nb, nlet, npar = na[~dup], nb[~dup], nlet[~dup], npar[~dup]
        ids = np.arange(next_id, next_id + len(na))
        next_id += len(na)
        layers.append((na, nb, ids, nlet, npar))

    a = np.concatenate([x[0] for x in layers])
    b = np.concatenate([x[1] for x in layers])
    parents = np.concatenate([x[4] for x in layers])
    lets = np.concatenate([np.array([0])] + [_letter_index_to_value(x[3], group.genus) for x in layers[1:]])

    points = (b / np.conj(a)).astype(complex)
    radii = 2.0 * np.arcsinh(np.abs(b).astype(float))
    cosh_half = np.abs(a).astype(float)
    order = np.lexsort((wrap_angle(np.angle(points)), np.round(radii, 9)))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    parents = np.where(parents >= 0, rank[np.maximum(parents, 0)], -1)[order]
    ball = OrbitBall(group, float(R), points[order], radii[order], cosh_half[order], tol,
                     parents=parents, letters=lets[order], complete=False)
    if certify:
        object.__setattr__(ball, "complete", ball.certify())
    return ball


def counting_discrepancy(ball: OrbitBall, samples) -> list[tuple[float, int, float]]:
    """(r(z), iota(z), iota(z) (g-1) / cosh^2(r(z)/2)) for each sample.

    The last column tends to 1 (area of the fundamental domain is 4 pi (g-1)).
    """
    out = []
    for z in samples:
        zc = z.z if isinstance(z, DiskPoint) else complex(z)
        rz = 2.0 * math.atanh(abs(zc))
        iota, _ = ball.disk_counts(zc)
        out.append((rz, iota, iota * (ball.genus - 1) / math.cosh(rz / 2.0) ** 2))
    return out
