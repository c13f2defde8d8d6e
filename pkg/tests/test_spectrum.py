import math

import numpy as np
import pytest

from focalzones import (
    EventKind,
    TruncationError,
    build_web,
    focal_spectrum,
    indices,
    intersection_events,
    orbit_ball,
    spectrum_compare,
    tangency_events,
)
from focalzones.errors import DegeneracyError
from focalzones.focal_web import Web

from conftest import CIRCUMRADIUS, INRADIUS

# tiles opposite the central one across a vertex: cosh d = cosh^2(circumradius)
DIAGONAL_DELTA = 0.5 * math.acosh(math.cosh(CIRCUMRADIUS) ** 2)


@pytest.fixture(scope="module")
def web6(g2):
    return build_web(orbit_ball(g2, 6.0))


def toy_web(phis):
    """Web of diameters through 0 (not a group orbit; exercises the arithmetic)."""
    n = len(phis)
    from focalzones import OrbitBall
    ball = OrbitBall.__new__(OrbitBall)
    object.__setattr__(ball, "R", 2.0)
    return Web(ball, np.arange(1, n + 1), np.zeros(n, complex), np.zeros(n), np.array(phis, float),
               np.full(n, math.pi / 2), np.ones(n))


def test_tangency(web6, g2):
    t = tangency_events(web6)
    assert t[0].radius == pytest.approx(INRADIUS, abs=1e-6)
    assert t[0].multiplicity == 8
    for e in t:
        for w in e.witnesses:
            assert e.radius == pytest.approx(w.radius / 2, abs=1e-7)
    rot = tangency_events(build_web(orbit_ball(g2.conjugate(0.4), 6.0)))
    assert [e.radius for e in rot] == pytest.approx([e.radius for e in t], abs=1e-9)
    assert tangency_events(build_web(orbit_ball(g2, 0.0))) == []


def test_intersections(web6, g2):
    ev = intersection_events(web6)
    first = ev[0]
    assert first.radius == pytest.approx(CIRCUMRADIUS, abs=1e-6)
    assert first.multiplicity == 8
    # with deeper rings present, seven lines pass through each vertex
    assert [w.incident for w in first.witnesses] == [7] * 8
    # first ring alone: each vertex is the crossing of two lines
    ring = intersection_events(build_web(orbit_ball(g2, 3.1)), 1.55)
    assert ring == []
    assert intersection_events(web6, 2.4) == []


def test_first_ring_vertices(web8):
    # keep only the eight first-ring lines
    w = Web(web8.ball, web8.source[:8], web8.lam[:8], web8.delta[:8], web8.phi[:8],
            web8.half_width[:8], web8.gap[:8])
    ev = intersection_events(w, 3.0)
    assert len(ev) == 1
    assert ev[0].radius == pytest.approx(CIRCUMRADIUS, abs=1e-9)
    assert [x.incident for x in ev[0].witnesses] == [2] * 8


def test_intersection_witness_upsilon(web6):
    ev = intersection_events(web6, 2.9)
    for e in ev:
        for w in e.witnesses:
            try:
                assert indices(web6, w.point).upsilon >= 2
            except DegeneracyError:
                pass


def test_two_diameters():
    w = toy_web([0.0, math.pi / 2])
    ev = intersection_events(w, 1.0)
    assert len(ev) == 1
    assert ev[0].radius == pytest.approx(0.0, abs=1e-12)
    assert ev[0].witnesses[0].incident == 2


def test_focal_spectrum_order(web6):
    s = focal_spectrum(web6, 2.5)
    rows = [(round(e.radius, 6), e.kind, e.multiplicity) for e in s]
    assert rows[0] == (round(INRADIUS, 6), EventKind.TANGENCY, 8)
    first_x = next(e for e in s if e.kind == EventKind.INTERSECTION)
    assert (round(first_x.radius, 6), first_x.multiplicity) == (round(CIRCUMRADIUS, 6), 8)
    # a tangency between them, from tiles diagonally across a vertex
    assert rows[1] == (round(DIAGONAL_DELTA, 6), EventKind.TANGENCY, 16)
    assert DIAGONAL_DELTA == pytest.approx(2.109212, abs=1e-6)
    radii = [e.radius for e in s]
    assert radii == sorted(radii) or all(b - a > -1e-7 for a, b in zip(radii, radii[1:]))
    with pytest.raises(TruncationError):
        focal_spectrum(web6, 3.5)


def circle_pattern(web, r):
    """Cyclic order of the lines met by C(0, r), as a canonical tuple of line ids."""
    n = web.upto(r)
    live = np.flatnonzero(web.delta[:n] < r)
    off = np.arccos(np.tanh(web.delta[live]) / math.tanh(r))
    ang = np.concatenate([web.phi[live] - off, web.phi[live] + off]) % (2 * math.pi)
    ids = np.concatenate([live, live])[np.argsort(ang)]
    seq = tuple(int(i) for i in ids)
    if not seq:
        return seq
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


def test_circle_pattern_constant_between_events(web6):
    radii = sorted({round(e.radius, 9) for e in focal_spectrum(web6)})
    triples = list(zip(radii, radii[1:], radii[2:]))
    assert len(triples) >= 5
    for a, b, c in triples:
        p1 = circle_pattern(web6, a + 0.25 * (b - a))
        assert p1 == circle_pattern(web6, a + 0.75 * (b - a))
        # and every event changes it
        assert p1 != circle_pattern(web6, b + 0.5 * (c - b))


def test_compare(web6, g2):
    s = focal_spectrum(web6)
    assert spectrum_compare(s, s).all_matched
    s2 = focal_spectrum(build_web(orbit_ball(g2.conjugate(1.1), 6.0)))
    assert spectrum_compare(s, s2).all_matched
    rep = spectrum_compare(s, s2[1:])
    assert not rep.all_matched
    assert rep.matches[0].right is None
    s3 = focal_spectrum(build_web(orbit_ball(g2, 5.0)))
    assert not spectrum_compare(s, s3).all_matched
