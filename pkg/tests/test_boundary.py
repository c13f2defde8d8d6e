import math

import numpy as np
import pytest

from focalzones import (
    CoverStallError,
    Interval,
    MatchingError,
    TruncationError,
    build_web,
    cover_interval,
    interval_ratio_profile,
    interval_set,
    nested_chain,
    orbit_ball,
    rotation_detect,
    rotation_matching,
    surface_group,
    verify_cover,
)
from focalzones.hypkernel import BoundaryAngle

FULL = Interval(0.0, math.pi)


@pytest.fixture(scope="module")
def iset31(web31):
    return interval_set(web31)


@pytest.fixture(scope="module")
def iset8(web8):
    return interval_set(web8)


def test_interval_set_first_ring(iset31):
    assert len(iset31) == 8
    assert iset31.lengths == pytest.approx([2 * math.acos(0.910180)] * 8, abs=1e-5)
    assert iset31.lengths[0] == pytest.approx(0.854, abs=1e-3)
    assert sorted(iset31.center) == pytest.approx([k * math.pi / 4 for k in range(8)], abs=1e-12)
    assert iset31.count_exceeding(1.0) == 0


def test_null_sequence_law(iset8, ball8):
    lam = np.abs(ball8.points[1:])
    for eps in (0.01, 0.05, 0.1, 0.3, 0.86):
        assert iset8.count_exceeding(eps) == int((lam < math.cos(eps / 2)).sum())
    assert (np.diff(iset8.lengths) <= 1e-12).all()


def test_deeper_truncation_appends(iset31, iset8):
    assert iset8.lengths[:8] == pytest.approx(iset31.lengths)
    assert iset8.lengths[8:].max() < iset31.lengths.min()


def test_nested_chain(g2, iset31):
    iset10 = interval_set(build_web(orbit_ball(g2, 10.0)))
    ch = nested_chain(iset10, BoundaryAngle(0.0), 3)
    assert len(ch.intervals) == 3 and not ch.shortfall
    for a, b in zip(ch.intervals, ch.intervals[1:]):
        assert a.contains_interval(b)
        assert b.length < a.length
    for iv in ch.intervals:
        assert iv.contains(0.0)
    one = nested_chain(iset10, 0.0, 1)
    assert one.intervals[0].length == pytest.approx(max(iset10.lengths))
    short = nested_chain(iset31, 0.0, 5)
    assert short.shortfall and len(short.intervals) == 1
    with pytest.raises(ValueError):
        nested_chain(iset31, 0.0, 0)


def test_cover_first_ring(iset31):
    cover = cover_interval(iset31, FULL, 0.86)
    assert len(cover) == 8
    assert verify_cover(FULL, cover, 0.86)


def test_cover_stall_and_success(iset31, iset8):
    with pytest.raises(CoverStallError) as exc:
        cover_interval(iset31, FULL, 0.5)
    assert 0 <= exc.value.stall_point < 2 * math.pi
    cover = cover_interval(iset8, FULL, 0.5)
    assert all(c.length <= 0.5 for c in cover)
    assert verify_cover(FULL, cover, 0.5)


def test_cover_sub_interval(iset8):
    J = Interval(1.0, 0.4)
    cover = cover_interval(iset8, J, 0.2)
    assert verify_cover(J, cover, 0.2)
    # a single long interval covers a short J on its own
    J2 = Interval(0.0, 0.1)
    assert len(cover_interval(iset8, J2, 2 * math.pi)) == 1


def test_verify_cover_rejects_gaps():
    cover = [Interval(0.0, 0.5), Interval(1.2, 0.5)]
    assert not verify_cover(Interval(0.6, 0.5), cover)
    assert verify_cover(Interval(0.6, 0.05), [Interval(0.0, 0.7)])
    assert not verify_cover(FULL, [Interval(k, 0.5) for k in range(6)])
    assert verify_cover(FULL, [Interval(k, 0.6) for k in range(6)] + [Interval(5.8, 0.6)])
    assert not verify_cover(FULL, [Interval(0.0, 3.0)], eps=1.0)


def test_ratio_profile(g2, web8):
    same = interval_ratio_profile(web8, web8, [(i, i) for i in range(len(web8))])
    assert all(r == 1.0 for _, r in same)
    b2 = orbit_ball(g2.conjugate(math.pi / 6), 8.0)
    w2 = build_web(b2)
    m = rotation_matching(web8, w2, math.pi / 6)
    prof = interval_ratio_profile(web8, w2, m)
    assert max(abs(r - 1) for _, r in prof) <= 1e-9
    with pytest.raises(MatchingError):
        rotation_matching(web8, w2, 0.1)
    with pytest.raises(MatchingError):
        interval_ratio_profile(web8, w2, [(0, 10 ** 7)])


def test_ratio_profile_radial_perturbation(web8):
    # lambda pushed out by 0.01: |I| ~ 4 e^{-delta}, so ratios -> e^{-0.005}
    d = web8.delta + 0.005
    hw2 = np.arctan2(1.0, np.sinh(d))
    ratio = hw2 / web8.half_width
    deep = web8.delta > 3
    assert ratio[deep] == pytest.approx(math.exp(-0.005), abs=2e-4)


def test_rotation_detect_self(ball8):
    rep = rotation_detect(ball8, ball8)
    assert rep.matched and rep.best_theta == 0.0 and rep.residual < 1e-12
    assert len(rep.matching_thetas) == 8
    assert rep.matching_thetas == pytest.approx([k * math.pi / 4 for k in range(8)], abs=1e-12)
    assert rep.residual <= min(r for _, r in rep.candidates)


def test_rotation_detect_rotated(g2, ball8):
    b2 = orbit_ball(g2.conjugate(math.pi / 6), 8.0)
    rep = rotation_detect(ball8, b2)
    assert rep.matched and rep.residual <= 1e-9
    assert rep.best_theta == pytest.approx(math.pi / 6, abs=1e-9)
    back = rotation_detect(b2, ball8)
    assert back.matched
    assert (back.best_theta + math.pi / 6) % (math.pi / 4) == pytest.approx(0, abs=1e-9) or \
        (back.best_theta + math.pi / 6) % (math.pi / 4) == pytest.approx(math.pi / 4, abs=1e-9)


def test_rotation_detect_mismatch(ball8):
    rep = rotation_detect(ball8, orbit_ball(surface_group(3), 8.0))
    assert not rep.matched and rep.best_theta is None
    with pytest.raises(TruncationError):
        rotation_detect(ball8, orbit_ball(surface_group(2), 1.0))
    d = rep.to_dict()
    assert set(d) == {"matched", "best_theta", "residual", "candidates"}


def test_rotation_detect_mirror(g2, ball8):
    pts = np.conj(ball8.points)
    from focalzones import OrbitBall
    refl = OrbitBall.from_arrays(g2, 8.0, pts * np.exp(0.1j), certify=False)
    object.__setattr__(refl, "complete", True)
    rep = rotation_detect(ball8, refl)
    # the standard orbit is reflection symmetric, so its mirror image is a rotation of it
    assert rep.matched
    assert rep.best_theta == pytest.approx(0.1, abs=1e-9)
