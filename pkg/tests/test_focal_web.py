import cmath
import math

import numpy as np
import pytest

from focalzones import (
    DegeneracyError,
    IncompleteDomainError,
    InvalidBoundError,
    MissingZoneError,
    TruncationError,
    build_web,
    classify_grid,
    dirichlet_domain,
    hyp_dist,
    indices,
    kappa,
    orbit_ball,
    surface_group,
    zone_radius_bracket,
    zone_radius_stats,
)
from focalzones.focal_web import crossing_radii, tau

from conftest import CIRCUMRADIUS, INRADIUS


def brute_indices(ball, z):
    """Oracle: distance comparison over every stored orbit point."""
    r = hyp_dist(0, z)
    d = np.array([hyp_dist(z, p) for p in ball.points[1:]])
    return int((d < r - 1e-7).sum()), int((abs(d - r) <= 1e-7).sum())


def test_build_web_first_ring(web31):
    assert len(web31) == 8
    assert web31.delta == pytest.approx([INRADIUS] * 8, abs=1e-6)
    assert sorted(web31.phi) == pytest.approx([k * math.pi / 4 for k in range(8)], abs=1e-12)
    for line in web31.lines:
        assert line.delta == pytest.approx(line.lam.radius / 2, abs=1e-9)
        assert line.interval.length == pytest.approx(2 * math.acos(abs(line.lam.point.z)), abs=1e-9)


def test_empty_and_counted_webs(g2):
    w0 = build_web(orbit_ball(g2, 0.0))
    assert len(w0) == 0 and w0.query_radius_limit == 0
    b = orbit_ball(g2, 6.2)
    w = build_web(b)
    assert len(w) == len(b) - 1


def test_local_finiteness(web8, ball8):
    for r in (1.0, 2.0, 3.0, 3.9):
        n_lines = int((web8.delta <= r).sum())
        n_pts = int(((ball8.radii <= 2 * r) & (ball8.radii > 0)).sum())
        assert n_lines == n_pts


def test_web_requires_complete_ball(g2, ball8):
    from focalzones import OrbitBall
    bad = OrbitBall.from_arrays(g2, 8.0, np.delete(ball8.points, 3))
    with pytest.raises(TruncationError):
        build_web(bad)


def test_index_examples(web8, ball8):
    assert indices(web8, 0).as_tuple() == (0, 0, 1, 1)
    mid = math.tanh(INRADIUS / 2)
    assert mid == pytest.approx(0.643594, abs=1e-6)
    assert indices(web8, mid).as_tuple() == (0, 1, 2, 2)
    v = math.tanh(CIRCUMRADIUS / 2) * cmath.exp(1j * math.pi / 8)
    assert indices(web8, v).as_tuple() == (0, 7, 8, 8)
    assert brute_indices(ball8, v) == (0, 7)


def test_indices_truncation(web8):
    with pytest.raises(TruncationError):
        indices(web8, math.tanh(4.2 / 2))


def test_routes_agree_at_random_points(web8, ball8):
    rng = np.random.default_rng(1)
    r = rng.uniform(0, 4.0, 1000)
    t = rng.uniform(0, 2 * math.pi, 1000)
    zs = np.tanh(r / 2) * np.exp(1j * t)
    done = 0
    for z in zs:
        try:
            fi = indices(web8, z)
        except DegeneracyError:
            continue
        assert fi.brillouin == fi.iota + fi.upsilon + 1
        assert fi.focal == fi.upsilon + 1
        done += 1
    assert done >= 990
    for z in zs[:40]:
        fi = indices(web8, z)
        assert (fi.iota, fi.upsilon) == brute_indices(ball8, z)


def test_crossing_radius_formula(web8):
    # crossing of the ray with the first line, against a bisection oracle
    th = 0.3
    rho = crossing_radii(web8, [th], 8)[0]
    i = int(np.argmin(rho))
    lam = web8.lam[i]
    lo, hi = 0.0, 4.0
    for _ in range(200):
        m = 0.5 * (lo + hi)
        z = math.tanh(m / 2) * cmath.exp(1j * th)
        if hyp_dist(z, 0) < hyp_dist(z, lam):
            lo = m
        else:
            hi = m
    assert rho[i] == pytest.approx(lo, abs=1e-9)


def test_rotation_naturality(g2):
    theta = 0.6
    w1 = build_web(orbit_ball(g2, 6.0))
    w2 = build_web(orbit_ball(g2.conjugate(theta), 6.0))
    rng = np.random.default_rng(2)
    for _ in range(200):
        z = math.tanh(rng.uniform(0, 3.0) / 2) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        try:
            a = indices(w1, z)
        except DegeneracyError:
            continue
        assert indices(w2, z * cmath.exp(1j * theta)) == a


def test_grid_first_zone(web8):
    zm = classify_grid(web8, 16, 64, r_max=1.5)
    assert (zm.zone[~zm.degenerate] == 1).all()
    assert (zm.zone >= 0).all()
    with pytest.raises(ValueError):
        classify_grid(web8, 8, 64)
    with pytest.raises(TruncationError):
        classify_grid(web8, 16, 64, r_max=4.5)


def test_grid_along_rays_and_refinement(web8):
    zm = classify_grid(web8, 32, 128)
    assert (np.diff(zm.iota, axis=0) >= 0).all()
    assert ((zm.upsilon == 0) <= (zm.zone >= 1)).all()
    coarse = classify_grid(web8, 16, 64).boundary_fraction
    fine = classify_grid(web8, 64, 256).boundary_fraction
    assert fine <= max(coarse, 0.01)
    assert fine <= 0.01
    assert zm.focal.min() >= 1


def test_dirichlet_domain(web8):
    edges = dirichlet_domain(web8)
    assert len(edges) == 8
    assert [e.delta for e in edges] == pytest.approx([INRADIUS] * 8, abs=1e-6)


def test_dirichlet_domain_genus3():
    w = build_web(orbit_ball(surface_group(3), 7.0))
    edges = dirichlet_domain(w)
    assert len(edges) == 12
    assert edges[0].delta == pytest.approx(math.acosh(1 / math.tan(math.pi / 12)), abs=1e-9)


def test_dirichlet_domain_rotates(g2):
    t = 0.25
    e0 = dirichlet_domain(build_web(orbit_ball(g2, 6.0)))
    e1 = dirichlet_domain(build_web(orbit_ball(g2.conjugate(t), 6.0)))
    shifted = sorted((x.interval.center + t) % (2 * math.pi) for x in e0)
    assert sorted(x.interval.center for x in e1) == pytest.approx(shifted, abs=1e-9)


def test_dirichlet_domain_incomplete(web31):
    with pytest.raises(IncompleteDomainError):
        dirichlet_domain(web31)


def test_zone_stats_small_k(web8):
    # cell centres miss the vertex directions by half an angular step
    zm = classify_grid(web8, 64, 1024)
    s = zone_radius_stats(zm, 1)
    assert s.tau == pytest.approx(math.log(4), abs=1e-6)
    assert s.r_min < 0.1
    assert s.r_max == pytest.approx(CIRCUMRADIUS, abs=0.1)
    assert tau(2, 10) == pytest.approx(3.688879, abs=1e-6)
    with pytest.raises(MissingZoneError):
        zone_radius_stats(zm, 10 ** 6)


def test_zone_excess_trend(g2):
    w = build_web(orbit_ball(g2, 12.0))
    zm = classify_grid(w, 128, 1024)
    assert zone_radius_stats(zm, 30).excess < zone_radius_stats(zm, 5).excess


def test_kappa():
    assert kappa(0) == pytest.approx(math.log(4), abs=1e-12)
    assert kappa(5) == pytest.approx(math.log1p(math.exp(-10) + 2 * math.exp(-5)), abs=1e-15)
    assert kappa(5) == pytest.approx(0.0134307, abs=1e-7)
    t = np.linspace(0, 40, 200)
    k = kappa(t)
    assert (k > 0).all() and (k <= math.log(4)).all() and (np.diff(k) < 0).all()
    # definition
    assert kappa(1.7) == pytest.approx(math.log(math.exp(1.7) + math.exp(-1.7) + 2) - 1.7, abs=1e-12)


def test_bracket():
    for k, g in ((1, 2), (40, 2), (25, 3)):
        beta = 1 / (g - 1)
        lo, hi = zone_radius_bracket(k, g, lambda r: 0.0)
        assert lo == hi
        assert lo == pytest.approx(2 * math.acosh(math.sqrt(k / beta)), abs=1e-10)
        assert lo + kappa(lo) == pytest.approx(math.log(4 * k / beta), abs=1e-10)
    lo, hi = zone_radius_bracket(40, 2, lambda r: 0.5 * math.exp(-0.2 * r))
    assert lo <= hi
    with pytest.raises(InvalidBoundError):
        zone_radius_bracket(40, 2, lambda r: 1.0)
