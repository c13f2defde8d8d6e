"""Recover a hidden rotation between two orbits from their boundary data.

Conjugating the group by a rotation rotates the whole web.  The matcher only
sees the two orbit balls and finds the angle (up to the octagon's own
pi/4 symmetry); the covering step then shows the intervals at infinity
cover the circle at scale eps.
"""
import math

from focalzones import (
    Interval,
    build_web,
    cover_interval,
    interval_set,
    orbit_ball,
    rotation_detect,
    surface_group,
    verify_cover,
)

g = surface_group(2)
hidden = 1.0 / 3.0
b1, b2 = orbit_ball(g, 8.0), orbit_ball(g.conjugate(hidden), 8.0)
rep = rotation_detect(b1, b2)
print(f"hidden angle {hidden:.12f}")
print(f"detected     {rep.best_theta:.12f}  residual {rep.residual:.2e}  matched {rep.matched}")
print("all consistent angles:", ", ".join(f"{t:.6f}" for t in rep.matching_thetas))

iset = interval_set(build_web(b1))
full = Interval(0.0, math.pi)
for eps in (0.5, 0.3, 0.1):
    try:
        cover = cover_interval(iset, full, eps)
        print(f"eps={eps}: {len(cover)} intervals, verified {verify_cover(full, cover, eps)}")
    except Exception as exc:
        print(f"eps={eps}: {type(exc).__name__}: {exc}")
