"""Walk outward from the origin of a genus-2 orbit and watch the web appear.

The nearest orbit ring has 8 points; their bisectors bound the Dirichlet
octagon, which is the first Brillouin zone.  Past it the circle around 0
starts meeting web lines, and each event changes the zone structure.
"""
import math

from focalzones import build_web, dirichlet_domain, focal_spectrum, indices, orbit_ball, surface_group

ball = orbit_ball(surface_group(2), 8.0)
web = build_web(ball)
print(f"orbit ball R=8: {len(ball)} points, certified complete: {ball.complete}")
print(f"web: {len(web)} bisectors, queries valid up to r = {web.query_radius_limit}")

edges = dirichlet_domain(web)
print(f"\nDirichlet domain: {len(edges)} edges")
for e in edges:
    print(f"  direction {e.interval.center:.4f}  distance {e.delta:.6f}")

print("\nindices along the ray theta = pi/8 (towards an octagon vertex):")
for r in (0.5, 1.5, 2.3, 2.6, 3.0, 3.8):
    z = math.tanh(r / 2) * complex(math.cos(math.pi / 8), math.sin(math.pi / 8))
    try:
        fi = indices(web, z)
        print(f"  r={r:<9} iota={fi.iota:<3} upsilon={fi.upsilon:<2} B={fi.brillouin:<3} I={fi.focal}")
    except Exception as exc:  # on-line points raise; show why
        print(f"  r={r:<9} {type(exc).__name__}: {exc}")

print("\nfocal spectrum up to r = 3:")
for ev in focal_spectrum(web, 3.0):
    print(f"  {ev.radius:.6f}  {ev.kind.value:<12} x{ev.multiplicity}")
