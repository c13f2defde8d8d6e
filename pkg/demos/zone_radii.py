"""Brillouin zones of a genus-2 surface concentrate near r = log(4k).

Classify a polar grid at R = 12 and compare the radial range of a few zones
with the asymptotic radius tau = log(4(g-1)k).  Pass --plot to draw the zone
map (needs matplotlib).
"""
import sys

import numpy as np

from focalzones import build_web, classify_grid, orbit_ball, surface_group, zone_radius_stats

web = build_web(orbit_ball(surface_group(2), 12.0))
zm = classify_grid(web, 128, 1024)
print(f"grid 128x1024 up to r = {zm.radii[-1]:.3f}; boundary fraction {zm.boundary_fraction:.4f}")
print(f"{'k':>4} {'tau':>7} {'r_min':>7} {'r_max':>7} {'excess':>7}")
for k in (1, 2, 5, 10, 20, 30, 40):
    s = zone_radius_stats(zm, k)
    print(f"{k:>4} {s.tau:7.3f} {s.r_min:7.3f} {s.r_max:7.3f} {s.excess:7.3f}")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    th, r = np.meshgrid(zm.thetas, zm.radii)
    ax = plt.subplot(projection="polar")
    ax.pcolormesh(th, r, np.where(zm.zone > 0, zm.zone % 12, np.nan), cmap="tab20", shading="auto")
    ax.set_title("Brillouin zones, genus 2")
    plt.savefig("zones.png", dpi=150)
    print("wrote zones.png")
