"""Command-line front end.

    focalzones orbit    --genus 2 --orbit-radius 8 [--rotation T]
    focalzones web      --genus 2 --orbit-radius 8 [--format json|svg]
    focalzones zones    --genus 2 --orbit-radius 8 --grid 200x512 [--format csv|json|svg] [--svg PATH]
    focalzones spectrum --genus 2 --orbit-radius 6 [--r-max X] [--format csv|json]
    focalzones boundary --genus 2 --orbit-radius 8 --eps 0.3 [--depth 3 --x 0]
    focalzones compare  a.json b.json
    focalzones oracle   [--samples 1000 --grid 1024]

Exit codes: 0 ok, 2 usage, 3 numerical degeneracy, 4 truncation.
"""
from __future__ import annotations

import argparse
import colorsys
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .boundary import cover_interval, interval_set, nested_chain, rotation_detect, verify_cover
from .errors import CoverStallError, DegeneracyError, TruncationError
from .euclid_oracle import PlanePoint, euclid_disk_counts, euclid_crossing_counts, euclid_zone_area
from .focal_web import Web, ZoneMap, build_web, classify_grid
from .fuchsian import DEDUP_TOL, OrbitBall, orbit_ball, surface_group
from .hypkernel import ON_LINE_TOL, Interval
from .spectrum import MERGE_TOL, EventKind, focal_spectrum

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_TRUNCATED = 0, 2, 3, 4

COMMANDS = ("orbit", "web", "zones", "spectrum", "boundary", "compare", "oracle")
FORMATS = {
    "orbit": ("json",),
    "web": ("json", "svg"),
    "zones": ("csv", "json", "svg"),
    "spectrum": ("csv", "json"),
    "boundary": ("json",),
    "compare": ("json",),
    "oracle": ("json",),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    genus: int = 2
    orbit_radius: float = 8.0
    grid: tuple[int, int] = (64, 256)
    dedup_tol: float = DEDUP_TOL
    on_line_tol: float = ON_LINE_TOL
    merge_tol: float = MERGE_TOL
    rotation: float = 0.0
    output: str | None = None
    format: str | None = None
    r_max: float | None = None
    svg: str | None = None
    eps: float = 0.3
    depth: int = 3
    x: float = 0.0
    inputs: tuple[str, ...] = field(default_factory=tuple)
    tol: float = 1e-8
    samples: int = 1000
    oracle_grid: int = 1024
    seed: int = 0

    @property
    def fmt(self) -> str:
        return self.format or FORMATS[self.command][0]

    def validate(self):
        """Raise ValueError for bad usage, TruncationError for an invalid query radius."""
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS[self.command]:
            raise ValueError(f"{self.command} supports formats {FORMATS[self.command]}, not {self.fmt!r}")
        if self.genus < 2:
            raise ValueError("genus must be >= 2")
        if not self.orbit_radius >= 0:
            raise ValueError("orbit radius must be nonnegative")
        if min(self.grid) < 1:
            raise ValueError("grid sizes must be positive")
        if self.command == "compare" and len(self.inputs) != 2:
            raise ValueError("compare takes exactly two orbit dumps")
        if self.r_max is not None and 2.0 * self.r_max > self.orbit_radius + 1e-12:
            raise TruncationError(
                f"query radius {self.r_max:g} needs orbit radius >= {2 * self.r_max:g}, got {self.orbit_radius:g}")


# ---------------------------------------------------------------- payloads

def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def _header(cfg: RunConfig) -> str:
    return f"focalzones {__version__} {cfg.command} genus={cfg.genus} R={cfg.orbit_radius:g} rotation={cfg.rotation:g}"


def _ball(cfg: RunConfig) -> OrbitBall:
    return orbit_ball(surface_group(cfg.genus, cfg.rotation), cfg.orbit_radius, cfg.dedup_tol)


def _web(cfg: RunConfig) -> Web:
    return build_web(_ball(cfg))


def _f(x: float) -> str:
    return f"{x:.6f}"


def _svg_open(cfg: RunConfig) -> list[str]:
    return [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.02 -1.02 2.04 2.04" width="800" height="800">',
        f"<!-- {_header(cfg)} -->",
        '<rect x="-1.02" y="-1.02" width="2.04" height="2.04" fill="white"/>',
    ]


def _svg_close() -> list[str]:
    return ['<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.004"/>', "</svg>"]


def _screen(z: complex) -> tuple[float, float]:
    # SVG's y axis points down
    return z.real, -z.imag


def _geodesic_path(phi: float, hw: float) -> str:
    p1 = _screen(complex(math.cos(phi - hw), math.sin(phi - hw)))
    p2 = _screen(complex(math.cos(phi + hw), math.sin(phi + hw)))
    if abs(hw - math.pi / 2) < 1e-12:
        return f"M{_f(p1[0])},{_f(p1[1])} L{_f(p2[0])},{_f(p2[1])}"
    # the geodesic is the minor arc of the circle orthogonal to the boundary
    radius = math.tan(hw)
    c = _screen(complex(math.cos(phi), math.sin(phi)) / math.cos(hw))
    cross = (p1[0] - c[0]) * (p2[1] - c[1]) - (p1[1] - c[1]) * (p2[0] - c[0])
    sweep = 1 if cross > 0 else 0
    return f"M{_f(p1[0])},{_f(p1[1])} A{_f(radius)},{_f(radius)} 0 0 {sweep} {_f(p2[0])},{_f(p2[1])}"


def _web_svg_lines(web: Web, max_delta: float) -> list[str]:
    n = web.upto(max_delta)
    return [f'<path d="{_geodesic_path(float(web.phi[i]), float(web.half_width[i]))}" '
            f'fill="none" stroke="black" stroke-width="0.002"/>' for i in range(n)]


def _zone_color(k: int) -> str:
    if k == 0:
        return "#000000"
    # golden-angle hue steps keep neighbouring zones distinct
    r, g, b = colorsys.hls_to_rgb((k * 0.381966) % 1.0, 0.55 + 0.15 * (k % 2), 0.65)
    return f"#{round(255 * r):02x}{round(255 * g):02x}{round(255 * b):02x}"


def _zones_svg(cfg: RunConfig, web: Web, zmap: ZoneMap) -> str:
    out = _svg_open(cfg)
    dr = zmap.radii[1] - zmap.radii[0] if len(zmap.radii) > 1 else zmap.radii[0] * 2
    dt = zmap.thetas[1] - zmap.thetas[0]
    labels = zmap.zone
    for i, r in enumerate(zmap.radii):
        e1, e2 = math.tanh(max(r - dr / 2, 0.0) / 2), math.tanh((r + dr / 2) / 2)
        row = labels[i]
        # one annular sector per run of equal labels along the ring
        starts = np.flatnonzero(np.r_[True, row[1:] != row[:-1]])
        ends = np.r_[starts[1:], len(row)]
        if len(starts) == 1:
            path = (f"M{_f(e2)},0 A{_f(e2)},{_f(e2)} 0 1 0 {_f(-e2)},0 A{_f(e2)},{_f(e2)} 0 1 0 {_f(e2)},0 Z "
                    f"M{_f(e1)},0 A{_f(e1)},{_f(e1)} 0 1 1 {_f(-e1)},0 A{_f(e1)},{_f(e1)} 0 1 1 {_f(e1)},0 Z")
            out.append(f'<path d="{path}" fill="{_zone_color(int(row[0]))}" fill-rule="evenodd" stroke="none"/>')
            continue
        for a0, a1 in zip(starts, ends):
            t1, t2 = zmap.thetas[a0] - dt / 2, zmap.thetas[a1 - 1] + dt / 2
            large = 1 if t2 - t1 > math.pi else 0
            a = _screen(e2 * complex(math.cos(t1), math.sin(t1)))
            b = _screen(e2 * complex(math.cos(t2), math.sin(t2)))
            c = _screen(e1 * complex(math.cos(t2), math.sin(t2)))
            d = _screen(e1 * complex(math.cos(t1), math.sin(t1)))
            path = (f"M{_f(a[0])},{_f(a[1])} A{_f(e2)},{_f(e2)} 0 {large} 0 {_f(b[0])},{_f(b[1])} "
                    f"L{_f(c[0])},{_f(c[1])} A{_f(e1)},{_f(e1)} 0 {large} 1 {_f(d[0])},{_f(d[1])} Z")
            col = _zone_color(int(row[a0]))
            # a hairline of the fill colour hides anti-aliasing seams between rings
            out.append(f'<path d="{path}" fill="{col}" stroke="{col}" stroke-width="0.001"/>')
    out += _web_svg_lines(web, float(zmap.radii[-1] + dr / 2))
    return "\n".join(out + _svg_close()) + "\n"


def _zones_csv(cfg: RunConfig, zmap: ZoneMap) -> str:
    buf = io.StringIO()
    buf.write(f"# {_header(cfg)}\n")
    buf.write("r,theta,iota,upsilon,B,I,degenerate\n")
    for r, t, io_, up, B, I, deg in zmap.rows():
        buf.write(f"{r:.12g},{t:.12g},{io_},{up},{B},{I},{int(deg)}\n")
    return buf.getvalue()


def cmd_orbit(cfg: RunConfig) -> str:
    d = _ball(cfg).to_dict()
    d["version"] = __version__
    return _json(d)


def cmd_web(cfg: RunConfig) -> str:
    web = _web(cfg)
    if cfg.fmt == "svg":
        lim = cfg.r_max if cfg.r_max is not None else web.query_radius_limit
        return "\n".join(_svg_open(cfg) + _web_svg_lines(web, lim) + _svg_close()) + "\n"
    ball = web.ball
    lines = [{"delta": float(web.delta[i]), "phi": float(web.phi[i]), "half_width": float(web.half_width[i]),
              "word": list(ball.word(int(web.source[i])))} for i in range(len(web))]
    return _json({"version": __version__, "genus": cfg.genus, "R": cfg.orbit_radius,
                  "query_radius_limit": web.query_radius_limit, "lines": lines})


def cmd_zones(cfg: RunConfig) -> str:
    web = _web(cfg)
    zmap = classify_grid(web, cfg.grid[0], cfg.grid[1], cfg.r_max, cfg.on_line_tol)
    if cfg.svg:
        Path(cfg.svg).write_text(_zones_svg(cfg, web, zmap))
    if cfg.fmt == "svg":
        return _zones_svg(cfg, web, zmap)
    if cfg.fmt == "csv":
        return _zones_csv(cfg, zmap)
    cells = [{"r": r, "theta": t, "iota": a, "upsilon": b, "B": B, "I": I, "degenerate": deg}
             for r, t, a, b, B, I, deg in zmap.rows()]
    return _json({"version": __version__, "genus": cfg.genus, "R": cfg.orbit_radius,
                  "grid": list(cfg.grid), "boundary_fraction": zmap.boundary_fraction, "cells": cells})


def cmd_spectrum(cfg: RunConfig) -> str:
    web = _web(cfg)
    events = focal_spectrum(web, cfg.r_max, cfg.merge_tol)
    if cfg.fmt == "csv":
        rows = [f"# {_header(cfg)}", "radius,kind,multiplicity"]
        rows += [f"{e.radius:.12g},{e.kind.value},{e.multiplicity}" for e in events]
        return "\n".join(rows) + "\n"
    out = []
    for e in events:
        if e.kind == EventKind.TANGENCY:
            wit = [{"re": w.point.re, "im": w.point.im, "word": list(w.word)} for w in e.witnesses]
        else:
            wit = [{"re": w.point.re, "im": w.point.im, "incident": w.incident} for w in e.witnesses]
        out.append({"radius": e.radius, "kind": e.kind.value, "multiplicity": e.multiplicity,
                    "witnesses": wit, "warning": e.warning})
    return _json({"version": __version__, "genus": cfg.genus, "R": cfg.orbit_radius, "events": out})


def cmd_boundary(cfg: RunConfig) -> str:
    iset = interval_set(_web(cfg))
    J = Interval(0.0, math.pi)
    report = {"version": __version__, "genus": cfg.genus, "R": cfg.orbit_radius, "eps": cfg.eps,
              "n_intervals": len(iset), "count_exceeding_eps": iset.count_exceeding(cfg.eps)}
    # a stall propagates as a truncation failure (exit 4)
    cover = cover_interval(iset, J, cfg.eps)
    report["cover"] = [{"center": I.center, "half_width": I.half_width} for I in cover]
    report["cover_verified"] = verify_cover(J, cover, cfg.eps)
    chain = nested_chain(iset, cfg.x, cfg.depth)
    report["chain"] = {"x": cfg.x, "depth": cfg.depth, "shortfall": chain.shortfall,
                       "intervals": [{"center": I.center, "half_width": I.half_width} for I in chain.intervals]}
    return _json(report)


def cmd_compare(cfg: RunConfig) -> str:
    balls = []
    for p in cfg.inputs:
        balls.append(OrbitBall.from_dict(json.loads(Path(p).read_text())))
    rep = rotation_detect(balls[0], balls[1], cfg.tol).to_dict()
    rep["version"] = __version__
    return _json(rep)


def cmd_oracle(cfg: RunConfig) -> str:
    rng = np.random.default_rng(cfg.seed)
    pts = rng.uniform(-3.0, 3.0, size=(cfg.samples, 2))
    agree, skipped = 0, 0
    for x, y in pts:
        z = PlanePoint(float(x), float(y))
        a = euclid_disk_counts(z, 9)
        b = euclid_crossing_counts(z, 9)
        if a[1] or b[1]:
            skipped += 1
            continue
        agree += a == b
    areas = {str(k): euclid_zone_area(k, cfg.oracle_grid) for k in range(1, 5)}
    tested = cfg.samples - skipped
    ok_routes = agree == tested
    ok_areas = all(abs(v - 1.0) <= 0.02 for v in areas.values())
    return _json({"version": __version__, "samples": cfg.samples, "tested": tested,
                  "routes_agree": ok_routes, "zone_areas": areas, "areas_within_2pct": ok_areas,
                  "pass": bool(ok_routes and ok_areas)})


HANDLERS = {
    "orbit": cmd_orbit, "web": cmd_web, "zones": cmd_zones, "spectrum": cmd_spectrum,
    "boundary": cmd_boundary, "compare": cmd_compare, "oracle": cmd_oracle,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute ``cfg``; payload goes to cfg.output or stdout. Returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def fail(code: int, kind: str, exc: Exception) -> int:
        diag = {"error": kind, "exit_code": code, "message": str(exc),
                "exception": type(exc).__name__, "command": cfg.command}
        if isinstance(exc, CoverStallError):
            diag["stall_point"] = exc.stall_point
        stderr.write(_json(diag))
        return code

    try:
        cfg.validate()
        payload = HANDLERS[cfg.command](cfg)
    except DegeneracyError as exc:
        return fail(EXIT_DEGENERATE, "degeneracy", exc)
    except TruncationError as exc:
        return fail(EXIT_TRUNCATED, "truncation", exc)
    except (ValueError, OSError, KeyError) as exc:
        return fail(EXIT_USAGE, "usage", exc)
    if cfg.output:
        Path(cfg.output).write_text(payload)
    else:
        stdout.write(payload)
    return EXIT_OK


def _grid(s: str) -> tuple[int, int]:
    try:
        a, b = s.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 200x512, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="focalzones", description="Focal decomposition of hyperbolic surfaces.")
    p.add_argument("--version", action="version", version=f"focalzones {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--genus", type=int, default=2)
        sp.add_argument("--orbit-radius", type=float, default=8.0)
        sp.add_argument("--rotation", type=float, default=0.0, help="conjugate the group by this rotation")
        sp.add_argument("--dedup-tol", type=float, default=DEDUP_TOL)
        sp.add_argument("--on-line-tol", type=float, default=ON_LINE_TOL)
        sp.add_argument("--merge-tol", type=float, default=MERGE_TOL)
        sp.add_argument("--format", choices=sorted({f for v in FORMATS.values() for f in v}))
        sp.add_argument("-o", "--output")

    for name in ("orbit", "web", "zones", "spectrum", "boundary"):
        sp = sub.add_parser(name)
        common(sp)
        if name in ("web", "zones", "spectrum"):
            sp.add_argument("--r-max", type=float, help="query radius (default orbit radius / 2)")
        if name == "zones":
            sp.add_argument("--grid", type=_grid, default=(64, 256))
            sp.add_argument("--svg", help="also write an SVG rendering here")
        if name == "boundary":
            sp.add_argument("--eps", type=float, default=0.3)
            sp.add_argument("--depth", type=int, default=3)
            sp.add_argument("--x", type=float, default=0.0)

    sp = sub.add_parser("compare")
    sp.add_argument("inputs", nargs=2)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--format", choices=["json"])
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("oracle")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--grid", type=int, default=1024, dest="oracle_grid")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["json"])
    sp.add_argument("-o", "--output")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = {k: v for k, v in vars(ns).items() if v is not None}
    d = {k.replace("-", "_"): v for k, v in d.items()}
    if "inputs" in d:
        d["inputs"] = tuple(d["inputs"])
    return RunConfig(**d)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
