"""Self-contained SVG maps of instances, assignments and tours."""

from __future__ import annotations

import numpy as np

from .instance import FlpInstance, FlpSolution, Region
from .tsp import Tour

__all__ = ["Viewport", "render_svg", "EDGE_MIN", "EDGE_WIDTH"]

EDGE_MIN = 1e-6  # assignments at or below this are not drawn
EDGE_WIDTH = 3.0  # stroke width of a full (y = 1) assignment edge


class Viewport:
    """
    Map region coordinates onto an SVG canvas with one uniform scale.

    The region is centred inside ``width x height`` minus ``margin`` on
    every side; the y axis is flipped so north points up.
    """

    def __init__(self, region: Region, width: float = 800.0, height: float = 800.0, margin: float = 20.0):
        if region.problems():
            raise ValueError("; ".join(region.problems()))
        self.width, self.height = float(width), float(height)
        self.region = region
        inner_w, inner_h = width - 2 * margin, height - 2 * margin
        if inner_w <= 0 or inner_h <= 0:
            raise ValueError("margin leaves no drawing area")
        self.scale = min(inner_w / region.width, inner_h / region.height)
        self.ox = margin + 0.5 * (inner_w - self.scale * region.width)
        self.oy = margin + 0.5 * (inner_h - self.scale * region.height)

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        r = self.region
        return self.ox + self.scale * (x - r.x_min), self.oy + self.scale * (r.y_max - y)


def _f(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def render_svg(
    inst: FlpInstance,
    solution: FlpSolution | None = None,
    tour: Tour | None = None,
    width: float = 800.0,
    height: float = 800.0,
) -> str:
    """
    Draw facilities (squares) and customers (circles).

    With ``solution``, open facilities are filled and every assignment
    ``y_ij > EDGE_MIN`` is a line whose stroke width is
    ``EDGE_WIDTH * y_ij``.  With ``tour`` (over facility locations) the
    route is a closed polyline that repeats its first vertex.
    """
    if solution is not None and tour is not None:
        raise ValueError("pass a solution or a tour, not both")
    vp = Viewport(inst.region, width, height)
    fxy = [vp(f.location.x, f.location.y) for f in inst.facilities]
    cxy = [vp(c.location.x, c.location.y) for c in inst.customers]
    r = inst.region
    x0, y0 = vp(r.x_min, r.y_max)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect class="region" x="{_f(x0)}" y="{_f(y0)}" width="{_f(vp.scale * r.width)}" '
        f'height="{_f(vp.scale * r.height)}" fill="#ffffff" stroke="#999999" stroke-width="1"/>',
    ]

    if solution is not None:
        y = np.asarray(solution.assign, dtype=float)
        if y.shape != (inst.n, inst.m):
            raise ValueError(f"assignment shape {y.shape} does not match the instance {(inst.n, inst.m)}")
        lines.append('<g class="edges" stroke="#7b3294" stroke-linecap="round">')
        for i, j in zip(*np.nonzero(y > EDGE_MIN)):
            (a, b), (c, d) = fxy[i], cxy[j]
            lines.append(
                f'<line class="edge" data-i="{i}" data-j="{j}" x1="{_f(a)}" y1="{_f(b)}" x2="{_f(c)}" y2="{_f(d)}" '
                f'stroke-width="{_f(EDGE_WIDTH * y[i, j])}"/>'
            )
        lines.append("</g>")

    if tour is not None:
        if sorted(tour.order) != list(range(inst.n)):
            raise ValueError("tour does not visit every facility exactly once")
        pts = [fxy[i] for i in tour.order] + [fxy[tour.order[0]]]
        coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in pts)
        lines.append(f'<polyline class="tour" points="{coords}" fill="none" stroke="#1b7837" stroke-width="1.5"/>')

    lines.append('<g class="customers" fill="#2166ac">')
    for j, (a, b) in enumerate(cxy):
        lines.append(f'<circle class="customer" data-j="{j}" cx="{_f(a)}" cy="{_f(b)}" r="4"/>')
    lines.append("</g>")

    opened = None if solution is None else np.asarray(solution.open) > 0
    lines.append('<g class="facilities" stroke="#b2182b" stroke-width="1.5">')
    for i, (a, b) in enumerate(fxy):
        is_open = opened is None or bool(opened[i])
        fill = "#b2182b" if is_open else "#ffffff"
        cls = "facility" if opened is None else ("facility open" if is_open else "facility closed")
        lines.append(
            f'<rect class="{cls}" data-i="{i}" x="{_f(a - 5)}" y="{_f(b - 5)}" width="10.000" height="10.000" fill="{fill}"/>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
