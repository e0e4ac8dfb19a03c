"""SVG rendering of scenarios and trajectories. Offline figures only."""

from __future__ import annotations

import io
import math
from typing import Sequence

from .coordinate import MoveMotion, RetractMotion, Trajectory
from .geom import CircArc, Point, Polycurve, Segment
from .revolve import RevolvingArea
from .scenario import Scenario

_STYLE = (
    "polygon.obstacle{fill:#4a4a55;stroke:#222;stroke-width:0.05}"
    ".start{fill:none;stroke:#2a8f2a;stroke-width:0.08}"
    ".target{fill:none;stroke:#c03030;stroke-width:0.08}"
    ".ring-c{fill:none;stroke:#7a5fb5;stroke-width:0.05}"
    ".ring-a{fill:none;stroke:#7a5fb5;stroke-width:0.04;stroke-dasharray:0.2 0.2}"
    ".ring-b{fill:none;stroke:#b5a05f;stroke-width:0.04;stroke-dasharray:0.35 0.35}"
    ".initial{fill:none;stroke:#4f7fd0;stroke-width:0.08}"
    ".final{fill:none;stroke:#e07820;stroke-width:0.1}"
    ".robot{fill:#4f7fd0;fill-opacity:0.55;stroke:#1d4e9e;stroke-width:0.06}"
)


def _f(x: float) -> str:
    return f"{x:.6g}"


def _arc_cmd(arc: CircArc) -> str:
    """SVG A-command for a math-coords arc; the page flips the y axis, so a
    counterclockwise arc renders with sweep flag 1."""
    parts = []
    # SVG cannot draw a full turn in one A command; split long arcs.
    n = max(1, math.ceil(arc.extent / (math.pi * 0.9)))
    for k in range(1, n + 1):
        t = k / n
        p = arc.point_at(t)
        ext = arc.extent / n
        large = "1" if ext > math.pi else "0"
        sweep = "1" if arc.ccw else "0"
        parts.append(f"A {_f(arc.radius)} {_f(arc.radius)} 0 "
                     f"{large} {sweep} {_f(p.x)} {_f(p.y)}")
    return " ".join(parts)


def _path_d(curve: Polycurve) -> str:
    s = curve.start()
    cmds = [f"M {_f(s.x)} {_f(s.y)}"]
    for piece in curve.pieces:
        if isinstance(piece, Segment):
            cmds.append(f"L {_f(piece.b.x)} {_f(piece.b.y)}")
        else:
            cmds.append(_arc_cmd(piece))
    return " ".join(cmds)


def _bounds(scenario: Scenario) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for poly in scenario.obstacles:
        xs.extend(v.x for v in poly.vertices)
        ys.extend(v.y for v in poly.vertices)
    for p in list(scenario.starts) + list(scenario.targets):
        xs.append(p.x)
        ys.append(p.y)
    pad = 4.0
    return min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad


def _document(scenario: Scenario, body: str) -> str:
    x0, y0, x1, y1 = _bounds(scenario)
    w, h = x1 - x0, y1 - y0
    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" '
              f'viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}" '
              f'width="{_f(w * 24)}" height="{_f(h * 24)}">\n')
    out.write(f"<style>{_STYLE}</style>\n")
    out.write('<g transform="scale(1,-1)">\n')
    out.write(body)
    out.write("</g>\n</svg>\n")
    return out.getvalue()


def _scene_body(scenario: Scenario,
                areas: Sequence[RevolvingArea] | None) -> str:
    out = io.StringIO()
    for poly in scenario.obstacles:
        pts = " ".join(f"{_f(v.x)},{_f(v.y)}" for v in poly.vertices)
        out.write(f'<polygon class="obstacle" points="{pts}"/>\n')
    if areas:
        for area in areas:
            cx, cy = _f(area.c.x), _f(area.c.y)
            out.write(f'<circle class="ring-a" cx="{cx}" cy="{cy}" r="2"/>\n')
            out.write(f'<circle class="ring-c" cx="{cx}" cy="{cy}" r="1"/>\n')
            out.write(f'<circle class="ring-b" cx="{cx}" cy="{cy}" r="3"/>\n')
    for p in scenario.starts:
        out.write(f'<circle class="start" cx="{_f(p.x)}" cy="{_f(p.y)}" r="1"/>\n')
    for p in scenario.targets:
        out.write(f'<circle class="target" cx="{_f(p.x)}" cy="{_f(p.y)}" r="1"/>\n')
    return out.getvalue()


def _final_path_d(tr: Trajectory) -> str:
    cmds: list[str] = []
    cursor: Point | None = None
    for slot in tr.slots:
        if isinstance(slot.motion, MoveMotion):
            piece = slot.motion.piece
            p = piece.start()
            if cursor is None or abs(p.x - cursor.x) + abs(p.y - cursor.y) > 1e-12:
                cmds.append(f"M {_f(p.x)} {_f(p.y)}")
            if isinstance(piece, Segment):
                cmds.append(f"L {_f(piece.b.x)} {_f(piece.b.y)}")
            else:
                cmds.append(_arc_cmd(piece))
            cursor = piece.end()
        elif isinstance(slot.motion, RetractMotion):
            for k in range(1, 17):
                p = slot.position_at(slot.t0 + (slot.t1 - slot.t0) * k / 16)
                cmds.append(f"L {_f(p.x)} {_f(p.y)}")
                cursor = p
    return " ".join(cmds)


def render_static(scenario: Scenario,
                  areas: Sequence[RevolvingArea] | None = None,
                  initial_paths: Sequence[Polycurve] | None = None,
                  trajectories: Sequence[Trajectory] | None = None) -> str:
    body = io.StringIO()
    body.write(_scene_body(scenario, areas))
    if initial_paths:
        for path in initial_paths:
            body.write(f'<path class="initial" d="{_path_d(path)}"/>\n')
    if trajectories:
        for tr in trajectories:
            d = _final_path_d(tr)
            if d:
                body.write(f'<path class="final" d="{d}"/>\n')
    return _document(scenario, body.getvalue())


def render_frames(scenario: Scenario, trajectories: Sequence[Trajectory],
                  n_frames: int,
                  areas: Sequence[RevolvingArea] | None = None) -> list[str]:
    """One SVG per time sample over [0, m]."""
    scene = _scene_body(scenario, areas)
    horizon = float(len(trajectories))
    frames = []
    for k in range(n_frames):
        t = horizon * k / max(1, n_frames - 1)
        body = io.StringIO()
        body.write(scene)
        for tr in trajectories:
            p = tr.position_at(t)
            body.write(f'<circle class="robot" cx="{_f(p.x)}" '
                       f'cy="{_f(p.y)}" r="1"/>\n')
        frames.append(_document(scenario, body.getvalue()))
    return frames
