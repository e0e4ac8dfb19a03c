"""Independent trajectory checker.

Re-measures everything from the trajectory slots themselves: endpoint
placement, temporal and spatial continuity, robot-robot and robot-obstacle
clearance at sampled times, exact total length, and the ratio against the
initial shortest paths.

Sampling resolution guarantee: within each window between slot boundaries the
time step is chosen so no robot displaces more than STEP_DISP = 0.01 between
consecutive samples (speed bounds come from piece arc length over slot width;
a shadowing robot's angular speed is bounded by the mover's speed over its
distance to the center). Robot-robot distance therefore changes by at most
2 * STEP_DISP between samples, and obstacle distance by at most STEP_DISP, so
with clearance slack eps any true interpenetration deeper than
eps + 2 * STEP_DISP (robots) or eps + STEP_DISP (obstacles) is detected.
Deeper penetration hidden behind a spatial jump would trip the continuity
check first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .coordinate import (DwellMotion, MoveMotion, RetractMotion, Trajectory,
                         retraction_sweep)
from .geom import CircArc, Point, Segment, dist, dist_point_piece, piece_length
from .kernels import points_min_dist_to_segs
from .scenario import Scenario

EPS_VAL = 1e-6
STEP_DISP = 0.01
PAIR_CLEARANCE = 2.0
OBSTACLE_CLEARANCE = 1.0


@dataclass(frozen=True)
class Violation:
    time: float
    kind: str  # robot-robot | robot-obstacle | discontinuity | endpoint
    robots: tuple[int, ...]
    distance: float


@dataclass
class ValidationReport:
    ok: bool
    violations: list[Violation]
    min_robot_robot_clearance: float
    min_obstacle_clearance: float
    total_length: float
    dist_ratio: float


def _motion_length(motion) -> float:
    if isinstance(motion, DwellMotion):
        return 0.0
    if isinstance(motion, MoveMotion):
        return piece_length(motion.piece)
    return retraction_sweep(motion.center, motion.piece)


def _speed_bound(motion, width: float) -> float:
    if width <= 0.0 or isinstance(motion, DwellMotion):
        return 0.0
    if isinstance(motion, MoveMotion):
        return piece_length(motion.piece) / width
    d = dist_point_piece(motion.center, motion.piece)
    return piece_length(motion.piece) / (width * max(d, 1e-9))


def _piece_points(piece, taus: np.ndarray) -> np.ndarray:
    if isinstance(piece, Segment):
        ax, ay = piece.a
        return np.stack([ax + taus * (piece.b.x - ax),
                         ay + taus * (piece.b.y - ay)], axis=1)
    arc: CircArc = piece
    ang = arc.a0 + (arc.extent if arc.ccw else -arc.extent) * taus
    return np.stack([arc.center.x + arc.radius * np.cos(ang),
                     arc.center.y + arc.radius * np.sin(ang)], axis=1)


def _motion_points(motion, taus: np.ndarray) -> np.ndarray:
    if isinstance(motion, DwellMotion):
        out = np.empty((len(taus), 2))
        out[:, 0] = motion.point.x
        out[:, 1] = motion.point.y
        return out
    if isinstance(motion, MoveMotion):
        return _piece_points(motion.piece, taus)
    pts = _piece_points(motion.piece, taus)
    u = pts - np.array([motion.center.x, motion.center.y])
    n = np.hypot(u[:, 0], u[:, 1])[:, None]
    return np.array([motion.center.x, motion.center.y]) - u / n


def _edges_array(scenario: Scenario) -> np.ndarray:
    rows = []
    for poly in scenario.obstacles:
        for e in poly.edges():
            rows.append((e.a.x, e.a.y, e.b.x, e.b.y))
    return np.asarray(rows, dtype=float) if rows else np.empty((0, 4))


class _Containment:
    """Point-in-polygon test with a bounding-box prefilter."""

    def __init__(self, scenario: Scenario):
        self.polys = []
        for poly in scenario.obstacles:
            xs = np.array([v.x for v in poly.vertices])
            ys = np.array([v.y for v in poly.vertices])
            self.polys.append((xs, ys, xs.min(), xs.max(), ys.min(), ys.max()))

    def any_inside(self, pts: np.ndarray) -> np.ndarray:
        inside = np.zeros(len(pts), dtype=bool)
        for xs, ys, x0, x1, y0, y1 in self.polys:
            cand = ((pts[:, 0] >= x0) & (pts[:, 0] <= x1)
                    & (pts[:, 1] >= y0) & (pts[:, 1] <= y1) & ~inside)
            if not cand.any():
                continue
            px = pts[cand, 0][:, None]
            py = pts[cand, 1][:, None]
            ax, ay = xs[None, :], ys[None, :]
            bx, by = np.roll(xs, -1)[None, :], np.roll(ys, -1)[None, :]
            straddles = (ay > py) != (by > py)
            # horizontal edges never straddle; silence their 0/0 lanes
            with np.errstate(divide="ignore", invalid="ignore"):
                crosses = straddles & (
                    px < ax + (bx - ax) * (py - ay) / (by - ay))
            inside[cand] |= (crosses.sum(axis=1) % 2).astype(bool)
        return inside


def validate(trajectories: Sequence[Trajectory], scenario: Scenario,
             initial_paths, dt_max: float = 0.05,
             eps: float = EPS_VAL) -> ValidationReport:
    """Check assembled trajectories against the scenario.

    Failures become report entries, never exceptions. initial_paths feeds the
    dist-ratio denominator only.
    """
    m = len(trajectories)
    horizon = float(m)
    violations: list[Violation] = []

    total_length = 0.0
    for tr in trajectories:
        for slot in tr.slots:
            total_length += _motion_length(slot.motion)
    initial_total = sum(p.total_length for p in initial_paths)
    dist_ratio = total_length / initial_total if initial_total > 0 else math.inf

    # Endpoint and continuity checks per robot.
    for i, tr in enumerate(trajectories):
        d0 = dist(tr.position_at(0.0), scenario.starts[i])
        if d0 > eps:
            violations.append(Violation(0.0, "endpoint", (i,), d0))
        d1 = dist(tr.position_at(horizon), scenario.targets[i])
        if d1 > eps:
            violations.append(Violation(horizon, "endpoint", (i,), d1))
        if abs(tr.t_start) > 1e-9 or abs(tr.t_end - horizon) > 1e-9:
            violations.append(Violation(tr.t_start, "discontinuity", (i,),
                                        abs(tr.t_end - horizon)))
        for a, b in zip(tr.slots, tr.slots[1:]):
            if abs(a.t1 - b.t0) > 1e-9:
                violations.append(Violation(a.t1, "discontinuity", (i,),
                                            abs(a.t1 - b.t0)))
            gap = dist(a.end_point(), b.start_point())
            if gap > eps:
                violations.append(Violation(a.t1, "discontinuity", (i,), gap))

    edges = _edges_array(scenario)
    containment = _Containment(scenario)
    min_pair = math.inf
    min_obst = math.inf

    # Windows between consecutive slot boundaries across all robots.
    epochs_raw = sorted({round(t, 12)
                         for tr in trajectories
                         for s in tr.slots for t in (s.t0, s.t1)})
    epochs = [epochs_raw[0]]
    for t in epochs_raw[1:]:
        if t - epochs[-1] > 1e-12:
            epochs.append(t)

    slot_idx = [0] * m

    def check_pairs(times: np.ndarray, pts: np.ndarray,
                    ids_a: list[int], ids_b: list[int] | None,
                    pts_b: np.ndarray | None) -> None:
        """pts: (T, A, 2). pts_b None means A-vs-A, else A-vs-B (T, B, 2)."""
        nonlocal min_pair
        if pts_b is None:
            if len(ids_a) < 2:
                return
            diff = pts[:, :, None, :] - pts[:, None, :, :]
            dmat = np.hypot(diff[..., 0], diff[..., 1])
            iu = np.triu_indices(len(ids_a), k=1)
            dvals = dmat[:, iu[0], iu[1]]
            pairs = [(ids_a[a], ids_a[b]) for a, b in zip(*iu)]
        else:
            if not ids_a or not ids_b:
                return
            diff = pts[:, :, None, :] - pts_b[:, None, :, :]
            dmat = np.hypot(diff[..., 0], diff[..., 1])
            dvals = dmat.reshape(len(times), -1)
            pairs = [(ia, ib) for ia in ids_a for ib in ids_b]
        w_min = dvals.min()
        if w_min < min_pair:
            min_pair = w_min
        if w_min < PAIR_CLEARANCE - eps:
            bad = np.argwhere(dvals < PAIR_CLEARANCE - eps)
            for ti, pi in bad:
                violations.append(Violation(float(times[ti]), "robot-robot",
                                            pairs[pi], float(dvals[ti, pi])))

    def check_obstacles(times: np.ndarray, pts: np.ndarray,
                        ids: list[int]) -> None:
        """pts: (T, A, 2) sample positions of the listed robots."""
        nonlocal min_obst
        if not ids or len(edges) == 0:
            return
        flat = pts.reshape(-1, 2)
        d = points_min_dist_to_segs(flat, edges)
        inside = containment.any_inside(flat)
        d = np.where(inside, -d, d)
        w_min = d.min()
        if w_min < min_obst:
            min_obst = w_min
        if w_min < OBSTACLE_CLEARANCE - eps:
            n_a = len(ids)
            for flat_i in np.nonzero(d < OBSTACLE_CLEARANCE - eps)[0]:
                ti, ai = divmod(int(flat_i), n_a)
                violations.append(Violation(float(times[ti]), "robot-obstacle",
                                            (ids[ai],), float(d[flat_i])))

    for a, b in zip(epochs, epochs[1:]):
        t_mid = 0.5 * (a + b)
        moving: list[int] = []
        static: list[int] = []
        static_pts = []
        speeds = {}
        for i, tr in enumerate(trajectories):
            while (slot_idx[i] + 1 < len(tr.slots)
                   and tr.slots[slot_idx[i]].t1 < t_mid):
                slot_idx[i] += 1
            slot = tr.slots[slot_idx[i]]
            v = _speed_bound(slot.motion, slot.t1 - slot.t0)
            if v > 0.0:
                moving.append(i)
                speeds[i] = v
            else:
                static.append(i)
                p = slot.position_at(t_mid)
                static_pts.append((p.x, p.y))
        s_arr = np.asarray(static_pts) if static_pts else np.empty((0, 2))

        if not moving:
            # Static configuration: one check at the window start.
            times = np.array([a])
            pts = s_arr[None, :, :]
            check_pairs(times, pts, static, None, None)
            check_obstacles(times, pts, static)
            continue

        v_max = max(speeds[i] for i in moving)
        step = min(dt_max, STEP_DISP / v_max)
        n = max(1, int(math.ceil((b - a) / step)))
        times = a + (b - a) * np.arange(n + 1) / n
        mov_pts = np.empty((n + 1, len(moving), 2))
        for col, i in enumerate(moving):
            slot = tr_slot = trajectories[i].slots[slot_idx[i]]
            width = tr_slot.t1 - tr_slot.t0
            taus = np.clip((times - tr_slot.t0) / width, 0.0, 1.0)
            mov_pts[:, col, :] = _motion_points(tr_slot.motion, taus)
        check_pairs(times, mov_pts, moving, None, None)
        if static:
            stat_tiled = np.broadcast_to(s_arr, (n + 1, len(static), 2))
            check_pairs(times, mov_pts, moving, static, stat_tiled)
            check_pairs(times[:1], s_arr[None, :, :], static, None, None)
            check_obstacles(times[:1], s_arr[None, :, :], static)
        check_obstacles(times, mov_pts, moving)

    return ValidationReport(
        ok=not violations,
        violations=violations,
        min_robot_robot_clearance=min_pair,
        min_obstacle_clearance=min_obst,
        total_length=total_length,
        dist_ratio=dist_ratio,
    )


def report_to_text(report: ValidationReport) -> str:
    lines = [
        f"ok {'true' if report.ok else 'false'}",
        f"min_robot_robot {report.min_robot_robot_clearance:.17g}",
        f"min_obstacle {report.min_obstacle_clearance:.17g}",
        f"total_length {report.total_length:.17g}",
        f"dist_ratio {report.dist_ratio:.17g}",
        f"violations {len(report.violations)}",
    ]
    for v in report.violations:
        robots = " ".join(str(r) for r in v.robots)
        lines.append(f"violation {v.time:.17g} {v.kind} {robots} "
                     f"{v.distance:.17g}")
    return "\n".join(lines) + "\n"
