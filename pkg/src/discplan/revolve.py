"""Revolving-area search.

Each position z needs a radius-2 disc A centered within distance 1 of z that
avoids all obstacles and keeps every other start/target position out of A's
interior-with-margin: the center c must satisfy dist(c, obstacles) >= 2 and
|c - y| >= 3 for every other position y. Only positions within distance 4 of
z can violate the second family, which a unit-cell hash makes cheap to find.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import AssumptionViolated, NoRevolvingArea
from .geom import (EPS, Point, Polygon, Segment, circle_circle_intersect, dist,
                   dist_point_polygon, dist_point_segment, segment_circle_params)

if TYPE_CHECKING:
    from .scenario import Scenario

RB_RADIUS = 4.0
OBSTACLE_KEEPOUT = 2.0
POSITION_KEEPOUT = 3.0
MAX_CENTER_OFFSET = 1.0
SAMPLE_BUDGET = 4096
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class RevolvingArea:
    """Position z and the chosen center c of its radius-2 revolving area."""

    z: Point
    c: Point


class NeighborIndex:
    """Unit-cell spatial hash over positions for radius-4 neighbor queries."""

    def __init__(self, positions: Sequence[Point]):
        self.positions = [Point(float(p[0]), float(p[1])) for p in positions]
        self._cells: dict[tuple[int, int], list[int]] = defaultdict(list)
        for idx, p in enumerate(self.positions):
            self._cells[(math.floor(p.x), math.floor(p.y))].append(idx)

    def near(self, z: Point, radius: float = RB_RADIUS,
             skip: int | None = None) -> list[int]:
        """Indices of positions within `radius` of z (inclusive), ascending."""
        r = math.ceil(radius) + 1
        cx, cy = math.floor(z.x), math.floor(z.y)
        out = []
        for ix in range(cx - r, cx + r + 1):
            for iy in range(cy - r, cy + r + 1):
                for idx in self._cells.get((ix, iy), ()):
                    if idx == skip:
                        continue
                    if dist(self.positions[idx], z) <= radius + EPS:
                        out.append(idx)
        out.sort()
        return out


def _feasible(c: Point, z: Point, obstacles: Sequence[Polygon],
              others: Sequence[Point]) -> float | None:
    """Clearance margin of candidate center c, or None if infeasible."""
    if dist(c, z) > MAX_CENTER_OFFSET + EPS:
        return None
    margin = math.inf
    for poly in obstacles:
        slack = dist_point_polygon(c, poly) - OBSTACLE_KEEPOUT
        if slack < -EPS:
            return None
        margin = min(margin, slack)
    for y in others:
        slack = dist(c, y) - POSITION_KEEPOUT
        if slack < -EPS:
            return None
        margin = min(margin, slack)
    return margin


def _boundary_curves(z: Point, obstacles: Sequence[Polygon],
                     others: Sequence[Point]):
    """Constraint-boundary curves near z: circles (center, radius) and offset segments.

    Offset segments sit at distance 2 outward of obstacle edges; radius-2
    circles around obstacle vertices close the offset at corners. The rim of
    the unit disc around z joins as a circle of radius 1.
    """
    circles: list[tuple[Point, float]] = [(z, MAX_CENTER_OFFSET)]
    segments: list[Segment] = []
    reach = MAX_CENTER_OFFSET + OBSTACLE_KEEPOUT + 1.0
    for y in others:
        circles.append((y, POSITION_KEEPOUT))
    for poly in obstacles:
        if dist_point_polygon(z, poly) > reach:
            continue
        for v in poly.vertices:
            if dist(v, z) <= reach + 1.0:
                circles.append((v, OBSTACLE_KEEPOUT))
        for e in poly.edges():
            if dist_point_segment(z, e) > reach + 1.0:
                continue
            dx, dy = e.b.x - e.a.x, e.b.y - e.a.y
            ln = math.hypot(dx, dy)
            nx, ny = dy / ln, -dx / ln
            segments.append(Segment(Point(e.a.x + OBSTACLE_KEEPOUT * nx,
                                          e.a.y + OBSTACLE_KEEPOUT * ny),
                                    Point(e.b.x + OBSTACLE_KEEPOUT * nx,
                                          e.b.y + OBSTACLE_KEEPOUT * ny)))
    return circles, segments


def _curve_candidates(z: Point, circles, segments) -> Iterable[Point]:
    # Pairwise curve intersections: region corners are always among these.
    for i in range(len(circles)):
        ci, ri = circles[i]
        for j in range(i + 1, len(circles)):
            cj, rj = circles[j]
            if dist(ci, cj) > ri + rj + 2.0 * EPS:
                continue
            yield from circle_circle_intersect(ci, ri, cj, rj).points
        for seg in segments:
            for t in segment_circle_params(seg, ci, ri):
                yield seg.point_at(t)
    for i in range(len(segments)):
        for j in range(i + 1, len(segments)):
            p = _seg_seg_point(segments[i], segments[j])
            if p is not None:
                yield p
    # Per-curve points closest to z.
    for cen, r in circles:
        d = dist(cen, z)
        if d > EPS:
            yield Point(cen.x + r * (z.x - cen.x) / d, cen.y + r * (z.y - cen.y) / d)
    for seg in segments:
        vx, vy = seg.b.x - seg.a.x, seg.b.y - seg.a.y
        vv = vx * vx + vy * vy
        if vv > EPS * EPS:
            t = min(1.0, max(0.0, ((z.x - seg.a.x) * vx + (z.y - seg.a.y) * vy) / vv))
            yield seg.point_at(t)


def _seg_seg_point(s1: Segment, s2: Segment) -> Point | None:
    d1x, d1y = s1.b.x - s1.a.x, s1.b.y - s1.a.y
    d2x, d2y = s2.b.x - s2.a.x, s2.b.y - s2.a.y
    den = d1x * d2y - d1y * d2x
    if abs(den) <= EPS:
        return None
    t = ((s2.a.x - s1.a.x) * d2y - (s2.a.y - s1.a.y) * d2x) / den
    u = ((s2.a.x - s1.a.x) * d1y - (s2.a.y - s1.a.y) * d1x) / den
    if -EPS <= t <= 1.0 + EPS and -EPS <= u <= 1.0 + EPS:
        return s1.point_at(min(1.0, max(0.0, t)))
    return None


def _best(cands: Iterable[Point], z: Point, obstacles, others) -> Point | None:
    best: tuple[float, float, float, float] | None = None
    best_c: Point | None = None
    for c in cands:
        margin = _feasible(c, z, obstacles, others)
        if margin is None:
            continue
        key = (-margin, dist(c, z), c.x, c.y)
        if best is None or key < best:
            best = key
            best_c = c
    return best_c


def find_revolving_area(z: Point, obstacles: Sequence[Polygon],
                        others: Sequence[Point]) -> RevolvingArea:
    """Find a revolving-area center for position z.

    Candidate order: z itself (fast path), intersection and extremal points of
    the constraint-boundary curves, then a deterministic 4096-point sunflower
    sample of the unit disc. Ties break toward maximum clearance margin.

    Raises NoRevolvingArea when every candidate fails.
    """
    relevant = [y for y in others
                if dist(y, z) <= RB_RADIUS + MAX_CENTER_OFFSET + EPS]
    if _feasible(z, z, obstacles, relevant) is not None:
        return RevolvingArea(z, z)
    circles, segments = _boundary_curves(z, obstacles, relevant)
    c = _best(_curve_candidates(z, circles, segments), z, obstacles, relevant)
    if c is not None:
        return RevolvingArea(z, c)
    samples = []
    for k in range(SAMPLE_BUDGET):
        r = MAX_CENTER_OFFSET * math.sqrt((k + 0.5) / SAMPLE_BUDGET)
        a = k * GOLDEN_ANGLE
        samples.append(Point(z.x + r * math.cos(a), z.y + r * math.sin(a)))
    c = _best(samples, z, obstacles, relevant)
    if c is not None:
        return RevolvingArea(z, c)
    raise NoRevolvingArea(f"no revolving-area center within 1 of {z}")


def position_list(scenario: "Scenario") -> list[Point]:
    """Starts then targets; index i < m is start i, m + i is target i."""
    return list(scenario.starts) + list(scenario.targets)


def describe_position(scenario: "Scenario", idx: int) -> str:
    m = len(scenario.starts)
    if idx < m:
        return f"start[{idx}]={scenario.starts[idx]}"
    return f"target[{idx - m}]={scenario.targets[idx - m]}"


def find_all(scenario: "Scenario") -> list[RevolvingArea]:
    """Revolving areas for all 2m positions, starts first.

    Raises AssumptionViolated listing every position without an area.
    """
    positions = position_list(scenario)
    index = NeighborIndex(positions)
    areas: list[RevolvingArea] = []
    failures: list[str] = []
    for i, z in enumerate(positions):
        others = [positions[j] for j in index.near(z, skip=i)]
        try:
            areas.append(find_revolving_area(z, scenario.obstacles, others))
        except NoRevolvingArea:
            failures.append(describe_position(scenario, i))
    if failures:
        raise AssumptionViolated(failures)
    return areas
