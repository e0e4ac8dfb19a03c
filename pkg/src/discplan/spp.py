"""Shortest path for one unit disc among polygonal obstacles.

The disc's center moves in the complement of the obstacles inflated by 1.
Shortest center paths alternate straight segments with radius-1 arcs around
convex obstacle vertices, so the search graph has one circle per convex
vertex, candidate bitangent segments between circle pairs (offset edges of
the inflated boundary appear as outer bitangents of adjacent vertex circles),
tangents from the two endpoints, and arc edges between angularly consecutive
tangent points on each circle. Every candidate is kept only if it clears all
original obstacles by at least 1 - eps; Dijkstra then finds the path.

The circle/bitangent structure depends only on the obstacles, so one
TangentGraph instance answers all per-robot queries of a scenario.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_right, insort
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import NoPath, StartBlocked, TargetBlocked
from .geom import (EPS, TWO_PI, CircArc, Point, Polycurve, Polygon, Segment,
                   dist, make_arc, normalize_angle, point_in_polygon,
                   seg_arc_distance)

CLEARANCE = 1.0
CLEAR_TOL = 1e-9
ANGLE_KEY = 9  # decimal places for tangent-point dedup on a circle


def _convex_vertices(polygons: Sequence[Polygon]) -> list[Point]:
    seen: set[tuple[float, float]] = set()
    out: list[Point] = []
    for poly in polygons:
        vs = poly.vertices
        k = len(vs)
        for i, v in enumerate(vs):
            p, n = vs[i - 1], vs[(i + 1) % k]
            turn = (v.x - p.x) * (n.y - v.y) - (v.y - p.y) * (n.x - v.x)
            if turn <= EPS:  # reflex or straight: no arc on the inflation
                continue
            key = (v.x, v.y)
            if key not in seen:
                seen.add(key)
                out.append(v)
    return out


def _edges_array(polygons: Sequence[Polygon]) -> np.ndarray:
    rows = []
    for poly in polygons:
        for e in poly.edges():
            rows.append((e.a.x, e.a.y, e.b.x, e.b.y))
    if not rows:
        return np.zeros((0, 4))
    return np.asarray(rows, dtype=np.float64)


@dataclass
class _Edge:
    other: int
    length: float
    # Arc payload: (circle index, angle at this node, angle at other, ccw)
    # or None for a straight segment.
    arc: tuple[int, float, float, bool] | None


class TangentGraph:
    """Static tangent structure of a scene, queryable per (s, t) pair."""

    def __init__(self, obstacles: Sequence[Polygon]):
        self.obstacles = list(obstacles)
        self.edges_arr = _edges_array(self.obstacles)
        self.centers = _convex_vertices(self.obstacles)
        self._poly_verts = [np.asarray([(v.x, v.y) for v in p.vertices])
                            for p in self.obstacles]
        # Per-circle features that can constrain points within distance 1 of
        # the circle: obstacle edges within 2 of the center, polygons within 1.
        self._near_edges: list[list[Segment]] = []
        self._near_polys: list[list[int]] = []
        for c in self.centers:
            if len(self.edges_arr):
                d = kernels.point_dist_to_segs(c.x, c.y, self.edges_arr)
                idx = np.nonzero(d <= 2.0 * CLEARANCE + 1e-6)[0]
            else:
                idx = []
            segs = [Segment(Point(self.edges_arr[i, 0], self.edges_arr[i, 1]),
                            Point(self.edges_arr[i, 2], self.edges_arr[i, 3]))
                    for i in idx]
            self._near_edges.append(segs)
            self._near_polys.append(
                [k for k, p in enumerate(self.obstacles)
                 if any(dist(c, v) <= 2.0 * CLEARANCE + 1e-6 for v in p.vertices)
                 or point_in_polygon(c, p)])
        self._build_static()

    # -- candidate validation ------------------------------------------------

    def _validate_segments(self, quads: np.ndarray) -> np.ndarray:
        """Mask of candidate segments (K,4) clear of every obstacle."""
        if len(quads) == 0:
            return np.zeros(0, dtype=bool)
        if len(self.edges_arr) == 0:
            return np.ones(len(quads), dtype=bool)
        clear = kernels.segs_min_clearance_batch(quads, self.edges_arr)
        ok = clear >= CLEARANCE - CLEAR_TOL
        if ok.any():
            mids = np.column_stack(((quads[:, 0] + quads[:, 2]) * 0.5,
                                    (quads[:, 1] + quads[:, 3]) * 0.5))
            inside = np.zeros(len(quads), dtype=bool)
            for verts in self._poly_verts:
                inside |= kernels.points_in_polygon_batch(mids, verts)
            ok &= ~inside
        return ok

    def _arc_clear(self, ci: int, a0: float, a1: float) -> bool:
        """Exact clearance test for the ccw arc from a0 to a1 on circle ci."""
        if round(normalize_angle(a1 - a0), ANGLE_KEY) == 0.0:
            return False
        arc = make_arc(self.centers[ci], CLEARANCE, a0, a1, ccw=True)
        for seg in self._near_edges[ci]:
            if seg_arc_distance(seg, arc) < CLEARANCE - CLEAR_TOL:
                return False
        mid = arc.point_at(0.5 * arc.extent)
        for k in self._near_polys[ci]:
            if point_in_polygon(mid, self.obstacles[k]):
                return False
        return True

    # -- static construction ---------------------------------------------------

    def _build_static(self) -> None:
        P = len(self.centers)
        cand: list[tuple[int, float, int, float]] = []
        quads: list[tuple[float, float, float, float]] = []
        for i in range(P):
            ci = self.centers[i]
            for j in range(i + 1, P):
                cj = self.centers[j]
                d = dist(ci, cj)
                if d <= EPS:
                    continue
                ux, uy = (cj.x - ci.x) / d, (cj.y - ci.y) / d
                # Outer bitangents: both tangent points on the same side.
                for sgn in (1.0, -1.0):
                    nx, ny = -uy * sgn, ux * sgn
                    a = math.atan2(ny, nx)
                    cand.append((i, a, j, a))
                    quads.append((ci.x + nx, ci.y + ny, cj.x + nx, cj.y + ny))
                # Inner bitangents cross the center line; need d > 2.
                if d > 2.0 * CLEARANCE + 1e-12:
                    beta = math.acos(2.0 * CLEARANCE / d)
                    base = math.atan2(uy, ux)
                    for sgn in (1.0, -1.0):
                        a = base + sgn * beta
                        wx, wy = math.cos(a), math.sin(a)
                        cand.append((i, a, j, normalize_angle(a + math.pi)))
                        quads.append((ci.x + wx, ci.y + wy,
                                      cj.x - wx, cj.y - wy))
        ok = self._validate_segments(np.asarray(quads, dtype=np.float64)
                                     if quads else np.zeros((0, 4)))

        # Tangent points per circle, deduped by quantized angle.
        self._points: list[list[float]] = [[] for _ in range(P)]
        self._point_ids: list[dict[float, int]] = [{} for _ in range(P)]
        self._node_pos: list[Point] = []
        self._node_circle: list[tuple[int, float]] = []
        seg_edges: list[tuple[int, int, float]] = []
        for keep, (i, ai, j, aj), q in zip(ok, cand, quads):
            if not keep:
                continue
            u = self._intern_point(i, ai)
            v = self._intern_point(j, aj)
            seg_edges.append((u, v, math.hypot(q[2] - q[0], q[3] - q[1])))

        self._adj: list[list[_Edge]] = [[] for _ in self._node_pos]
        for u, v, ln in seg_edges:
            self._adj[u].append(_Edge(v, ln, None))
            self._adj[v].append(_Edge(u, ln, None))

        # Arc edges between angularly consecutive static points; remember
        # validity per gap so queries can split valid gaps without rechecking.
        self._gap_valid: list[dict[float, bool]] = [{} for _ in range(P)]
        for ci in range(P):
            pts = self._points[ci]
            if len(pts) < 2:
                continue
            for k, a0 in enumerate(pts):
                a1 = pts[(k + 1) % len(pts)]
                valid = self._arc_clear(ci, a0, a1)
                self._gap_valid[ci][round(a0, ANGLE_KEY)] = valid
                if valid:
                    self._add_arc_edge(self._adj, ci, a0, a1)

    def _intern_point(self, ci: int, angle: float) -> int:
        a = normalize_angle(angle)
        key = round(a, ANGLE_KEY)
        if key == round(TWO_PI, ANGLE_KEY):
            a, key = 0.0, 0.0
        ids = self._point_ids[ci]
        if key in ids:
            return ids[key]
        nid = len(self._node_pos)
        ids[key] = nid
        c = self.centers[ci]
        self._node_pos.append(Point(c.x + CLEARANCE * math.cos(a),
                                    c.y + CLEARANCE * math.sin(a)))
        self._node_circle.append((ci, a))
        insort(self._points[ci], a)
        return nid

    def _add_arc_edge(self, adj, ci: int, a0: float, a1: float) -> None:
        u = self._point_ids[ci][round(a0, ANGLE_KEY)]
        v = self._point_ids[ci][round(a1, ANGLE_KEY)]
        extent = normalize_angle(a1 - a0)
        ln = CLEARANCE * extent
        adj[u].append(_Edge(v, ln, (ci, a0, a1, True)))
        adj[v].append(_Edge(u, ln, (ci, a1, a0, False)))

    # -- queries ----------------------------------------------------------------

    def clearance_of(self, p: Point) -> float:
        if len(self.edges_arr) == 0:
            return math.inf
        for poly, verts in zip(self.obstacles, self._poly_verts):
            if point_in_polygon(p, poly):
                return 0.0
        d = kernels.point_dist_to_segs(p.x, p.y, self.edges_arr)
        return float(d.min())

    def shortest_path(self, s: Point, t: Point) -> Polycurve:
        if self.clearance_of(s) < CLEARANCE - CLEAR_TOL:
            raise StartBlocked(f"start {s} has clearance < 1")
        if self.clearance_of(t) < CLEARANCE - CLEAR_TOL:
            raise TargetBlocked(f"target {t} has clearance < 1")

        P = len(self.centers)
        n_static = len(self._node_pos)
        pos = list(self._node_pos)
        s_id, t_id = n_static, n_static + 1
        pos.append(s)
        pos.append(t)
        extra_points: list[list[float]] = [[] for _ in range(P)]
        extra_adj: dict[int, list[_Edge]] = {s_id: [], t_id: []}
        node_circle = list(self._node_circle)
        point_ids = [dict(d) for d in self._point_ids]

        def intern(ci: int, angle: float) -> int:
            a = normalize_angle(angle)
            key = round(a, ANGLE_KEY)
            if key == round(TWO_PI, ANGLE_KEY):
                a, key = 0.0, 0.0
            if key in point_ids[ci]:
                return point_ids[ci][key]
            nid = len(pos)
            point_ids[ci][key] = nid
            c = self.centers[ci]
            pos.append(Point(c.x + CLEARANCE * math.cos(a),
                             c.y + CLEARANCE * math.sin(a)))
            node_circle.append((ci, a))
            insort(extra_points[ci], a)
            extra_adj.setdefault(nid, [])
            return nid

        # Endpoint tangents to every circle, plus the direct segment.
        cand: list[tuple[int, int, float]] = []  # (endpoint id, circle, angle)
        quads: list[tuple[float, float, float, float]] = []
        for eid, p in ((s_id, s), (t_id, t)):
            for ci, c in enumerate(self.centers):
                d = dist(p, c)
                if d <= CLEARANCE + 1e-12:
                    continue
                base = math.atan2(p.y - c.y, p.x - c.x)
                beta = math.acos(CLEARANCE / d)
                for sgn in (1.0, -1.0):
                    a = base + sgn * beta
                    cand.append((eid, ci, a))
                    quads.append((p.x, p.y,
                                  c.x + CLEARANCE * math.cos(a),
                                  c.y + CLEARANCE * math.sin(a)))
        cand.append((s_id, -1, 0.0))
        quads.append((s.x, s.y, t.x, t.y))
        ok = self._validate_segments(np.asarray(quads, dtype=np.float64))

        def link(u: int, v: int, ln: float,
                 arc: tuple[int, float, float, bool] | None) -> None:
            extra_adj.setdefault(u, []).append(_Edge(v, ln, arc))
            extra_adj.setdefault(v, []).append(_Edge(u, ln, arc if arc is None
                                                     else (arc[0], arc[2], arc[1],
                                                           not arc[3])))

        for keep, (eid, ci, a), q in zip(ok, cand, quads):
            if not keep:
                continue
            if ci < 0:
                link(s_id, t_id, dist(s, t), None)
                continue
            v = intern(ci, a)
            link(eid, v, math.hypot(q[2] - q[0], q[3] - q[1]), None)

        # Arc edges around new tangent points. A new point splits a static
        # gap; sub-arcs of a valid gap are valid, anything else is rechecked.
        for ci in range(P):
            news = extra_points[ci]
            if not news:
                continue
            statics = self._points[ci]
            news_set = set(news)
            allpts = sorted(set(statics) | news_set)
            if len(allpts) < 2:
                continue
            for k, a0 in enumerate(allpts):
                a1 = allpts[(k + 1) % len(allpts)]
                if a0 not in news_set and a1 not in news_set:
                    continue  # purely static gap, handled in _build_static
                valid = False
                if statics:
                    idx = bisect_right(statics, a0) - 1
                    host = statics[idx] if idx >= 0 else statics[-1]
                    valid = self._gap_valid[ci].get(round(host, ANGLE_KEY), False)
                if not valid:
                    valid = self._arc_clear(ci, a0, a1)
                if valid:
                    u = point_ids[ci][round(a0, ANGLE_KEY)]
                    v = point_ids[ci][round(a1, ANGLE_KEY)]
                    ln = CLEARANCE * normalize_angle(a1 - a0)
                    extra_adj.setdefault(u, []).append(
                        _Edge(v, ln, (ci, a0, a1, True)))
                    extra_adj.setdefault(v, []).append(
                        _Edge(u, ln, (ci, a1, a0, False)))

        # Dijkstra. Heap order (distance, node id) and sorted adjacency make
        # the chosen path deterministic; strict relaxation avoids pred cycles.
        n_all = len(pos)
        dist_arr = [math.inf] * n_all
        pred: list[tuple[int, _Edge] | None] = [None] * n_all
        dist_arr[s_id] = 0.0
        heap: list[tuple[float, int]] = [(0.0, s_id)]
        done = [False] * n_all
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if u == t_id:
                break
            neighbors = list(self._adj[u]) if u < n_static else []
            neighbors += extra_adj.get(u, [])
            neighbors.sort(key=lambda e: e.other)
            for e in neighbors:
                nd = d + e.length
                v = e.other
                if nd < dist_arr[v]:
                    dist_arr[v] = nd
                    pred[v] = (u, e)
                    heapq.heappush(heap, (nd, v))
        if not done[t_id]:
            raise NoPath(f"no free path from {s} to {t}")

        # Reconstruct node chain, then emit pieces.
        chain: list[tuple[int, _Edge | None]] = []
        cur = t_id
        while cur != s_id:
            u, e = pred[cur]
            chain.append((cur, e))
            cur = u
        chain.reverse()
        pieces = []
        prev = s_id
        for v, e in chain:
            if e.arc is None:
                if e.length > EPS:
                    pieces.append(Segment(pos[prev], pos[v]))
            else:
                ci, a_from, a_to, ccw = e.arc
                ext = normalize_angle(a_to - a_from) if ccw \
                    else normalize_angle(a_from - a_to)
                if CLEARANCE * ext > EPS:
                    pieces.append(make_arc(self.centers[ci], CLEARANCE,
                                           a_from, a_to, ccw))
            prev = v
        if not pieces:
            pieces.append(Segment(s, t))
        return Polycurve(pieces)


def plan_shortest_path(s: Point, t: Point,
                       obstacles: Sequence[Polygon]) -> Polycurve:
    """Shortest free path of a unit disc's center from s to t."""
    return TangentGraph(obstacles).shortest_path(s, t)
