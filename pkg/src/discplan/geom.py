"""Planar geometry primitives: points, segments, circular arcs, polygons, polycurves.

All tolerances derive from EPS (1e-9). Angles are normalized to [0, 2*pi) and
arcs carry an explicit orientation flag. Distance helpers treat polygons as
closed solid obstacles: a point inside a polygon has distance 0 to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import DegenerateInput

EPS = 1e-9
TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


def dist(p: Point, q: Point) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def norm(x: float, y: float) -> float:
    return math.hypot(x, y)


def cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def normalize_angle(a: float) -> float:
    """Map any angle into [0, 2*pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


class Segment(NamedTuple):
    a: Point
    b: Point

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    def point_at(self, t: float) -> Point:
        return Point(self.a.x + (self.b.x - self.a.x) * t,
                     self.a.y + (self.b.y - self.a.y) * t)

    def start(self) -> Point:
        return self.a

    def end(self) -> Point:
        return self.b


def make_segment(a: Point, b: Point) -> Segment:
    if dist(a, b) <= EPS:
        raise DegenerateInput(f"segment endpoints coincide: {a} {b}")
    return Segment(a, b)


@dataclass(frozen=True)
class CircArc:
    """Arc of a circle; a0 is the start angle, traversal covers `extent` radians
    counterclockwise when ccw else clockwise. extent lies in (0, 2*pi]."""

    center: Point
    radius: float
    a0: float
    extent: float
    ccw: bool

    def __post_init__(self):
        if self.radius <= EPS:
            raise DegenerateInput(f"arc radius {self.radius} below tolerance")
        if not (0.0 < self.extent <= TWO_PI + EPS):
            raise DegenerateInput(f"arc extent {self.extent} outside (0, 2*pi]")

    @property
    def a1(self) -> float:
        """End angle, normalized."""
        sign = 1.0 if self.ccw else -1.0
        return normalize_angle(self.a0 + sign * self.extent)

    @property
    def length(self) -> float:
        return self.radius * self.extent

    def angle_at(self, t: float) -> float:
        sign = 1.0 if self.ccw else -1.0
        return self.a0 + sign * self.extent * t

    def point_at(self, t: float) -> Point:
        a = self.angle_at(t)
        return Point(self.center.x + self.radius * math.cos(a),
                     self.center.y + self.radius * math.sin(a))

    def start(self) -> Point:
        return self.point_at(0.0)

    def end(self) -> Point:
        return self.point_at(1.0)

    def param_of_angle(self, theta: float) -> float | None:
        """Parameter in [0,1] where the arc passes angle theta, None if outside span.

        Tolerant by an angular EPS at both ends.
        """
        if self.ccw:
            d = normalize_angle(theta - self.a0)
        else:
            d = normalize_angle(self.a0 - theta)
        if d <= self.extent + EPS:
            return min(max(d / self.extent, 0.0), 1.0)
        # Angles within EPS below a full turn alias the arc start.
        if d >= TWO_PI - EPS:
            return 0.0
        return None


def make_arc(center: Point, radius: float, a0: float, a1: float, ccw: bool) -> CircArc:
    """Arc from angle a0 to a1 in the given orientation; equal angles mean a full circle."""
    a0n = normalize_angle(a0)
    a1n = normalize_angle(a1)
    if ccw:
        extent = normalize_angle(a1n - a0n)
    else:
        extent = normalize_angle(a0n - a1n)
    if extent <= 0.0:
        extent = TWO_PI
    return CircArc(center, radius, a0n, extent, ccw)


Piece = Union[Segment, CircArc]


def piece_point_at(piece: Piece, t: float) -> Point:
    return piece.point_at(t)


def piece_length(piece: Piece) -> float:
    return piece.length


def sub_piece(piece: Piece, t0: float, t1: float) -> Piece:
    """Restriction of a piece to the parameter window [t0, t1], t0 < t1."""
    if t1 - t0 <= 0.0:
        raise DegenerateInput(f"empty sub-piece window [{t0}, {t1}]")
    if isinstance(piece, Segment):
        return Segment(piece.point_at(t0), piece.point_at(t1))
    a0 = piece.angle_at(t0)
    return CircArc(piece.center, piece.radius, normalize_angle(a0),
                   piece.extent * (t1 - t0), piece.ccw)


class Polycurve:
    """Continuous chain of segments and arcs.

    Global parameter u runs over [0, n] with n pieces; u = k + t addresses
    parameter t of piece k. Arc length is available separately.
    """

    def __init__(self, pieces: list[Piece]):
        if not pieces:
            raise DegenerateInput("polycurve needs at least one piece")
        for prev, nxt in zip(pieces, pieces[1:]):
            gap = dist(prev.end(), nxt.start())
            if gap > EPS:
                raise DegenerateInput(f"polycurve discontinuity {gap:g}")
        self.pieces = list(pieces)
        self.lengths = [piece_length(p) for p in self.pieces]
        self.total_length = sum(self.lengths)

    def __len__(self) -> int:
        return len(self.pieces)

    def start(self) -> Point:
        return self.pieces[0].start()

    def end(self) -> Point:
        return self.pieces[-1].end()

    def point_at(self, u: float) -> Point:
        k, t = self.split_param(u)
        return self.pieces[k].point_at(t)

    def split_param(self, u: float) -> tuple[int, float]:
        n = len(self.pieces)
        if u <= 0.0:
            return 0, 0.0
        if u >= n:
            return n - 1, 1.0
        k = int(math.floor(u))
        return k, u - k

    def slice(self, u0: float, u1: float) -> "Polycurve":
        """Sub-curve over global parameters [u0, u1], u0 < u1."""
        k0, t0 = self.split_param(u0)
        k1, t1 = self.split_param(u1)
        pieces: list[Piece] = []
        for k in range(k0, k1 + 1):
            lo = t0 if k == k0 else 0.0
            hi = t1 if k == k1 else 1.0
            if hi - lo <= EPS / max(1.0, self.lengths[k]):
                continue
            pieces.append(sub_piece(self.pieces[k], lo, hi))
        if not pieces:
            raise DegenerateInput(f"empty slice [{u0}, {u1}]")
        return Polycurve(pieces)


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, vertices in counterclockwise order."""

    vertices: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Segment]:
        v = self.vertices
        return [Segment(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    @property
    def area(self) -> float:
        v = self.vertices
        s = 0.0
        for i in range(len(v)):
            j = (i + 1) % len(v)
            s += v[i].x * v[j].y - v[j].x * v[i].y
        return 0.5 * s


def make_polygon(vertices: list[Point] | tuple[Point, ...]) -> Polygon:
    """Validate and build a polygon; reverses input given clockwise.

    Raises DegenerateInput on fewer than 3 vertices, near-zero area, repeated
    consecutive vertices, or self-intersection.
    """
    verts = [Point(float(p[0]), float(p[1])) for p in vertices]
    if len(verts) < 3:
        raise DegenerateInput("polygon needs at least 3 vertices")
    for p, q in zip(verts, verts[1:] + verts[:1]):
        if dist(p, q) <= EPS:
            raise DegenerateInput(f"repeated polygon vertex {p}")
    poly = Polygon(tuple(verts))
    if abs(poly.area) <= EPS:
        raise DegenerateInput("polygon area below tolerance")
    if poly.area < 0.0:
        poly = Polygon(tuple(reversed(verts)))
    _check_simple(poly)
    return poly


def _check_simple(poly: Polygon) -> None:
    edges = poly.edges()
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j == i + 1) or (i == 0 and j == n - 1):
                continue
            if seg_seg_distance(edges[i], edges[j]) <= EPS:
                raise DegenerateInput(f"polygon self-intersection near edges {i},{j}")


# ---- scalar distance predicates ----

def dist_point_segment(p: Point, seg: Segment) -> float:
    ax, ay = seg.a
    bx, by = seg.b
    vx, vy = bx - ax, by - ay
    wx, wy = p.x - ax, p.y - ay
    vv = vx * vx + vy * vy
    if vv <= EPS * EPS:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / vv
    t = min(1.0, max(0.0, t))
    return math.hypot(wx - t * vx, wy - t * vy)


def _segments_properly_intersect(s1: Segment, s2: Segment) -> bool:
    d1 = cross(s1.b.x - s1.a.x, s1.b.y - s1.a.y, s2.a.x - s1.a.x, s2.a.y - s1.a.y)
    d2 = cross(s1.b.x - s1.a.x, s1.b.y - s1.a.y, s2.b.x - s1.a.x, s2.b.y - s1.a.y)
    d3 = cross(s2.b.x - s2.a.x, s2.b.y - s2.a.y, s1.a.x - s2.a.x, s1.a.y - s2.a.y)
    d4 = cross(s2.b.x - s2.a.x, s2.b.y - s2.a.y, s1.b.x - s2.a.x, s1.b.y - s2.a.y)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def seg_seg_distance(s1: Segment, s2: Segment) -> float:
    if _segments_properly_intersect(s1, s2):
        return 0.0
    return min(dist_point_segment(s1.a, s2), dist_point_segment(s1.b, s2),
               dist_point_segment(s2.a, s1), dist_point_segment(s2.b, s1))


def point_in_polygon(p: Point, poly: Polygon) -> bool:
    """Even-odd rule; boundary points count as inside within float noise."""
    inside = False
    v = poly.vertices
    n = len(v)
    px, py = p
    for i in range(n):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            xc = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xc:
                inside = not inside
    return inside


def dist_point_polygon(p: Point, poly: Polygon) -> float:
    """Distance to the solid polygon: 0 inside, else distance to the boundary."""
    d = min(dist_point_segment(p, e) for e in poly.edges())
    if d > EPS and point_in_polygon(p, poly):
        return 0.0
    return d


def dist_point_arc(p: Point, arc: CircArc) -> float:
    dx, dy = p.x - arc.center.x, p.y - arc.center.y
    r = math.hypot(dx, dy)
    if r <= EPS:
        return arc.radius
    if arc.param_of_angle(math.atan2(dy, dx)) is not None:
        return abs(r - arc.radius)
    return min(dist(p, arc.start()), dist(p, arc.end()))


def dist_point_piece(p: Point, piece: Piece) -> float:
    if isinstance(piece, Segment):
        return dist_point_segment(p, piece)
    return dist_point_arc(p, piece)


def dist_point_polycurve(p: Point, curve: Polycurve) -> float:
    return min(dist_point_piece(p, piece) for piece in curve.pieces)


def segment_circle_params(seg: Segment, center: Point, radius: float) -> list[float]:
    """Parameters in [0,1] where the segment transversally crosses the circle.

    Tangential (grazing) contact yields nothing: the signed distance to the
    circle does not change sign there.
    """
    ax, ay = seg.a.x - center.x, seg.a.y - center.y
    vx, vy = seg.b.x - seg.a.x, seg.b.y - seg.a.y
    vv = vx * vx + vy * vy
    if vv <= EPS * EPS:
        return []
    seg_len = math.sqrt(vv)
    # Grazing test against the supporting line, scaled to absolute distance.
    d_line = abs(cross(vx, vy, ax, ay)) / seg_len
    if abs(d_line - radius) <= EPS:
        return []
    b = ax * vx + ay * vy
    c = ax * ax + ay * ay - radius * radius
    disc = b * b - vv * c
    if disc <= 0.0:
        return []
    root = math.sqrt(disc)
    ts = sorted(((-b - root) / vv, (-b + root) / vv))
    tol = EPS / seg_len
    out = []
    for t in ts:
        if -tol <= t <= 1.0 + tol:
            out.append(min(1.0, max(0.0, t)))
    return out


class CircleHits(NamedTuple):
    points: list[Point]
    tangent: bool


def circle_circle_intersect(c1: Point, r1: float, c2: Point, r2: float) -> CircleHits:
    """Intersection points of two circles; a single tangency is flagged degenerate.

    Concentric circles (equal or not) yield no points.
    """
    d = dist(c1, c2)
    if d <= EPS:
        return CircleHits([], False)
    ux, uy = (c2.x - c1.x) / d, (c2.y - c1.y) / d
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    base = Point(c1.x + a * ux, c1.y + a * uy)
    if abs(d - (r1 + r2)) <= EPS or abs(d - abs(r1 - r2)) <= EPS:
        return CircleHits([base], True)
    if d > r1 + r2 or d < abs(r1 - r2):
        return CircleHits([], False)
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    p1 = Point(base.x - h * uy, base.y + h * ux)
    p2 = Point(base.x + h * uy, base.y - h * ux)
    return CircleHits([p1, p2], False)


def piece_circle_intersect(piece: Piece, center: Point, radius: float) -> list[tuple[Point, float]]:
    """Transversal intersections of a piece with a circle, sorted by piece parameter.

    Grazing contacts are excluded. An arc lying on the circle itself (same
    center and radius) yields nothing; callers never build such chains here.
    """
    if isinstance(piece, Segment):
        ts = segment_circle_params(piece, center, radius)
        return [(piece.point_at(t), t) for t in ts]
    hits = circle_circle_intersect(piece.center, piece.radius, center, radius)
    if hits.tangent or not hits.points:
        return []
    out = []
    for p in hits.points:
        theta = math.atan2(p.y - piece.center.y, p.x - piece.center.x)
        t = piece.param_of_angle(theta)
        if t is not None:
            out.append((p, t))
    out.sort(key=lambda pt: pt[1])
    return out


# ---- segment/arc exact clearance ----

def seg_arc_distance(seg: Segment, arc: CircArc) -> float:
    """Exact distance between a segment and an arc (0 if they intersect)."""
    for p, _t in piece_circle_intersect(seg, arc.center, arc.radius):
        theta = math.atan2(p.y - arc.center.y, p.x - arc.center.x)
        if arc.param_of_angle(theta) is not None:
            return 0.0
    cands = [dist_point_segment(arc.start(), seg), dist_point_segment(arc.end(), seg),
             dist_point_arc(seg.a, arc), dist_point_arc(seg.b, arc)]
    # Interior critical point: foot of the perpendicular from the arc center.
    ax, ay = seg.a
    vx, vy = seg.b.x - ax, seg.b.y - ay
    vv = vx * vx + vy * vy
    if vv > EPS * EPS:
        t = ((arc.center.x - ax) * vx + (arc.center.y - ay) * vy) / vv
        if 0.0 < t < 1.0:
            foot = seg.point_at(t)
            cands.append(dist_point_arc(foot, arc))
    return min(cands)


def piece_polygon_clearance(piece: Piece, poly: Polygon) -> float:
    """Distance from a piece to a solid polygon: 0 when it touches or enters."""
    if isinstance(piece, Segment):
        d = min(seg_seg_distance(piece, e) for e in poly.edges())
    else:
        d = min(seg_arc_distance(e, piece) for e in poly.edges())
    if d > EPS:
        mid = piece.point_at(0.5)
        if point_in_polygon(mid, poly):
            return 0.0
    return d


# ---- polygon inflation (Minkowski sum with a disc) ----

@dataclass(frozen=True)
class InflatedObstacle:
    """Polygon grown by a disc radius; boundary is a closed polycurve."""

    polygon: Polygon
    radius: float
    boundary: Polycurve


def inflate_polygon(poly: Polygon, radius: float) -> InflatedObstacle:
    """Minkowski sum boundary of a polygon with a disc of the given radius.

    Convex vertices become counterclockwise arcs; at reflex vertices the two
    offset segments are trimmed to their intersection (no arc). Local joins
    only: features narrower than 2*radius may self-overlap, which downstream
    code tolerates because all free-space tests use distance semantics.
    """
    if radius <= EPS:
        raise DegenerateInput(f"inflation radius {radius} below tolerance")
    verts = poly.vertices
    n = len(verts)
    # Outward normal of a CCW edge (a -> b) points right of the direction.
    seg_start: list[Point] = []
    seg_end: list[Point] = []
    normals: list[tuple[float, float]] = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        nxo, nyo = dy / ln, -dx / ln
        normals.append((nxo, nyo))
        seg_start.append(Point(a.x + radius * nxo, a.y + radius * nyo))
        seg_end.append(Point(b.x + radius * nxo, b.y + radius * nyo))
    # Joint after edge i sits at vertex (i+1): arc when convex, miter trim when reflex.
    joint_arc: list[CircArc | None] = [None] * n
    for i in range(n):
        j = (i + 1) % n
        v = verts[j]
        e_i = (v.x - verts[i].x, v.y - verts[i].y)
        e_j = (verts[(j + 1) % n].x - v.x, verts[(j + 1) % n].y - v.y)
        turn = cross(e_i[0], e_i[1], e_j[0], e_j[1])
        if turn > EPS:
            a0 = math.atan2(normals[i][1], normals[i][0])
            a1 = math.atan2(normals[j][1], normals[j][0])
            ext = normalize_angle(a1 - a0)
            if ext > EPS:
                joint_arc[i] = CircArc(v, radius, normalize_angle(a0), ext, True)
        elif turn < -EPS:
            m = _line_intersection(seg_start[i], seg_end[i], seg_start[j], seg_end[j])
            seg_end[i] = m
            seg_start[j] = m
    boundary: list[Piece] = []
    for i in range(n):
        if dist(seg_start[i], seg_end[i]) > EPS:
            boundary.append(Segment(seg_start[i], seg_end[i]))
        if joint_arc[i] is not None:
            boundary.append(joint_arc[i])
    curve = Polycurve(boundary)
    if dist(curve.end(), curve.start()) > EPS:
        raise DegenerateInput("inflated boundary failed to close")
    return InflatedObstacle(poly, radius, curve)


def _line_intersection(a1: Point, a2: Point, b1: Point, b2: Point) -> Point:
    d1x, d1y = a2.x - a1.x, a2.y - a1.y
    d2x, d2y = b2.x - b1.x, b2.y - b1.y
    den = cross(d1x, d1y, d2x, d2y)
    if abs(den) <= EPS:
        # Parallel offsets (collinear edges); fall back to the shared point.
        return a2
    t = cross(b1.x - a1.x, b1.y - a1.y, d2x, d2y) / den
    return Point(a1.x + t * d1x, a1.y + t * d1y)
