"""Scenario model, text file format, and instance generators.

A scenario is a set of polygonal obstacles plus m start and m target
positions for unit-disc robots. Generators cover four families: a grid of
start/target blocks in a walled room, random triangles in the open plane,
a serpentine tunnel room forcing robots through shared narrow corridors,
and an adversarial two-robot instance whose obstacle rings force crossing
counts to grow with the obstacle complexity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from . import revolve
from .errors import (CapacityError, ParseError, SamplingExhausted,
                     ValidationError)
from .geom import EPS, Point, Polygon, dist, dist_point_polygon, make_polygon

ROBOT_RADIUS = 1.0
FORMAT_VERSION = 1


@dataclass(frozen=True)
class Scenario:
    name: str
    obstacles: tuple[Polygon, ...]
    starts: tuple[Point, ...]
    targets: tuple[Point, ...]

    @property
    def m(self) -> int:
        return len(self.starts)

    @property
    def vertex_count(self) -> int:
        return sum(len(p.vertices) for p in self.obstacles)


def make_scenario(name: str, obstacles: Iterable[Polygon],
                  starts: Iterable[Point], targets: Iterable[Point]) -> Scenario:
    """Validate and freeze a scenario.

    Invariants: at least one robot, equal start/target counts, all positions
    pairwise distinct and at clearance >= 1 from every obstacle.
    """
    obs = tuple(obstacles)
    st = tuple(Point(float(p[0]), float(p[1])) for p in starts)
    tg = tuple(Point(float(p[0]), float(p[1])) for p in targets)
    if not st:
        raise ValidationError("scenario needs at least one robot")
    if len(st) != len(tg):
        raise ValidationError(
            f"start/target count mismatch: {len(st)} vs {len(tg)}")
    positions = list(st) + list(tg)
    labels = [f"start[{i}]" for i in range(len(st))] + \
             [f"target[{i}]" for i in range(len(tg))]
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            if dist(positions[i], positions[j]) <= EPS:
                raise ValidationError(
                    f"{labels[i]} and {labels[j]} coincide at {positions[i]}")
    for lab, p in zip(labels, positions):
        for k, poly in enumerate(obs):
            d = dist_point_polygon(p, poly)
            if d < ROBOT_RADIUS - EPS:
                raise ValidationError(
                    f"{lab}={p} at distance {d:.6g} < 1 from obstacle {k}")
    return Scenario(name, obs, st, tg)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------
#
# Whitespace-separated records, one per line; blank lines and lines starting
# with '#' are skipped. Floats are written with %.17g so load(save(x)) == x.
#
#   version 1
#   name <token>
#   obstacles <count>
#   polygon <k> <x0> <y0> ... <x{k-1}> <y{k-1}>     (repeated <count> times)
#   starts <m>
#   point <x> <y>                                   (repeated <m> times)
#   targets <m>
#   point <x> <y>                                   (repeated <m> times)

def _fmt(x: float) -> str:
    return "%.17g" % x


def save_scenario(sc: Scenario, fp: TextIO) -> None:
    fp.write(f"version {FORMAT_VERSION}\n")
    fp.write(f"name {sc.name}\n")
    fp.write(f"obstacles {len(sc.obstacles)}\n")
    for poly in sc.obstacles:
        coords = " ".join(f"{_fmt(v.x)} {_fmt(v.y)}" for v in poly.vertices)
        fp.write(f"polygon {len(poly.vertices)} {coords}\n")
    fp.write(f"starts {sc.m}\n")
    for p in sc.starts:
        fp.write(f"point {_fmt(p.x)} {_fmt(p.y)}\n")
    fp.write(f"targets {sc.m}\n")
    for p in sc.targets:
        fp.write(f"point {_fmt(p.x)} {_fmt(p.y)}\n")


def save_scenario_path(sc: Scenario, path: str) -> None:
    with open(path, "w", encoding="ascii") as fp:
        save_scenario(sc, fp)


class _Lines:
    """Token stream over non-comment lines, tracking line numbers for errors."""

    def __init__(self, fp: TextIO):
        self.rows: list[tuple[int, list[str]]] = []
        for lineno, raw in enumerate(fp, start=1):
            txt = raw.strip()
            if not txt or txt.startswith("#"):
                continue
            self.rows.append((lineno, txt.split()))
        self.pos = 0

    def next(self, keyword: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.rows):
            raise ParseError(f"unexpected end of file, expected '{keyword}'")
        lineno, toks = self.rows[self.pos]
        self.pos += 1
        if toks[0] != keyword:
            raise ParseError(f"line {lineno}: expected '{keyword}', got '{toks[0]}'")
        return lineno, toks[1:]

    def next_any(self) -> tuple[int, list[str]]:
        if self.pos >= len(self.rows):
            raise ParseError("unexpected end of file")
        lineno, toks = self.rows[self.pos]
        self.pos += 1
        return lineno, toks


def _ints(lineno: int, toks: list[str], n: int) -> list[int]:
    if len(toks) != n:
        raise ParseError(f"line {lineno}: expected {n} field(s), got {len(toks)}")
    try:
        return [int(t) for t in toks]
    except ValueError as e:
        raise ParseError(f"line {lineno}: bad integer: {e}") from None


def _floats(lineno: int, toks: list[str], n: int) -> list[float]:
    if len(toks) != n:
        raise ParseError(f"line {lineno}: expected {n} field(s), got {len(toks)}")
    try:
        vals = [float(t) for t in toks]
    except ValueError as e:
        raise ParseError(f"line {lineno}: bad float: {e}") from None
    for v in vals:
        if not math.isfinite(v):
            raise ParseError(f"line {lineno}: non-finite coordinate {v}")
    return vals


def load_scenario(fp: TextIO) -> Scenario:
    lines = _Lines(fp)
    lineno, toks = lines.next("version")
    (ver,) = _ints(lineno, toks, 1)
    if ver != FORMAT_VERSION:
        raise ParseError(f"line {lineno}: unsupported version {ver}")
    lineno, toks = lines.next("name")
    if len(toks) != 1:
        raise ParseError(f"line {lineno}: name must be a single token")
    name = toks[0]

    lineno, toks = lines.next("obstacles")
    (n_obs,) = _ints(lineno, toks, 1)
    if n_obs < 0:
        raise ParseError(f"line {lineno}: negative obstacle count")
    obstacles = []
    for _ in range(n_obs):
        lineno, toks = lines.next("polygon")
        if not toks:
            raise ParseError(f"line {lineno}: polygon needs a vertex count")
        (k,) = _ints(lineno, toks[:1], 1)
        if k < 3:
            raise ParseError(f"line {lineno}: polygon needs >= 3 vertices, got {k}")
        vals = _floats(lineno, toks[1:], 2 * k)
        verts = [Point(vals[2 * i], vals[2 * i + 1]) for i in range(k)]
        try:
            obstacles.append(make_polygon(verts))
        except Exception as e:
            raise ParseError(f"line {lineno}: bad polygon: {e}") from None

    def read_points(keyword: str) -> list[Point]:
        lineno, toks = lines.next(keyword)
        (count,) = _ints(lineno, toks, 1)
        if count < 0:
            raise ParseError(f"line {lineno}: negative {keyword} count")
        pts = []
        for _ in range(count):
            ln, tk = lines.next("point")
            x, y = _floats(ln, tk, 2)
            pts.append(Point(x, y))
        return pts

    starts = read_points("starts")
    targets = read_points("targets")
    if lines.pos != len(lines.rows):
        lineno = lines.rows[lines.pos][0]
        raise ParseError(f"line {lineno}: trailing content after targets")
    try:
        return make_scenario(name, obstacles, starts, targets)
    except ValidationError as e:
        raise ParseError(f"scenario invariants violated: {e}") from None


def load_scenario_path(path: str) -> Scenario:
    with open(path, "r", encoding="ascii") as fp:
        return load_scenario(fp)


# ---------------------------------------------------------------------------
# Generator: grid
# ---------------------------------------------------------------------------

def _rect(x0: float, y0: float, x1: float, y1: float) -> Polygon:
    return make_polygon([Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)])


def generate_grid(m: int, seed: int, *, spacing: float = 3.0,
                  cols: int | None = None, rows: int | None = None,
                  margin: float = 2.0, wall: float = 1.0,
                  name: str | None = None) -> Scenario:
    """Start block above, mirrored target block below, walled room around both.

    Targets are a seeded permutation of the lower-block slots. With explicit
    cols and rows, raises CapacityError when cols * rows < m.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    if cols is None:
        cols = math.ceil(math.sqrt(m))
    if cols < 1:
        raise ValidationError(f"need cols >= 1, got {cols}")
    need_rows = math.ceil(m / cols)
    if rows is None:
        rows = need_rows
    if cols * rows < m:
        raise CapacityError(f"grid {cols}x{rows} holds {cols * rows} < {m} robots")
    block_w = (cols - 1) * spacing
    block_h = (rows - 1) * spacing
    width = block_w + 2.0 * margin
    height = 2.0 * block_h + spacing + 2.0 * margin

    def slot(j: int, i: int, top: bool) -> Point:
        x = margin + i * spacing
        if top:
            return Point(x, height - margin - j * spacing)
        return Point(x, margin + block_h - j * spacing)

    starts = [slot(k // cols, k % cols, True) for k in range(m)]
    lower = [slot(k // cols, k % cols, False) for k in range(m)]
    rng = random.Random(seed)
    perm = list(range(m))
    rng.shuffle(perm)
    targets = [lower[perm[i]] for i in range(m)]

    walls = [
        _rect(-wall, -wall, width + wall, 0.0),
        _rect(-wall, height, width + wall, height + wall),
        _rect(-wall, -wall, 0.0, height + wall),
        _rect(width, -wall, width + wall, height + wall),
    ]
    return make_scenario(name or f"grid-m{m}-s{seed}", walls, starts, targets)


# ---------------------------------------------------------------------------
# Generator: random triangles
# ---------------------------------------------------------------------------

def generate_triangles(m: int, n_triangles: int, seed: int, *,
                       side: float = 100.0, max_tries: int = 10_000,
                       name: str | None = None) -> Scenario:
    """Random triangles in a side x side square, positions rejection-sampled.

    Every accepted position must admit a revolving area given the positions
    accepted so far, and must not break the area of any earlier neighbor
    (those within distance 5 are re-verified). Raises SamplingExhausted when
    the try budget runs out.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    rng = random.Random(seed)
    tries = max_tries

    obstacles: list[Polygon] = []
    while len(obstacles) < n_triangles:
        if tries <= 0:
            raise SamplingExhausted(
                f"placed {len(obstacles)}/{n_triangles} triangles in {max_tries} tries")
        tries -= 1
        cx = rng.uniform(4.0, side - 4.0)
        cy = rng.uniform(4.0, side - 4.0)
        radius = rng.uniform(1.0, 4.0)
        angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(3))
        verts = [Point(cx + radius * math.cos(a), cy + radius * math.sin(a))
                 for a in angles]
        area2 = abs((verts[1].x - verts[0].x) * (verts[2].y - verts[0].y)
                    - (verts[1].y - verts[0].y) * (verts[2].x - verts[0].x))
        if area2 < 0.5:
            continue
        obstacles.append(make_polygon(verts))

    accepted: list[Point] = []

    def admits_area(z: Point, others: list[Point]) -> bool:
        try:
            revolve.find_revolving_area(z, obstacles, others)
            return True
        except Exception:
            return False

    while len(accepted) < 2 * m:
        if tries <= 0:
            raise SamplingExhausted(
                f"placed {len(accepted)}/{2 * m} positions in {max_tries} tries")
        tries -= 1
        z = Point(rng.uniform(1.0, side - 1.0), rng.uniform(1.0, side - 1.0))
        if any(dist(z, p) < 3.0 for p in accepted):
            continue
        if any(dist_point_polygon(z, poly) < ROBOT_RADIUS for poly in obstacles):
            continue
        if not admits_area(z, accepted):
            continue
        # Adding z can strand a neighbor whose area relied on this space.
        nearby = [p for p in accepted if dist(p, z) <= 5.0]
        augmented = accepted + [z]
        ok = True
        for p in nearby:
            if not admits_area(p, [q for q in augmented if q is not p]):
                ok = False
                break
        if not ok:
            continue
        accepted.append(z)

    starts = accepted[:m]
    targets = accepted[m:]
    return make_scenario(name or f"tri-m{m}-k{n_triangles}-s{seed}",
                         obstacles, starts, targets)


# ---------------------------------------------------------------------------
# Generator: tunnel
# ---------------------------------------------------------------------------

WIDE_ARM = 4.2
NARROW_ARM = 2.2
BAFFLE = 1.0
TUNNEL_SPACING = 3.5
TUNNEL_MARGIN = 2.1
TURN_GAP = 2.2


def _bumpy_top_wall(width: float, n_bumps: int, notch: bool) -> Polygon:
    """Top wall rectangle with n_bumps outward bumps and an optional corner notch.

    Bumps and the notch sit on the outer face, away from the room interior,
    so they pad the vertex count without touching any robot's free space.
    Vertex count: 4 + 4 * n_bumps + 2 * notch.
    """
    hh = 0.0  # local y of inner face; caller translates
    verts = [Point(-BAFFLE, hh), Point(width + BAFFLE, hh)]
    if notch:
        verts.append(Point(width + BAFFLE, hh + 0.5))
        verts.append(Point(width + 0.5, hh + 0.5))
        verts.append(Point(width + 0.5, hh + 1.0))
    else:
        verts.append(Point(width + BAFFLE, hh + 1.0))
    x = -BAFFLE + 0.25
    bumps = []
    for _ in range(n_bumps):
        bumps.append((x, x + 0.5))
        x += 1.0
    for x0, x1 in reversed(bumps):
        verts.append(Point(x1, hh + 1.0))
        verts.append(Point(x1, hh + 1.5))
        verts.append(Point(x0, hh + 1.5))
        verts.append(Point(x0, hh + 1.0))
    verts.append(Point(-BAFFLE, hh + 1.0))
    return make_polygon(verts)


def generate_tunnel(m: int, version: str, *, name: str | None = None) -> Scenario:
    """Serpentine four-arm tunnel with m starts up top and m targets below.

    Robots enter the top arm, wind through two narrow middle arms, and park
    in the bottom arm. Version I assigns target i nearest the bottom arm's
    far (left) end for small i, so every robot must pass every smaller
    robot's target; version II reverses that order, which a good schedule
    can serve without any interference. Obstacle vertex count is exactly
    10 * m + 42 (outer-face bumps pad the top wall).
    """
    if m < 2:
        raise ValidationError(f"need m >= 2, got {m}")
    if version not in ("I", "II"):
        raise ValidationError(f"version must be 'I' or 'II', got {version!r}")
    width = TUNNEL_SPACING * m + 3.1
    height = 2.0 * WIDE_ARM + 2.0 * NARROW_ARM + 3.0 * BAFFLE

    if m % 2 == 0:
        notch = True
        n_bumps = (10 * m + 12) // 4
    else:
        notch = False
        n_bumps = (10 * m + 14) // 4

    top_wall = _bumpy_top_wall(width, n_bumps, notch)
    top_wall = make_polygon([Point(v.x, v.y + height) for v in top_wall.vertices])
    walls = [
        top_wall,
        _rect(-BAFFLE, -BAFFLE, width + BAFFLE, 0.0),
        _rect(-BAFFLE, -BAFFLE, 0.0, height + BAFFLE),
        _rect(width, -BAFFLE, width + BAFFLE, height + BAFFLE),
    ]
    y = height - WIDE_ARM
    baffles = [
        _rect(-0.5, y - BAFFLE, width - TURN_GAP, y),
        _rect(TURN_GAP, y - BAFFLE - NARROW_ARM - BAFFLE,
              width + 0.5, y - BAFFLE - NARROW_ARM),
        _rect(-0.5, WIDE_ARM, width - TURN_GAP, WIDE_ARM + BAFFLE),
    ]
    obstacles = walls + baffles
    total = sum(len(p.vertices) for p in obstacles)
    assert total == 10 * m + 42, f"vertex count {total} != {10 * m + 42}"

    y_top = height - WIDE_ARM / 2.0
    y_bot = WIDE_ARM / 2.0
    xs = [TUNNEL_MARGIN + TUNNEL_SPACING * i for i in range(m)]
    starts = [Point(x, y_top) for x in xs]
    if version == "I":
        targets = [Point(xs[i], y_bot) for i in range(m)]
    else:
        targets = [Point(xs[m - 1 - i], y_bot) for i in range(m)]
    return make_scenario(name or f"tunnel{version}-m{m}", obstacles,
                         starts, targets)


# ---------------------------------------------------------------------------
# Generator: adversarial two-robot rings
# ---------------------------------------------------------------------------

def ring_span_angle(n: int) -> float:
    """Angular step between consecutive ring obstacles for total count n."""
    half = n // 2
    if half < 2:
        return 0.92
    return min(0.92, (math.pi - 0.2) / (half - 1))


def generate_bad_input(n: int, *, name: str | None = None) -> Scenario:
    """Two robots whose swap is forced through interlocking obstacle half-rings.

    n tiny triangular obstacles (n even, >= 4) sit on two arcs of radius
    1 + sec(step/2), an upper arc around the first robot's start and a lower
    arc around the second robot's start. The angular step keeps consecutive
    inflated discs overlapping and the two arcs' tips interlocked, so each
    robot's only exit weaves over the other's arc, dipping in and out of the
    radius-3 neighborhood of the parked robot once per gap.
    """
    if n < 4 or n % 2 != 0:
        raise ValidationError(f"need even n >= 4, got {n}")
    half = n // 2
    step = ring_span_angle(n)
    radius = 1.0 + 1.0 / math.cos(step / 2.0)

    s_i, t_i = Point(4.0, 0.5), Point(12.0, 0.5)
    s_j, t_j = Point(8.0, 0.0), Point(0.0, 0.0)

    tri_r = 1e-3 / math.sqrt(3.0)

    def tiny_triangle(c: Point) -> Polygon:
        verts = [Point(c.x + tri_r * math.cos(a), c.y + tri_r * math.sin(a))
                 for a in (math.pi / 2, math.pi * 7 / 6, math.pi * 11 / 6)]
        return make_polygon(verts)

    def ring(center: Point, mid_angle: float) -> list[Polygon]:
        lo = mid_angle - step * (half - 1) / 2.0
        return [tiny_triangle(Point(center.x + radius * math.cos(lo + k * step),
                                    center.y + radius * math.sin(lo + k * step)))
                for k in range(half)]

    obstacles = ring(s_i, math.pi / 2.0) + ring(s_j, -math.pi / 2.0)
    return make_scenario(name or f"rings-n{n}", obstacles,
                         [s_i, s_j], [t_i, t_j])
