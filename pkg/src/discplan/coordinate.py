"""Coordination of one mover at a time against parked robots.

The pipeline per mover, given the execution order:

1. Path surgery: wherever the initial path cuts through the unit disc around
   an occupied revolving-area center, reroute along the geodesic arc of that
   disc's boundary between the first entrance and the last exit.
2. Scheduling: crossings of the radius-3 discs around occupied centers become
   dwell slots of width delta = 1/(piece count + crossing count); each path
   piece gets one delta slot, split proportionally where dwells interrupt it.
3. Retractions: while the mover is inside a radius-3 disc, the parked robot
   shadows it at the antipodal point of the unit circle around its center
   (exactly, not by sampled approximation, so tight distance-2 contacts
   survive validation); it walks out from its park point during the mover's
   entrance dwell and walks back during the exit dwell.

Assembly stitches the per-mover fragments into trajectories over [0, m]:
the k-th mover in the order moves during [k, k+1] and everyone else dwells,
except where a retraction plan overrides a parked robot's dwell.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import DegenerateDirection, PreconditionViolated
from .geom import (EPS, Piece, Point, Polycurve, Segment,
                   circle_circle_intersect, dist, make_arc, normalize_angle,
                   piece_circle_intersect, piece_length, sub_piece)
from .revolve import RevolvingArea

C_RADIUS = 1.0
B_RADIUS = 3.0
PARAM_TOL = 1e-9
MAX_CONCURRENT_HOSTS = 18


def retraction_point(c: Point, x: Point) -> Point:
    """Antipodal unit-offset point from c along the ray x -> c."""
    dx, dy = x.x - c.x, x.y - c.y
    d = math.hypot(dx, dy)
    if d <= EPS:
        raise DegenerateDirection(f"retraction undefined at center {c}")
    return Point(c.x - dx / d, c.y - dy / d)


# ---------------------------------------------------------------------------
# Crossing events
# ---------------------------------------------------------------------------

class CircleSpec(NamedTuple):
    owner: int
    center: Point
    radius: float
    label: str  # "C" or "B"


@dataclass(frozen=True)
class CrossingEvent:
    owner: int
    circle: str
    kind: str  # "entrance" or "exit"
    point: Point
    param: float


def _velocity(piece: Piece, t: float) -> tuple[float, float]:
    if isinstance(piece, Segment):
        return (piece.b.x - piece.a.x, piece.b.y - piece.a.y)
    theta = piece.angle_at(t)
    s = piece.extent if piece.ccw else -piece.extent
    return (-math.sin(theta) * s * piece.radius,
            math.cos(theta) * s * piece.radius)


def compute_crossings(path: Polycurve,
                      circles: Sequence[CircleSpec]) -> list[CrossingEvent]:
    """Strict entrance/exit crossings of the path with the given circles.

    Grazing contacts are excluded. Events are sorted by path parameter; at a
    shared parameter, exits come before entrances and same-kind events are
    ordered by ascending owner.
    """
    events: list[CrossingEvent] = []
    for k, piece in enumerate(path.pieces):
        for spec in circles:
            for pt, t in piece_circle_intersect(piece, spec.center, spec.radius):
                vx, vy = _velocity(piece, t)
                radial = (pt.x - spec.center.x) * vx + (pt.y - spec.center.y) * vy
                if abs(radial) <= 1e-12:
                    continue
                kind = "entrance" if radial < 0.0 else "exit"
                events.append(CrossingEvent(spec.owner, spec.label, kind,
                                            pt, k + t))
    # A path may start or end exactly on a circle (positions sit at the
    # assumption's minimum distance in tight scenes). An entrance at the very
    # last instant, or an exit at the very first, has no interior time and the
    # robot never strictly enters: drop these endpoint boundary contacts.
    total = float(len(path.pieces))
    events = [e for e in events
              if not ((e.kind == "entrance" and e.param >= total - PARAM_TOL)
                      or (e.kind == "exit" and e.param <= PARAM_TOL))]
    events.sort(key=lambda e: e.param)
    # Re-order inside groups of (float-)equal parameters: exit first, then
    # ascending owner, so a shared boundary point is left before it is entered.
    out: list[CrossingEvent] = []
    i = 0
    while i < len(events):
        j = i + 1
        while j < len(events) and events[j].param - events[i].param <= PARAM_TOL:
            j += 1
        group = sorted(events[i:j],
                       key=lambda e: (0 if e.kind == "exit" else 1, e.owner))
        out.extend(group)
        i = j
    return out


def check_alternation(events: Iterable[CrossingEvent]) -> None:
    """Entrances and exits must alternate per (owner, circle), entrance first."""
    state: dict[tuple[int, str], str] = {}
    for ev in events:
        key = (ev.owner, ev.circle)
        prev = state.get(key)
        if prev == ev.kind or (prev is None and ev.kind == "exit"):
            raise PreconditionViolated(
                f"crossing events do not alternate for owner {ev.owner}: "
                f"{ev.kind} at param {ev.param:.6g}")
        state[key] = ev.kind
    for key, kind in state.items():
        if kind == "entrance":
            raise PreconditionViolated(
                f"path ends inside circle of owner {key[0]}")


# ---------------------------------------------------------------------------
# Path surgery
# ---------------------------------------------------------------------------

def modify_path(path: Polycurve, centers: Sequence[Point]) -> Polycurve:
    """Reroute the path around the unit discs at the given occupied centers.

    Follows the first-entrance / last-exit recursion: cut at the first
    entrance into some disc, bridge with the geodesic arc of that disc's
    boundary to the last exit from it, and continue after the exit. Ties
    between the two half-circle arcs go counterclockwise.
    """
    return _modify_path(path, centers)[0]


def _modify_path(path: Polycurve,
                 centers: Sequence[Point]) -> tuple[Polycurve, int]:
    """modify_path plus the number of detour arcs inserted."""
    for endpoint, which in ((path.start(), "start"), (path.end(), "end")):
        for c in centers:
            if dist(endpoint, c) < C_RADIUS - EPS:
                raise PreconditionViolated(
                    f"path {which} {endpoint} lies inside occupied disc at {c}")
    specs = [CircleSpec(k, c, C_RADIUS, "C") for k, c in enumerate(centers)]
    events = compute_crossings(path, specs)
    if not events:
        return path, 0
    last_exit: dict[int, CrossingEvent] = {}
    for ev in events:
        if ev.kind == "exit":
            last_exit[ev.owner] = ev
    pieces: list[Piece] = []
    detours = 0
    cursor = 0.0
    for ev in events:
        if ev.param < cursor - PARAM_TOL:
            continue  # inside a region already bypassed
        if ev.kind == "exit":
            if ev.param <= cursor + PARAM_TOL:
                continue  # the exit that closed the previous bypass
            raise PreconditionViolated(
                f"unmatched exit of owner {ev.owner} at param {ev.param:.6g}")
        q = last_exit.get(ev.owner)
        if q is None or q.param < ev.param - PARAM_TOL:
            raise PreconditionViolated(
                f"entrance to owner {ev.owner} without a later exit")
        if ev.param > cursor + PARAM_TOL:
            pieces.extend(path.slice(cursor, ev.param).pieces)
        c = centers[ev.owner]
        a_p = math.atan2(ev.point.y - c.y, ev.point.x - c.x)
        a_q = math.atan2(q.point.y - c.y, q.point.x - c.x)
        gap = normalize_angle(a_q - a_p)
        if min(gap, 2.0 * math.pi - gap) > EPS:
            ccw = gap <= math.pi + 1e-12
            pieces.append(make_arc(c, C_RADIUS, a_p, a_q, ccw))
            detours += 1
        cursor = q.param
    n = float(len(path.pieces))
    if cursor < n - PARAM_TOL:
        pieces.extend(path.slice(cursor, n).pieces)
    return Polycurve(pieces), detours


# ---------------------------------------------------------------------------
# Trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DwellMotion:
    point: Point


@dataclass(frozen=True)
class MoveMotion:
    piece: Piece  # traversed over the whole slot, uniform in piece parameter


@dataclass(frozen=True)
class RetractMotion:
    """Shadow the mover's piece at the retraction point around center."""

    center: Point
    piece: Piece


Motion = Union[DwellMotion, MoveMotion, RetractMotion]


def _motion_point(motion: Motion, tau: float) -> Point:
    if isinstance(motion, DwellMotion):
        return motion.point
    if isinstance(motion, MoveMotion):
        return motion.piece.point_at(tau)
    return retraction_point(motion.center, motion.piece.point_at(tau))


@dataclass(frozen=True)
class Slot:
    t0: float
    t1: float
    motion: Motion

    def position_at(self, t: float) -> Point:
        if self.t1 <= self.t0:
            return _motion_point(self.motion, 0.0)
        tau = (t - self.t0) / (self.t1 - self.t0)
        return _motion_point(self.motion, min(1.0, max(0.0, tau)))

    def start_point(self) -> Point:
        return _motion_point(self.motion, 0.0)

    def end_point(self) -> Point:
        return _motion_point(self.motion, 1.0)


@dataclass
class Trajectory:
    robot: int
    slots: list[Slot]

    def __post_init__(self):
        if not self.slots:
            raise PreconditionViolated("empty trajectory")
        for a, b in zip(self.slots, self.slots[1:]):
            if abs(a.t1 - b.t0) > 1e-9:
                raise PreconditionViolated(
                    f"robot {self.robot}: time gap {a.t1} -> {b.t0}")
            if dist(a.end_point(), b.start_point()) > 1e-7:
                raise PreconditionViolated(
                    f"robot {self.robot}: discontinuity at t={a.t1:.6g}: "
                    f"{a.end_point()} -> {b.start_point()}")

    @property
    def t_start(self) -> float:
        return self.slots[0].t0

    @property
    def t_end(self) -> float:
        return self.slots[-1].t1

    def position_at(self, t: float) -> Point:
        slots = self.slots
        if t <= slots[0].t0:
            return slots[0].start_point()
        if t >= slots[-1].t1:
            return slots[-1].end_point()
        lo, hi = 0, len(slots) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if slots[mid].t1 < t:
                lo = mid + 1
            else:
                hi = mid
        return slots[lo].position_at(t)


# ---------------------------------------------------------------------------
# Reparametrization
# ---------------------------------------------------------------------------

class FragmentEntry(NamedTuple):
    slot: Slot
    event: CrossingEvent | None


def reparametrize(path: Polycurve,
                  events: Sequence[CrossingEvent]) -> list[FragmentEntry]:
    """Schedule the path over [0, 1] with one dwell slot per crossing event.

    delta = 1/(pieces + events); every piece gets a delta-wide slot, split
    proportionally by piece parameter where event dwells interrupt it, and
    every event gets a delta-wide dwell at its crossing point. Simultaneous
    events occupy consecutive dwell slots in their sorted order.
    """
    P = len(path.pieces)
    delta = 1.0 / (P + len(events))
    per_piece: list[list[tuple[float, CrossingEvent]]] = [[] for _ in range(P)]
    for ev in events:
        k, t = path.split_param(ev.param)
        per_piece[k].append((t, ev))
    entries: list[FragmentEntry] = []
    clock = 0.0
    for k, piece in enumerate(path.pieces):
        prev_t = 0.0
        for t_loc, ev in per_piece[k]:
            if t_loc > prev_t + 1e-15:
                width = delta * (t_loc - prev_t)
                entries.append(FragmentEntry(
                    Slot(clock, clock + width,
                         MoveMotion(sub_piece(piece, prev_t, t_loc))), None))
                clock += width
                prev_t = t_loc
            entries.append(FragmentEntry(
                Slot(clock, clock + delta, DwellMotion(ev.point)), ev))
            clock += delta
        if prev_t < 1.0 - 1e-15:
            width = delta * (1.0 - prev_t)
            piece_part = piece if prev_t == 0.0 else sub_piece(piece, prev_t, 1.0)
            entries.append(FragmentEntry(
                Slot(clock, clock + width, MoveMotion(piece_part)), None))
            clock += width
    # Absorb accumulated rounding into the last slot so the fragment ends at 1.
    last = entries[-1].slot
    entries[-1] = FragmentEntry(Slot(last.t0, 1.0, last.motion),
                                entries[-1].event)
    return entries


# ---------------------------------------------------------------------------
# Retraction plans
# ---------------------------------------------------------------------------

@dataclass
class RetractionPlan:
    owner: int            # area index of the parked position
    host: int             # robot parked there
    slots: list[Slot]     # relative to the mover's [0, 1] fragment
    interval: tuple[float, float]
    retraction_length: float
    subpath_length: float
    lead_length: float


def retraction_sweep(center: Point, piece: Piece) -> float:
    """Exact angular variation of (piece(t) - center) over the piece.

    This is the arc length traced on the unit circle by the retraction point
    while the mover traverses the piece. Segments subtend a monotone angle;
    arcs are split where the radial direction turns (Thales circle through
    the two centers) and into sub-arcs short enough that no section wraps.
    """

    def wedge(p0: Point, p1: Point) -> float:
        u0 = (p0.x - center.x, p0.y - center.y)
        u1 = (p1.x - center.x, p1.y - center.y)
        return abs(math.atan2(u0[0] * u1[1] - u0[1] * u1[0],
                              u0[0] * u1[0] + u0[1] * u1[1]))

    if isinstance(piece, Segment):
        return wedge(piece.a, piece.b)
    cuts = {0.0, 1.0}
    mid = Point((center.x + piece.center.x) / 2.0,
                (center.y + piece.center.y) / 2.0)
    half = dist(center, piece.center) / 2.0
    if half > EPS:
        hits = circle_circle_intersect(piece.center, piece.radius, mid, half)
        for pt in hits.points:
            t = piece.param_of_angle(math.atan2(pt.y - piece.center.y,
                                                pt.x - piece.center.x))
            if t is not None and EPS < t < 1.0 - EPS:
                cuts.add(t)
    n_sub = max(1, math.ceil(piece.extent / (math.pi / 2.0)))
    for i in range(1, n_sub):
        cuts.add(i / n_sub)
    ts = sorted(cuts)
    total = 0.0
    for t0, t1 in zip(ts, ts[1:]):
        total += wedge(piece.point_at(t0), piece.point_at(t1))
    return total


def build_retractions(fragment: Sequence[FragmentEntry],
                      owner_info: dict[int, tuple[Point, Point, int]],
                      ) -> list[RetractionPlan]:
    """Host motion plans for every maximal inside-B interval of the fragment.

    owner_info maps an owner (area index) to (park point z, center c, robot).
    During the mover's entrance dwell the host walks z -> rho(entry); during
    move slots inside the interval it shadows the mover exactly; during other
    events' dwells it holds; during the exit dwell it walks back to z.
    """
    plans: list[RetractionPlan] = []
    active: dict[int, RetractionPlan] = {}
    for slot, ev in fragment:
        if ev is None:
            assert isinstance(slot.motion, MoveMotion)
            piece = slot.motion.piece
            for owner, plan in active.items():
                _, c, _ = owner_info[owner]
                plan.slots.append(Slot(slot.t0, slot.t1, RetractMotion(c, piece)))
                plan.retraction_length += retraction_sweep(c, piece)
                plan.subpath_length += piece_length(piece)
            continue
        for owner, plan in active.items():
            if owner == ev.owner:
                continue
            _, c, _ = owner_info[owner]
            plan.slots.append(Slot(slot.t0, slot.t1,
                                   DwellMotion(retraction_point(c, ev.point))))
        if ev.kind == "entrance":
            z, c, robot = owner_info[ev.owner]
            rho = retraction_point(c, ev.point)
            plan = RetractionPlan(ev.owner, robot, [], (slot.t0, 1.0),
                                  0.0, 0.0, dist(z, rho))
            plan.slots.append(Slot(slot.t0, slot.t1,
                                   MoveMotion(Segment(z, rho))))
            active[ev.owner] = plan
            if len(active) > MAX_CONCURRENT_HOSTS:
                raise PreconditionViolated(
                    f"{len(active)} concurrent retractions exceed "
                    f"{MAX_CONCURRENT_HOSTS}")
        else:
            plan = active.pop(ev.owner)
            z, c, _ = owner_info[ev.owner]
            rho = retraction_point(c, ev.point)
            plan.slots.append(Slot(slot.t0, slot.t1,
                                   MoveMotion(Segment(rho, z))))
            plan.lead_length += dist(rho, z)
            plan.interval = (plan.interval[0], slot.t1)
            plans.append(plan)
    if active:
        raise PreconditionViolated(
            f"unterminated retraction intervals for owners {sorted(active)}")
    return plans


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

@dataclass
class RobotStats:
    initial_length: float = 0.0
    modified_length: float = 0.0
    c_detours: int = 0
    b_events: int = 0
    b_intervals: int = 0
    # (retraction arc length, mover sub-path length) per hosted interval,
    # attributed to the robot who was retracted.
    hosted: list[tuple[float, float]] = field(default_factory=list)
    lead_length: float = 0.0


@dataclass
class PlanResult:
    order: list[int]
    trajectories: list[Trajectory]
    modified_paths: list[Polycurve]
    stats: list[RobotStats]

    @property
    def total_initial(self) -> float:
        return sum(s.initial_length for s in self.stats)

    @property
    def total_final(self) -> float:
        moved = sum(s.modified_length for s in self.stats)
        hosted = sum(r for s in self.stats for r, _ in s.hosted)
        leads = sum(s.lead_length for s in self.stats)
        return moved + hosted + leads


def _shift(slot: Slot, offset: float) -> Slot:
    return Slot(slot.t0 + offset, slot.t1 + offset, slot.motion)


def _splice(base: list[Slot], overlays: list[Slot], robot: int) -> list[Slot]:
    """Cut overlay slots into the base timeline's dwell regions."""
    if not overlays:
        return base
    overlays = sorted(overlays, key=lambda s: s.t0)
    for a, b in zip(overlays, overlays[1:]):
        if b.t0 < a.t1 - 1e-9:
            raise PreconditionViolated(
                f"robot {robot}: overlapping retraction plans at t={b.t0:.6g}")
    out: list[Slot] = []
    oi = 0
    for slot in base:
        if not isinstance(slot.motion, DwellMotion):
            out.append(slot)
            continue
        cursor = slot.t0
        while oi < len(overlays) and overlays[oi].t0 < slot.t1 - 1e-12:
            ov = overlays[oi]
            if ov.t0 < cursor - 1e-9 or ov.t1 > slot.t1 + 1e-9:
                raise PreconditionViolated(
                    f"robot {robot}: retraction slot [{ov.t0:.6g},{ov.t1:.6g}] "
                    f"outside dwell [{slot.t0:.6g},{slot.t1:.6g}]")
            if ov.t0 > cursor + 1e-12:
                out.append(Slot(cursor, ov.t0, slot.motion))
            out.append(ov)
            cursor = ov.t1
            oi += 1
        if cursor < slot.t1 - 1e-12:
            out.append(Slot(cursor, slot.t1, slot.motion))
    return out


def assemble(order: Sequence[int], scenario, areas: Sequence[RevolvingArea],
             initial_paths: Sequence[Polycurve]) -> PlanResult:
    """Coordinate all robots following the given execution order.

    order[k] is the robot that moves k-th; it moves during [k, k+1] along its
    modified, reparametrized path while every other robot is parked at its
    start (not yet moved) or target (already moved), stepping aside per the
    retraction plans.
    """
    m = scenario.m
    if sorted(order) != list(range(m)):
        raise PreconditionViolated(f"order {order} is not a permutation")
    pos_of = {r: k for k, r in enumerate(order)}
    stats = [RobotStats() for _ in range(m)]
    modified: list[Polycurve | None] = [None] * m
    fragments: dict[int, list[FragmentEntry]] = {}
    overlays: dict[int, list[Slot]] = defaultdict(list)

    for k, i in enumerate(order):
        occupied: list[tuple[int, int]] = []  # (area index, robot)
        for j in range(m):
            if j == i:
                continue
            occupied.append((j, j) if pos_of[j] > k else (m + j, j))
        centers = [areas[idx].c for idx, _ in occupied]
        path = initial_paths[i]
        mod, detours = _modify_path(path, centers)
        b_specs = [CircleSpec(idx, areas[idx].c, B_RADIUS, "B")
                   for idx, _ in occupied]
        events = compute_crossings(mod, b_specs)
        check_alternation(events)
        frag = reparametrize(mod, events)
        owner_info = {idx: (areas[idx].z, areas[idx].c, j)
                      for idx, j in occupied}
        plans = build_retractions(frag, owner_info)
        fragments[i] = frag
        modified[i] = mod
        st = stats[i]
        st.initial_length = path.total_length
        st.modified_length = mod.total_length
        st.c_detours = detours
        st.b_events = len(events)
        for plan in plans:
            stats[plan.host].hosted.append(
                (plan.retraction_length, plan.subpath_length))
            stats[plan.host].lead_length += plan.lead_length
            stats[i].b_intervals += 1
            overlays[plan.host].extend(_shift(s, float(k)) for s in plan.slots)

    trajectories = []
    for r in range(m):
        k = pos_of[r]
        base: list[Slot] = []
        if k > 0:
            base.append(Slot(0.0, float(k), DwellMotion(scenario.starts[r])))
        base.extend(_shift(e.slot, float(k)) for e in fragments[r])
        if k + 1 < m:
            base.append(Slot(float(k + 1), float(m),
                             DwellMotion(scenario.targets[r])))
        trajectories.append(Trajectory(r, _splice(base, overlays[r], r)))
    return PlanResult(list(order), trajectories, list(modified), stats)
