"""Path surgery, scheduling, and retraction hosting."""

import math
import random

import pytest

from discplan.coordinate import (CircleSpec, DwellMotion, MoveMotion, Slot,
                                 Trajectory, assemble, build_retractions,
                                 compute_crossings, modify_path,
                                 reparametrize, retraction_point,
                                 retraction_sweep)
from discplan.errors import DegenerateDirection, PreconditionViolated
from discplan.geom import (CircArc, Point, Polycurve, Polygon, Segment, dist,
                           piece_length)
from discplan.revolve import find_all
from discplan.scenario import generate_tunnel, make_scenario
from discplan.spp import plan_shortest_path
from discplan.validate import validate


def _seg_path(*pts):
    return Polycurve(tuple(Segment(Point(*a), Point(*b))
                           for a, b in zip(pts, pts[1:])))


class TestRetractionPoint:
    def test_collinear(self):
        assert retraction_point(Point(0, 0), Point(3, 0)) == Point(-1.0, 0.0)

    def test_vertical(self):
        assert retraction_point(Point(0, 0), Point(0, 2)) == Point(0.0, -1.0)

    def test_offset_center(self):
        rho = retraction_point(Point(1, 1), Point(4, 5))
        assert abs(rho.x - 0.4) <= 1e-12 and abs(rho.y - 0.2) <= 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateDirection):
            retraction_point(Point(2, 2), Point(2, 2))

    def test_separation_identity(self):
        # |x - rho| = |x - c| + 1, so the two unit discs never overlap
        rng = random.Random(5)
        for _ in range(500):
            c = Point(rng.uniform(-9, 9), rng.uniform(-9, 9))
            x = Point(c.x + rng.uniform(-6, 6), c.y + rng.uniform(-6, 6))
            if dist(x, c) < 1e-6:
                continue
            rho = retraction_point(c, x)
            assert abs(dist(rho, c) - 1.0) <= 1e-12
            assert abs(dist(x, rho) - (dist(x, c) + 1.0)) <= 1e-9


class TestComputeCrossings:
    def test_chord(self):
        path = _seg_path((-5, 0), (5, 0))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 0), 1.0, "C")])
        assert [e.kind for e in evs] == ["entrance", "exit"]
        assert dist(evs[0].point, Point(-1, 0)) <= 1e-12
        assert dist(evs[1].point, Point(1, 0)) <= 1e-12
        assert evs[0].param < evs[1].param

    def test_all_outside(self):
        path = _seg_path((-5, 5), (5, 5))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 0), 1.0, "C"),
                                       CircleSpec(1, Point(2, 0), 1.0, "C")])
        assert evs == []

    def test_exit_before_entrance_at_shared_point(self):
        # osculating unit circles; the shared point (1,0) is an exit from
        # owner 0 and an entrance to owner 1, reported in that order
        path = _seg_path((-5, 0), (5, 0))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 0), 1.0, "C"),
                                       CircleSpec(1, Point(2, 0), 1.0, "C")])
        mid = [e for e in evs if abs(e.param - 0.6) <= 1e-9]
        assert len(mid) == 2
        assert (mid[0].owner, mid[0].kind) == (0, "exit")
        assert (mid[1].owner, mid[1].kind) == (1, "entrance")

    def test_grazing_excluded(self):
        path = _seg_path((-5, 1), (5, 1))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 0), 1.0, "C")])
        assert evs == []

    def test_arc_pieces(self):
        # half arc sweeping through a small circle produces one in/out pair
        arc = CircArc(Point(0, 0), 2.0, 0.0, math.pi, True)
        path = Polycurve((arc,))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 2), 0.5, "C")])
        assert [e.kind for e in evs] == ["entrance", "exit"]
        for e in evs:
            assert abs(dist(e.point, Point(0, 2)) - 0.5) <= 1e-9


class TestModifyPath:
    def test_forced_semicircle(self):
        path = _seg_path((-5, 0), (5, 0))
        out = modify_path(path, [Point(0, 0)])
        total = sum(piece_length(p) for p in out.pieces)
        assert abs(total - (8.0 + math.pi)) <= 1e-9
        kinds = [type(p).__name__ for p in out.pieces]
        assert kinds == ["Segment", "CircArc", "Segment"]
        arc = out.pieces[1]
        assert abs(piece_length(arc) - math.pi) <= 1e-9
        # antipodal tie goes counterclockwise: from (-1,0) through (0,-1)
        assert dist(arc.point_at(0.5), Point(0, -1)) <= 1e-9

    def test_double_pierce_single_arc(self):
        path = _seg_path((-4.0, 0.5), (0.0, 0.5), (0.0, 2.0), (0.3, -4.0))
        c = Point(0.0, 0.0)
        out = modify_path(path, [c])
        arcs = [p for p in out.pieces if isinstance(p, CircArc)]
        assert len(arcs) == 1
        assert dist(arcs[0].center, c) <= 1e-12
        # the excursion through (0,2) is cut out entirely
        for piece in out.pieces:
            for t in (0.0, 0.25, 0.5, 0.75, 1.0):
                assert dist(piece.point_at(t), c) >= 1.0 - 1e-9
                assert dist(piece.point_at(t), Point(0.0, 2.0)) > 0.2

    def test_identity_when_clear(self):
        path = _seg_path((-5, 3), (5, 3))
        out = modify_path(path, [Point(0, 0), Point(2, 0)])
        assert out.pieces == path.pieces

    def test_endpoint_inside_rejected(self):
        path = _seg_path((0.5, 0), (5, 0))
        with pytest.raises(PreconditionViolated):
            modify_path(path, [Point(0, 0)])

    def test_two_circles_chained(self):
        path = _seg_path((-6, 0), (6, 0))
        centers = [Point(-2, 0), Point(2, 0)]
        out = modify_path(path, centers)
        arcs = [p for p in out.pieces if isinstance(p, CircArc)]
        assert len(arcs) == 2
        for piece in out.pieces:
            for t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
                for c in centers:
                    assert dist(piece.point_at(t), c) >= 1.0 - 1e-9


class TestReparametrize:
    def test_plain_slots(self):
        path = _seg_path((0, 0), (1, 0), (1, 1), (0, 1))
        entries = reparametrize(path, [])
        assert len(entries) == 3
        for k, (slot, ev) in enumerate(entries):
            assert ev is None
            assert isinstance(slot.motion, MoveMotion)
            assert abs((slot.t1 - slot.t0) - 1.0 / 3.0) <= 1e-12
            assert abs(slot.t0 - k / 3.0) <= 1e-12
        assert abs(entries[-1].slot.t1 - 1.0) <= 1e-12

    def test_dwells_at_events(self):
        path = _seg_path((-5, 0), (0, 0), (5, 0))
        evs = compute_crossings(path, [CircleSpec(0, Point(0, 0), 3.0, "B")])
        assert len(evs) == 2
        entries = reparametrize(path, evs)
        delta = 1.0 / 4.0
        dwells = [(s, e) for s, e in entries if e is not None]
        assert len(dwells) == 2
        for slot, ev in dwells:
            assert isinstance(slot.motion, DwellMotion)
            assert abs((slot.t1 - slot.t0) - delta) <= 1e-12
            assert dist(slot.motion.point, ev.point) <= 1e-12
        # mover time is continuous and covers [0, 1]
        assert abs(entries[0].slot.t0) <= 1e-12
        assert abs(entries[-1].slot.t1 - 1.0) <= 1e-12
        for (a, _), (b, _) in zip(entries, entries[1:]):
            assert abs(a.t1 - b.t0) <= 1e-12
            assert dist(a.end_point(), b.start_point()) <= 1e-12
        # move time per piece still sums to delta
        for k in range(2):
            tot = sum(s.t1 - s.t0 for s, e in entries
                      if e is None and isinstance(s.motion, MoveMotion)
                      and s.motion.piece in (path.pieces[k],))
            del tot  # pieces are sliced, so compare total move time instead
        move_total = sum(s.t1 - s.t0 for s, e in entries if e is None)
        assert abs(move_total - 2 * delta) <= 1e-12

    def test_simultaneous_entry_two_dwells(self):
        # both radius-3 circles cross y=0 at x = +-sqrt(9 - 2.9^2)
        path = _seg_path((-5, 0), (5, 0))
        specs = [CircleSpec(0, Point(0, 2.9), 3.0, "B"),
                 CircleSpec(1, Point(0, -2.9), 3.0, "B")]
        evs = compute_crossings(path, specs)
        assert len(evs) == 4
        entries = reparametrize(path, evs)
        delta = 1.0 / 5.0
        dwells = [(s, e) for s, e in entries if e is not None]
        assert len(dwells) == 4
        # entry dwells are consecutive delta slots at the same point
        s0, s1 = dwells[0][0], dwells[1][0]
        assert abs(s0.t1 - s1.t0) <= 1e-12
        assert dist(s0.motion.point, s1.motion.point) <= 1e-12
        for slot, _ in dwells:
            assert abs((slot.t1 - slot.t0) - delta) <= 1e-12


def _follow(entries, owner_plans, z):
    """Host timeline over [0,1]: parked at z except during plan slots."""
    slots = []
    cursor = 0.0
    for plan_slot in [s for p in owner_plans for s in p.slots]:
        if plan_slot.t0 > cursor + 1e-12:
            slots.append(Slot(cursor, plan_slot.t0, DwellMotion(z)))
        slots.append(plan_slot)
        cursor = plan_slot.t1
    if cursor < 1.0 - 1e-12:
        slots.append(Slot(cursor, 1.0, DwellMotion(z)))
    return slots


class TestBuildRetractions:
    def test_no_entry_no_plan(self):
        path = _seg_path((-5, 4), (5, 4))
        z = c = Point(0, 0)
        evs = compute_crossings(path, [CircleSpec(0, c, 3.0, "B")])
        assert evs == []
        entries = reparametrize(path, evs)
        plans = build_retractions(entries, {0: (z, c, 1)})
        assert plans == []

    def test_straight_pass_distance_two(self):
        path = _seg_path((-5, 2), (5, 2))
        z = c = Point(0, 0)
        evs = compute_crossings(path, [CircleSpec(0, c, 3.0, "B")])
        assert [e.kind for e in evs] == ["entrance", "exit"]
        entries = reparametrize(path, evs)
        plans = build_retractions(entries, {0: (z, c, 1)})
        assert len(plans) == 1
        plan = plans[0]
        mover = Trajectory(0, [s for s, _ in entries])
        host = Trajectory(1, _follow(entries, plans, z))
        for k in range(401):
            t = k / 400.0
            gap = dist(mover.position_at(t), host.position_at(t))
            assert gap >= 2.0 - 1e-7, f"t={t} gap={gap}"
        # hosted retraction is no longer than the mover's sub-path inside B
        assert plan.retraction_length <= plan.subpath_length + 1e-9

    def test_sweep_matches_dense_sampling(self):
        rng = random.Random(9)
        for _ in range(40):
            c = Point(rng.uniform(-2, 2), rng.uniform(-2, 2))
            if rng.random() < 0.5:
                piece = Segment(Point(rng.uniform(-6, 6), rng.uniform(-6, 6)),
                                Point(rng.uniform(-6, 6), rng.uniform(-6, 6)))
            else:
                piece = CircArc(Point(rng.uniform(-6, 6), rng.uniform(-6, 6)),
                                rng.uniform(0.5, 3.0),
                                rng.uniform(0, 2 * math.pi),
                                rng.uniform(0.3, 5.0),
                                rng.random() < 0.5)
            if dist(piece.point_at(0.0), c) < 0.3:
                continue
            ok = True
            prev = None
            total = 0.0
            for k in range(20001):
                p = piece.point_at(k / 20000.0)
                if dist(p, c) < 1e-3:
                    ok = False
                    break
                ang = math.atan2(p.y - c.y, p.x - c.x)
                if prev is not None:
                    d = abs(ang - prev)
                    total += min(d, 2 * math.pi - d)
                prev = ang
            if not ok:
                continue
            exact = retraction_sweep(c, piece)
            assert abs(exact - total) <= 2e-4 * max(1.0, total)

    def test_two_hosts_pairwise_safe(self):
        path = _seg_path((-9, 0), (9, 0))
        hosts = {0: (Point(-1.0, 2.2), Point(-1.0, 2.2), 1),
                 1: (Point(1.5, -2.4), Point(1.5, -2.4), 2)}
        specs = [CircleSpec(k, info[1], 3.0, "B")
                 for k, info in hosts.items()]
        evs = compute_crossings(path, specs)
        entries = reparametrize(path, evs)
        plans = build_retractions(entries, hosts)
        assert len(plans) == 2
        mover = Trajectory(0, [s for s, _ in entries])
        trajs = [mover]
        for owner, (z, c, robot) in hosts.items():
            mine = [p for p in plans if p.owner == owner]
            trajs.append(Trajectory(robot, _follow(entries, mine, z)))
        for k in range(601):
            t = k / 600.0
            pts = [tr.position_at(t) for tr in trajs]
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    gap = dist(pts[i], pts[j])
                    assert gap >= 2.0 - 1e-7, f"t={t} pair=({i},{j}) {gap}"


class TestAssemble:
    def test_single_robot(self):
        sc = make_scenario("one", [], [Point(0, 0)], [Point(10, 0)])
        areas = find_all(sc)
        paths = [plan_shortest_path(sc.starts[0], sc.targets[0], [])]
        res = assemble([0], sc, areas, paths)
        assert len(res.trajectories) == 1
        tr = res.trajectories[0]
        assert tr.t_start == 0.0 and tr.t_end == 1.0
        assert dist(tr.position_at(0.0), Point(0, 0)) <= 1e-12
        assert dist(tr.position_at(1.0), Point(10, 0)) <= 1e-12
        assert res.stats[0].c_detours == 0
        assert abs(res.total_final - res.total_initial) <= 1e-9

    def test_far_apart_pair_untouched(self):
        sc = make_scenario("far", [], [Point(0, 0), Point(100, 0)],
                           [Point(10, 0), Point(110, 0)])
        areas = find_all(sc)
        paths = [plan_shortest_path(s, t, []) for s, t in
                 zip(sc.starts, sc.targets)]
        res = assemble([0, 1], sc, areas, paths)
        for i, tr in enumerate(res.trajectories):
            assert tr.t_start == 0.0 and tr.t_end == 2.0
            assert res.stats[i].c_detours == 0
            assert res.stats[i].b_intervals == 0
            assert not res.stats[i].hosted
        # robot 0 moves first, then dwells at its target
        tr0, tr1 = res.trajectories
        assert dist(tr0.position_at(1.0), Point(10, 0)) <= 1e-12
        assert dist(tr0.position_at(2.0), Point(10, 0)) <= 1e-12
        assert dist(tr1.position_at(1.0), Point(100, 0)) <= 1e-12
        report = validate(res.trajectories, sc, paths)
        assert report.ok

    def test_tunnel_pair_validates(self):
        sc = generate_tunnel(2, version="I")
        areas = find_all(sc)
        paths = [plan_shortest_path(s, t, sc.obstacles) for s, t in
                 zip(sc.starts, sc.targets)]
        res = assemble([0, 1], sc, areas, paths)
        report = validate(res.trajectories, sc, paths)
        assert report.ok, report.violations[:3]
        # someone had to host a retraction in the narrow tunnel
        assert any(s.hosted for s in res.stats)

    def test_not_a_permutation(self):
        sc = make_scenario("one", [], [Point(0, 0)], [Point(10, 0)])
        areas = find_all(sc)
        paths = [plan_shortest_path(sc.starts[0], sc.targets[0], [])]
        with pytest.raises(PreconditionViolated):
            assemble([0, 0], sc, areas, paths)
