"""Revolving-area search: neighbor index, single queries, find_all."""

import math
import random

import pytest

from discplan.errors import AssumptionViolated, NoRevolvingArea
from discplan.geom import Point, Polygon, dist, dist_point_polygon
from discplan.revolve import (NeighborIndex, find_all, find_revolving_area,
                              position_list)
from discplan.scenario import generate_grid, generate_triangles, make_scenario

from oracles import revolve_oracle, brute_rb


def _rect(x0, y0, x1, y1):
    return Polygon((Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)))


def _check_area(area, obstacles, others, eps=1e-9):
    assert dist(area.c, area.z) <= 1.0 + eps
    for poly in obstacles:
        assert dist_point_polygon(area.c, poly) >= 2.0 - eps
    for y in others:
        assert dist(area.c, y) >= 3.0 - eps


class TestNeighborIndex:
    def test_far_pair_empty(self):
        idx = NeighborIndex([Point(0.0, 0.0), Point(5.0, 0.0)])
        assert idx.near(Point(0.0, 0.0), skip=0) == []
        assert idx.near(Point(5.0, 0.0), skip=1) == []

    def test_boundary_inclusive(self):
        idx = NeighborIndex([Point(0.0, 0.0), Point(4.0, 0.0)])
        assert idx.near(Point(0.0, 0.0), skip=0) == [1]
        assert idx.near(Point(4.0, 0.0), skip=1) == [0]

    def test_matches_brute_force(self):
        rng = random.Random(42)
        pts = [Point(rng.uniform(-12, 12), rng.uniform(-12, 12))
               for _ in range(50)]
        idx = NeighborIndex(pts)
        for i, z in enumerate(pts):
            assert idx.near(z, skip=i) == brute_rb(pts, z, skip=i)


class TestFindRevolvingArea:
    def test_isolated_fast_path(self):
        area = find_revolving_area(Point(3.0, -7.0), [], [])
        assert area.c == Point(3.0, -7.0)

    def test_wall_at_distance_one(self):
        # clearance(c) = 1 - c.y and |c - z| <= 1 intersect only at (0, -1),
        # so the feasible set is that single point
        wall = _rect(-10.0, 1.0, 10.0, 3.0)
        z = Point(0.0, 0.0)
        area = find_revolving_area(z, [wall], [])
        _check_area(area, [wall], [])
        assert dist(area.c, Point(0.0, -1.0)) <= 1e-7

    def test_wall_slightly_beyond_one(self):
        wall = _rect(-10.0, 1.1, 10.0, 3.0)
        z = Point(0.0, 0.0)
        area = find_revolving_area(z, [wall], [])
        _check_area(area, [wall], [])
        assert area.c.y < z.y
        assert revolve_oracle(z, [wall], []) is not None

    def test_corridor_infeasible(self):
        # every candidate center within 1 of z has wall clearance < 2
        walls = [_rect(-10.0, 1.25, 10.0, 4.0), _rect(-10.0, -4.0, 10.0, -1.25)]
        z = Point(0.0, 0.0)
        with pytest.raises(NoRevolvingArea):
            find_revolving_area(z, walls, [])
        assert revolve_oracle(z, walls, []) is None

    def test_crowded_neighbors_infeasible(self):
        # three neighbors at distance 2 surround z; no center clears all
        z = Point(0.0, 0.0)
        others = [Point(2.0 * math.cos(a), 2.0 * math.sin(a))
                  for a in (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)]
        with pytest.raises(NoRevolvingArea):
            find_revolving_area(z, [], others)
        assert revolve_oracle(z, [], others) is None

    def test_matches_oracle_random(self):
        rng = random.Random(7)
        agree = 0
        for _ in range(60):
            z = Point(rng.uniform(-5, 5), rng.uniform(-5, 5))
            polys = []
            if rng.random() < 0.7:
                cx = z.x + rng.uniform(-4, 4)
                cy = z.y + rng.uniform(1.0, 3.0)
                polys.append(_rect(cx - 2, cy, cx + 2, cy + 1))
            others = [Point(z.x + rng.uniform(-4, 4), z.y + rng.uniform(-4, 4))
                      for _ in range(rng.randrange(3))]
            others = [y for y in others if dist(y, z) >= 2.0]
            want = revolve_oracle(z, polys, others)
            if want is None:
                continue
            area = find_revolving_area(z, polys, others)
            _check_area(area, polys, others)
            agree += 1
        assert agree >= 30


class TestFindAll:
    def test_grid_fast_path_everywhere(self):
        sc = generate_grid(4, seed=1)
        areas = find_all(sc)
        assert len(areas) == 8
        for area, z in zip(areas, position_list(sc)):
            assert area.z == z
            assert area.c == z

    def test_close_pair_displaced_apart(self):
        sc = make_scenario("pair", [], [Point(0.0, 0.0)], [Point(2.9, 0.0)])
        a0, a1 = find_all(sc)
        _check_area(a0, [], [Point(2.9, 0.0)])
        _check_area(a1, [], [Point(0.0, 0.0)])
        # centers forced at least 3 apart, so they move away from each other
        assert dist(a0.c, a1.c) >= 3.0 - 1e-9
        assert a0.c.x < a1.c.x

    def test_osculating_pair(self):
        sc = make_scenario("kiss", [], [Point(0.0, 0.0)], [Point(2.0, 0.0)])
        a0, a1 = find_all(sc)
        _check_area(a0, [], [Point(2.0, 0.0)])
        _check_area(a1, [], [Point(0.0, 0.0)])

    def test_failure_names_positions(self):
        walls = [_rect(-10.0, 1.25, 10.0, 4.0), _rect(-10.0, -4.0, 10.0, -1.25)]
        sc = make_scenario("stuck", walls,
                           [Point(0.0, 0.0)], [Point(30.0, 0.0)])
        with pytest.raises(AssumptionViolated, match=r"start\[0\]"):
            find_all(sc)

    def test_triangles_soundness_and_spacing(self):
        sc = generate_triangles(12, 8, seed=3)
        areas = find_all(sc)
        positions = position_list(sc)
        for i, area in enumerate(areas):
            others = [p for j, p in enumerate(positions) if j != i]
            _check_area(area, sc.obstacles, others)
        for i in range(len(areas)):
            for j in range(i + 1, len(areas)):
                assert dist(areas[i].c, areas[j].c) >= 2.0 - 1e-9
