"""SVG rendering of scenes and trajectories."""

import xml.etree.ElementTree as ET

from discplan.coordinate import assemble
from discplan.geom import Point
from discplan.render import render_frames, render_static
from discplan.revolve import find_all
from discplan.scenario import generate_bad_input, generate_grid, make_scenario
from discplan.spp import plan_shortest_path


def _circles(svg, cls):
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    return [(float(c.get("cx")), float(c.get("cy")), float(c.get("r")))
            for c in root.iter(f"{ns}circle") if c.get("class") == cls]


def _count(svg, tag, cls=None):
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    return sum(1 for el in root.iter(f"{ns}{tag}")
               if cls is None or el.get("class") == cls)


class TestStatic:
    def test_bare_scene(self):
        sc = make_scenario("bare", [], [Point(0, 0)], [Point(10, 0)])
        svg = render_static(sc)
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        assert _count(svg, "polygon", "obstacle") == 0
        assert _count(svg, "circle", "start") == 1
        assert _count(svg, "circle", "target") == 1

    def test_grid_rings_at_positions(self):
        sc = generate_grid(4, seed=1)
        areas = find_all(sc)
        svg = render_static(sc, areas=areas)
        rings = _circles(svg, "ring-a")
        assert len(rings) == 8
        positions = {(p.x, p.y) for p in list(sc.starts) + list(sc.targets)}
        for cx, cy, r in rings:
            assert r == 2.0
            assert min(abs(cx - x) + abs(cy - y)
                       for x, y in positions) <= 1e-9

    def test_bad_input_structure(self):
        sc = generate_bad_input(8)
        areas = find_all(sc)
        svg = render_static(sc, areas=areas)
        assert _count(svg, "polygon", "obstacle") == 8
        rings = _circles(svg, "ring-b")
        assert len(rings) == 4
        # ringed clusters sit around both tunnel mouths
        assert any(abs(cx - 4.0) <= 1.5 for cx, cy, r in rings)
        assert any(abs(cx - 8.0) <= 1.5 for cx, cy, r in rings)

    def test_paths_drawn(self):
        sc = generate_grid(4, seed=1)
        areas = find_all(sc)
        paths = [plan_shortest_path(s, t, sc.obstacles)
                 for s, t in zip(sc.starts, sc.targets)]
        res = assemble(list(range(4)), sc, areas, paths)
        svg = render_static(sc, areas=areas, initial_paths=paths,
                            trajectories=res.trajectories)
        assert _count(svg, "path", "initial") == 4
        assert _count(svg, "path", "final") == 4


class TestFrames:
    def test_frame_count_and_robots(self):
        sc = generate_grid(4, seed=1)
        areas = find_all(sc)
        paths = [plan_shortest_path(s, t, sc.obstacles)
                 for s, t in zip(sc.starts, sc.targets)]
        res = assemble(list(range(4)), sc, areas, paths)
        frames = render_frames(sc, res.trajectories, 12)
        assert len(frames) == 12
        for svg in frames:
            assert _count(svg, "circle", "robot") == 4
        # robots start at starts and finish at targets
        first = {(cx, cy) for cx, cy, _ in _circles(frames[0], "robot")}
        last = {(cx, cy) for cx, cy, _ in _circles(frames[-1], "robot")}
        assert first == {(p.x, p.y) for p in sc.starts}
        assert last == {(p.x, p.y) for p in sc.targets}
