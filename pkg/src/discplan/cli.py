"""Command-line surface: generate, plan, validate, render, bench.

Exit codes: 0 success, 2 planner assumption violated (no revolving area),
3 no collision-free initial path, 4 validation failed. Identical inputs and
seed produce byte-identical output files regardless of --workers.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from . import coordinate, order as order_mod, render, revolve, trajfile
from .errors import (AssumptionViolated, NoPath, StartBlocked, TargetBlocked)
from .geom import Polycurve
from .scenario import (Scenario, generate_bad_input, generate_grid,
                       generate_triangles, generate_tunnel,
                       load_scenario_path, save_scenario_path)
from .spp import TangentGraph
from .validate import report_to_text, validate

EXIT_OK = 0
EXIT_ASSUMPTION = 2
EXIT_NO_PATH = 3
EXIT_INVALID = 4


@dataclass
class PlanOutcome:
    scenario: Scenario
    areas: list
    initial_paths: list[Polycurve]
    graph_b: order_mod.InterferenceGraph
    graph_c: order_mod.InterferenceGraph
    order: list[int]
    result: coordinate.PlanResult
    wall_time: float


def compute_initial_paths(scenario: Scenario,
                          workers: int = 1) -> list[Polycurve]:
    graph = TangentGraph(scenario.obstacles)

    def query(i: int) -> Polycurve:
        try:
            return graph.shortest_path(scenario.starts[i],
                                       scenario.targets[i])
        except (StartBlocked, TargetBlocked, NoPath) as e:
            raise type(e)(f"robot {i}: {e}") from None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(query, range(scenario.m)))
    return [query(i) for i in range(scenario.m)]


def plan_scenario(scenario: Scenario, order_mode: str = "heuristic",
                  seed: int = 0, workers: int = 1,
                  initial_paths: Sequence[Polycurve] | None = None,
                  ) -> PlanOutcome:
    t0 = time.perf_counter()
    areas = revolve.find_all(scenario)
    paths = (list(initial_paths) if initial_paths is not None
             else compute_initial_paths(scenario, workers))
    g_b, g_c = order_mod.build_interference_graphs(paths, areas)
    if order_mode == "given":
        execution = list(range(scenario.m))
    elif order_mode == "heuristic":
        execution = order_mod.heuristic_order(g_b, g_c, seed)
    elif order_mode == "bruteforce":
        execution = order_mod.optimal_order_bruteforce(g_b)[0]
    else:
        raise ValueError(f"unknown order mode {order_mode!r}")
    result = coordinate.assemble(execution, scenario, areas, paths)
    return PlanOutcome(scenario, areas, paths, g_b, g_c, execution, result,
                       time.perf_counter() - t0)


def _summary(out: PlanOutcome) -> str:
    sc = out.scenario
    before = order_mod.count_interferences(list(range(sc.m)), out.graph_b)
    after = order_mod.count_interferences(out.order, out.graph_b)
    lines = [
        f"scenario {sc.name} robots {sc.m} obstacle_vertices {sc.vertex_count}",
        f"order {' '.join(str(r) for r in out.order)}",
        f"interferences given {before} chosen {after}",
    ]
    res = out.result
    for i, st in enumerate(res.stats):
        lines.append(f"robot {i} initial {st.initial_length:.6f} "
                     f"moved {st.modified_length:.6f} "
                     f"detours {st.c_detours} crossings {st.b_events}")
    ratio = res.total_final / res.total_initial if res.total_initial else 1.0
    lines.append(f"total initial {res.total_initial:.6f} "
                 f"final {res.total_final:.6f} ratio {ratio:.6f}")
    lines.append(f"wall_time {out.wall_time:.3f}s")
    return "\n".join(lines)


def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "grid":
        sc = generate_grid(args.m, args.seed)
    elif args.kind == "triangles":
        sc = generate_triangles(args.m, args.triangles, args.seed)
    elif args.kind == "tunnel":
        sc = generate_tunnel(args.m, args.version)
    else:
        sc = generate_bad_input(args.n)
    save_scenario_path(sc, args.out)
    print(f"wrote {args.out}: {sc.m} robots, "
          f"{len(sc.obstacles)} obstacles, {sc.vertex_count} vertices")
    return EXIT_OK


def cmd_plan(args: argparse.Namespace) -> int:
    scenario = load_scenario_path(args.scenario)
    out = plan_scenario(scenario, args.order, args.seed, args.workers)
    if args.out:
        trajfile.save_trajectories_path(out.result.trajectories, args.out)
    print(_summary(out))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario_path(args.scenario)
    trajectories = trajfile.load_trajectories_path(args.trajectories)
    initial_paths = compute_initial_paths(scenario, args.workers)
    report = validate(trajectories, scenario, initial_paths,
                      dt_max=args.dt_max, eps=args.eps)
    text = report_to_text(report)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    print(text, end="")
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_render(args: argparse.Namespace) -> int:
    scenario = load_scenario_path(args.scenario)
    areas = revolve.find_all(scenario)
    trajectories = None
    initial_paths = None
    if args.trajectories:
        trajectories = trajfile.load_trajectories_path(args.trajectories)
        initial_paths = compute_initial_paths(scenario, args.workers)
    if args.mode == "static":
        svg = render.render_static(scenario, areas, initial_paths,
                                   trajectories)
        with open(args.out, "w") as fh:
            fh.write(svg)
        print(f"wrote {args.out}")
    else:
        if trajectories is None:
            print("frames mode needs --trajectories", file=sys.stderr)
            return EXIT_INVALID
        frames = render.render_frames(scenario, trajectories, args.frames,
                                      areas)
        stem = args.out[:-4] if args.out.endswith(".svg") else args.out
        for k, svg in enumerate(frames):
            with open(f"{stem}_{k:04d}.svg", "w") as fh:
                fh.write(svg)
        print(f"wrote {len(frames)} frames to {stem}_*.svg")
    return EXIT_OK


_SUITES = {
    "grid": [4, 9, 16],
    "triangles": [20],
    "tunnel1": [4, 8, 12],
    "tunnel2": [4, 8, 12],
}


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = ([int(s) for s in args.sizes.split(",")] if args.sizes
             else _SUITES[args.suite])
    rows = []
    for m in sizes:
        if args.suite == "grid":
            sc = generate_grid(m, args.seed)
        elif args.suite == "triangles":
            sc = generate_triangles(m, 10, args.seed)
        elif args.suite == "tunnel1":
            sc = generate_tunnel(m, "I")
        else:
            sc = generate_tunnel(m, "II")
        t0 = time.perf_counter()
        paths = compute_initial_paths(sc, args.workers)
        row = {"m": m, "n": sc.vertex_count}
        for mode in ("given", "heuristic"):
            out = plan_scenario(sc, mode, args.seed, args.workers,
                                initial_paths=paths)
            report = validate(out.result.trajectories, sc, paths,
                              eps=args.eps)
            row[f"ratio_{mode}"] = report.dist_ratio
            row[f"ok_{mode}"] = report.ok
        row["time"] = time.perf_counter() - t0
        rows.append(row)
        print(f"{args.suite} m={m}: time {row['time']:.2f}s "
              f"ratio given {row['ratio_given']:.4f} "
              f"heuristic {row['ratio_heuristic']:.4f} "
              f"ok {row['ok_given'] and row['ok_heuristic']}")
    header = "m\tn\ttime_s\tratio_given\tratio_heuristic\tok"
    lines = [header]
    for r in rows:
        ok = r["ok_given"] and r["ok_heuristic"]
        lines.append(f"{r['m']}\t{r['n']}\t{r['time']:.3f}\t"
                     f"{r['ratio_given']:.6f}\t{r['ratio_heuristic']:.6f}\t"
                     f"{'yes' if ok else 'NO'}")
    table = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table)
    if not all(r["ok_given"] and r["ok_heuristic"] for r in rows):
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="discplan",
        description="Decoupled multi-robot disc planner")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a scenario file")
    gsub = g.add_subparsers(dest="kind", required=True)
    gg = gsub.add_parser("grid")
    gg.add_argument("--m", type=int, required=True)
    gg.add_argument("--seed", type=int, default=0)
    gt = gsub.add_parser("triangles")
    gt.add_argument("--m", type=int, required=True)
    gt.add_argument("--triangles", type=int, default=10)
    gt.add_argument("--seed", type=int, default=0)
    gu = gsub.add_parser("tunnel")
    gu.add_argument("--m", type=int, required=True)
    gu.add_argument("--version", choices=("I", "II"), required=True)
    gb = gsub.add_parser("bad-input")
    gb.add_argument("--n", type=int, required=True)
    for sp in (gg, gt, gu, gb):
        sp.add_argument("--out", required=True)
        sp.set_defaults(func=cmd_generate)

    p = sub.add_parser("plan", help="plan trajectories for a scenario")
    p.add_argument("scenario")
    p.add_argument("--order", choices=("given", "heuristic", "bruteforce"),
                   default="heuristic")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    v = sub.add_parser("validate", help="check a trajectory file")
    v.add_argument("scenario")
    v.add_argument("trajectories")
    v.add_argument("--dt-max", type=float, default=0.05)
    v.add_argument("--eps", type=float, default=1e-6)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--report", default=None)
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("render", help="draw a scenario (and trajectories)")
    r.add_argument("scenario")
    r.add_argument("--trajectories", default=None)
    r.add_argument("--mode", choices=("static", "frames"), default="static")
    r.add_argument("--frames", type=int, default=30)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", choices=tuple(_SUITES), required=True)
    b.add_argument("--sizes", default=None,
                   help="comma-separated m values overriding the default")
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--eps", type=float, default=1e-6)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssumptionViolated as e:
        print(f"assumption violated: {e}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (StartBlocked, TargetBlocked, NoPath) as e:
        print(f"no path: {e}", file=sys.stderr)
        return EXIT_NO_PATH


if __name__ == "__main__":
    sys.exit(main())
