"""Execution-order selection.

A robot moving along its initial path may pass close to another robot's start
or target. Each maximal stretch of the path inside the radius-3 (or radius-1)
disc around the other position's revolving-area center is one interference,
recorded as a directed edge "this robot should move first" with multiplicity.
The planner then wants an order with few back-edges; we provide the two-level
SCC heuristic and a factorial brute-force oracle for small instances.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .coordinate import B_RADIUS, C_RADIUS, CircleSpec, compute_crossings
from .errors import RefinementViolated, TooLarge
from .geom import Polycurve
from .revolve import RevolvingArea


@dataclass
class InterferenceGraph:
    """Directed multigraph on robot indices; edge (u, v) reads "u before v"."""

    m: int
    radius: float
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, u: int, v: int, count: int = 1) -> None:
        if u == v:
            raise ValueError("self-interference is not recorded")
        self.edges[(u, v)] = self.edges.get((u, v), 0) + count

    @property
    def total_multiplicity(self) -> int:
        return sum(self.edges.values())

    def successors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for u, v in self.edges:
            adj[u].append(v)
        for row in adj:
            row.sort()
        return adj


def build_interference_graphs(initial_paths: Sequence[Polycurve],
                              areas: Sequence[RevolvingArea],
                              ) -> tuple[InterferenceGraph, InterferenceGraph]:
    """Interference graphs at neighborhood radii 3 and 1.

    areas[i] / areas[m+i] are the revolving areas of robot i's start / target,
    matching revolve.position_list order. An interval of path i inside the
    disc around start_j's center yields edge (j, i): j must vacate first. An
    interval inside the disc around target_j's center yields edge (i, j):
    i should pass before j arrives.
    """
    m = len(initial_paths)
    g_b = InterferenceGraph(m, B_RADIUS)
    g_c = InterferenceGraph(m, C_RADIUS)
    for g, label in ((g_b, "B"), (g_c, "C")):
        for i, path in enumerate(initial_paths):
            specs = []
            for j in range(m):
                if j == i:
                    continue
                specs.append(CircleSpec(j, areas[j].c, g.radius, label))
                specs.append(CircleSpec(m + j, areas[m + j].c, g.radius, label))
            for ev in compute_crossings(path, specs):
                if ev.kind != "entrance":
                    continue
                if ev.owner < m:
                    g.add(ev.owner, i)
                else:
                    g.add(i, ev.owner - m)
    return g_b, g_c


def count_interferences(order: Sequence[int], g: InterferenceGraph) -> int:
    """Back-edge multiplicity: edges (u, v) where u moves after v."""
    pos = [0] * g.m
    for k, r in enumerate(order):
        pos[r] = k
    return sum(mult for (u, v), mult in g.edges.items() if pos[u] > pos[v])


# ---------------------------------------------------------------------------
# Strongly connected components and condensation ranks
# ---------------------------------------------------------------------------

def _scc(m: int, adj: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Tarjan, iterative. Returns (component id per vertex, component count)."""
    comp = [-1] * m
    index = [-1] * m
    low = [0] * m
    on_stack = [False] * m
    stack: list[int] = []
    n_comp = 0
    counter = 0
    for root in range(m):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if pi < len(adj[v]):
                work[-1] = (v, pi + 1)
                w = adj[v][pi]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            else:
                work.pop()
                if work and low[v] < low[work[-1][0]]:
                    low[work[-1][0]] = low[v]
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = n_comp
                        if w == v:
                            break
                    n_comp += 1
    return comp, n_comp


def _condensation_ranks(g: InterferenceGraph, comp: list[int], n_comp: int,
                        tie_rank: Sequence[int]) -> list[int]:
    """Topological rank per component; incomparable components are popped in
    ascending order of their best vertex tie rank, so that components left
    unconstrained by the graph follow the seeded permutation."""
    succ: list[set[int]] = [set() for _ in range(n_comp)]
    indeg = [0] * n_comp
    for u, v in g.edges:
        cu, cv = comp[u], comp[v]
        if cu != cv and cv not in succ[cu]:
            succ[cu].add(cv)
            indeg[cv] += 1
    best = [g.m] * n_comp
    for v in range(g.m):
        if tie_rank[v] < best[comp[v]]:
            best[comp[v]] = tie_rank[v]
    heap = [(best[c], c) for c in range(n_comp) if indeg[c] == 0]
    heapq.heapify(heap)
    rank = [-1] * n_comp
    r = 0
    while heap:
        _, c = heapq.heappop(heap)
        rank[c] = r
        r += 1
        for d in sorted(succ[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, (best[d], d))
    assert r == n_comp, "condensation is cyclic"
    return rank


def heuristic_order(g_b: InterferenceGraph, g_c: InterferenceGraph,
                    seed: int) -> list[int]:
    """Three-rule order: coarse SCC rank, fine SCC rank, then a seeded shuffle.

    Robot i precedes j if its radius-3 SCC has smaller topological rank; on a
    tie, if its radius-1 SCC has smaller rank; on a full tie, a seeded random
    permutation decides. Raises RefinementViolated if some radius-1 SCC spans
    two radius-3 SCCs, which cannot happen for graphs built from the same
    paths and signals a construction bug.
    """
    m = g_b.m
    if g_c.m != m:
        raise RefinementViolated(f"vertex counts differ: {g_b.m} vs {g_c.m}")
    comp_b, nb = _scc(m, g_b.successors())
    comp_c, nc = _scc(m, g_c.successors())
    spans: dict[int, int] = {}
    for v in range(m):
        prev = spans.setdefault(comp_c[v], comp_b[v])
        if prev != comp_b[v]:
            raise RefinementViolated(
                f"radius-1 SCC of vertex {v} spans two radius-3 SCCs")
    shuffled = list(range(m))
    random.Random(seed).shuffle(shuffled)
    tie_rank = [0] * m
    for k, v in enumerate(shuffled):
        tie_rank[v] = k
    rank_b = _condensation_ranks(g_b, comp_b, nb, tie_rank)
    rank_c = _condensation_ranks(g_c, comp_c, nc, tie_rank)
    return sorted(range(m), key=lambda v: (rank_b[comp_b[v]],
                                           rank_c[comp_c[v]], tie_rank[v]))


def optimal_order_bruteforce(g: InterferenceGraph) -> tuple[list[int], int]:
    """Exhaustive minimum back-edge order; first lexicographic minimizer."""
    if g.m > 9:
        raise TooLarge(f"brute force capped at 9 robots, got {g.m}")
    edge_list = [(u, v, mult) for (u, v), mult in sorted(g.edges.items())]
    pos = [0] * g.m
    best: tuple[int, ...] | None = None
    best_count = -1
    for perm in permutations(range(g.m)):
        for k, r in enumerate(perm):
            pos[r] = k
        c = 0
        for u, v, mult in edge_list:
            if pos[u] > pos[v]:
                c += mult
        if best is None or c < best_count:
            best, best_count = perm, c
    return list(best), best_count


def to_dot(g: InterferenceGraph, name: str = "interference") -> str:
    """DOT dump for eyeballing; multiplicity becomes an edge label."""
    lines = [f"digraph {name} {{"]
    for v in range(g.m):
        lines.append(f"  {v};")
    for (u, v), mult in sorted(g.edges.items()):
        label = f" [label={mult}]" if mult > 1 else ""
        lines.append(f"  {u} -> {v}{label};")
    lines.append("}")
    return "\n".join(lines)
