"""The Plank strategy: a guarded depth-first edge ordering packed into steps."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .dynamics import ClearanceTrace, simulate, validate
from .graph import DirectedGraph, Edge, topological_order
from .reduction import ReductionPlan, SlidingSchedule, build_reduction, sliding_schedule
from .strategy import SearchStrategy


class InternalError(RuntimeError):
    """A produced strategy failed validation. Always a bug, never bad input."""


@dataclass(frozen=True)
class EdgeOrdering:
    edges: tuple[Edge, ...]

    @property
    def covered_edges(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)


def mdfs(g: DirectedGraph) -> EdgeOrdering:
    """Depth-first edge ordering that never leaves a node with unexplored in-edges.

    The walk starts at the smallest source, takes out-edges by ascending
    target and backtracks at any node that still has an unexplored in-edge.
    When it runs dry it restarts at the smallest node with no unexplored
    in-edge and an unexplored out-edge. On a DAG every such node is a
    source, since any other node is expanded as soon as its last in-edge is
    explored.
    """
    topological_order(g)
    out = g.out_adj
    waiting = [len(a) for a in g.in_adj]
    nxt = [0] * g.n
    starts = [v for v in range(g.n) if not waiting[v] and out[v]]
    heapq.heapify(starts)
    psi: list[Edge] = []
    while starts:
        root = heapq.heappop(starts)
        stack = [root]
        while stack:
            v = stack[-1]
            if nxt[v] == len(out[v]):
                stack.pop()
                continue
            w = out[v][nxt[v]]
            nxt[v] += 1
            psi.append((v, w))
            waiting[w] -= 1
            if not waiting[w]:
                stack.append(w)
    if len(psi) != g.m:
        raise InternalError(f"mdfs covered {len(psi)} of {g.m} edges")
    return EdgeOrdering(tuple(psi))


def construct_strategy(psi: EdgeOrdering | Sequence[Edge], s: int) -> SearchStrategy:
    """Pack an mdfs ordering into steps of at most ``s`` placements.

    Edges are taken in order; each adds whichever endpoints the current step
    lacks. If only one slot is left for an edge needing two, the start node
    takes it, the step closes and the edge is retried in the next step.

    On closing a step, the edges it handled count as cleared, and so does
    any other edge inside the step whose start node has all in-edges
    cleared. Edges inside the step that fail that test stay pending: they
    would be recontaminated as soon as the step's searchers move on.
    """
    if s < 2:
        raise ValueError("Plank needs at least two searchers")
    edges = list(psi)
    pos = {e: i for i, e in enumerate(edges)}
    out_of: dict[int, list[int]] = {}
    waiting: dict[int, int] = {}  # uncleared in-edges per node
    for u, v in edges:
        out_of.setdefault(u, []).append(v)
        waiting[v] = waiting.get(v, 0) + 1
    cleared = bytearray(len(edges))
    steps: list[tuple[int, ...]] = []
    step: list[int] = []
    here: set[int] = set()
    handled: list[int] = []

    def mark(i):
        cleared[i] = 1
        v = edges[i][1]
        waiting[v] -= 1

    def close():
        for i in handled:
            mark(i)
        work = [x for x in step if not waiting.get(x, 0)]
        while work:
            x = work.pop()
            for y in out_of.get(x, ()):
                if y in here:
                    i = pos[x, y]
                    if not cleared[i]:
                        mark(i)
                        if not waiting[y]:
                            work.append(y)
        steps.append(tuple(step))
        step.clear()
        here.clear()
        handled.clear()

    i = 0
    while i < len(edges):
        if cleared[i]:
            i += 1
            continue
        u, v = edges[i]
        need = [x for x in (u, v) if x not in here]
        if len(here) + len(need) <= s:
            step.extend(need)
            here.update(need)
            handled.append(i)
            i += 1
        else:
            step.append(u)
            here.add(u)
        if len(here) == s:
            close()
    if step:
        close()
    return SearchStrategy(tuple(steps), s)


def plank(dag: DirectedGraph, s: int) -> SearchStrategy:
    strategy = construct_strategy(mdfs(dag), s)
    check = validate(dag, strategy)
    if not check:
        raise InternalError("Plank produced an invalid strategy: " + check.describe())
    return strategy


@dataclass
class DigraphResult:
    plan: ReductionPlan
    strategy: SearchStrategy  # on plan.graph, permanent guards in every step
    dag_strategy: SearchStrategy  # on plan.dag
    schedule: SlidingSchedule
    trace: ClearanceTrace
    searchers: int

    @property
    def population(self) -> int:
        """Nodes the moving searchers must visit."""
        return len({v for step in self.dag_strategy.steps for v in step})


def search_digraph(g: DirectedGraph, s: int, k: int = 0) -> DigraphResult:
    """Guard a feedback vertex set (plus a k-hubset) and run Plank on the rest.

    Nodes left isolated in the DAG but adjacent to a guard in ``g`` never
    appear in the Plank ordering; they are swept up in trailing steps.
    """
    plan = build_reduction(g, k)
    dag = plan.dag
    inner = plank(dag, s) if dag.m else SearchStrategy((), s)
    stranded = [v for v in range(dag.n)
                if not dag.out_adj[v] and not dag.in_adj[v] and g.degree(plan.dag_nodes[v])]
    extra = tuple(tuple(stranded[i:i + s]) for i in range(0, len(stranded), s))
    steps = inner.steps + extra
    if not steps and g.m:
        steps = ((),)  # every edge joins two guards; one guard-only step clears them
    inner = SearchStrategy(steps, s)
    combined = inner.relabel(plan.dag_nodes).with_permanent(sorted(plan.permanent_guards))
    check = validate(g, combined)
    if not check:
        raise InternalError("combined digraph strategy is invalid: " + check.describe())
    schedule = sliding_schedule(plan, combined, check.trace, s)
    return DigraphResult(plan, combined, inner, schedule, check.trace, s)
