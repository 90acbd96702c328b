"""Turning a general digraph into a DAG by guarding a feedback vertex set."""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from typing import Iterable

from .dynamics import ClearanceTrace, StrategyError
from .graph import DirectedGraph, Edge, GraphError, NodeIdMap, induced_subgraph, topological_order
from .strategy import SearchStrategy


def eades_ordering(g: DirectedGraph) -> list[int]:
    """Greedy vertex sequence of Eades, Lin and Smyth.

    Sinks are peeled onto the tail, sources onto the head; otherwise the
    node with the largest ``outdeg - indeg`` goes to the head. Every choice
    takes the smallest id among equals.
    """
    n = g.n
    outd = [len(a) for a in g.out_adj]
    ind = [len(a) for a in g.in_adj]
    alive = bytearray(b"\x01") * n
    sinks = [v for v in range(n) if outd[v] == 0]
    sources = [v for v in range(n) if ind[v] == 0 and outd[v] > 0]
    delta = [(ind[v] - outd[v], v) for v in range(n)]
    heapq.heapify(sinks)
    heapq.heapify(sources)
    heapq.heapify(delta)
    head: list[int] = []
    tail: list[int] = []
    left = n

    def remove(v):
        nonlocal left
        alive[v] = 0
        left -= 1
        for w in g.out_adj[v]:
            if alive[w]:
                ind[w] -= 1
                if ind[w] == 0 and outd[w] > 0:
                    heapq.heappush(sources, w)
                heapq.heappush(delta, (ind[w] - outd[w], w))
        for w in g.in_adj[v]:
            if alive[w]:
                outd[w] -= 1
                if outd[w] == 0:
                    heapq.heappush(sinks, w)
                heapq.heappush(delta, (ind[w] - outd[w], w))

    while left:
        while sinks:
            v = heapq.heappop(sinks)
            if alive[v]:
                tail.append(v)
                remove(v)
        while sources:
            v = heapq.heappop(sources)
            if alive[v] and ind[v] == 0:
                head.append(v)
                remove(v)
        if not left:
            break
        while True:
            d, v = heapq.heappop(delta)
            if alive[v] and d == ind[v] - outd[v]:
                break
        head.append(v)
        remove(v)
    tail.reverse()
    return head + tail


def feedback_arc_set(g: DirectedGraph) -> list[Edge]:
    """Edges pointing backwards in :func:`eades_ordering`, ascending."""
    pos = [0] * g.n
    for i, v in enumerate(eades_ordering(g)):
        pos[v] = i
    return [(u, v) for u, v in g.edges if pos[u] > pos[v]]


def fvs_from_fas(g: DirectedGraph, fas: Iterable[Edge]) -> set[int]:
    """Guard the start node of each arc unless its end node is already guarded.

    Arcs are taken in ascending ``(start, end)`` order.
    """
    guards: set[int] = set()
    for u, v in sorted(fas):
        if not g.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge")
        if v in guards or u in guards:
            continue
        guards.add(u)
    return guards


def k_hubset(g: DirectedGraph, k: int) -> set[int]:
    """The ``k`` nodes of largest in+out degree, smaller ids first on ties."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k must lie in [0, {g.n}]")
    ranked = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    return set(ranked[:k])


@dataclass
class ReductionPlan:
    graph: DirectedGraph
    permanent_guards: frozenset[int]
    dag: DirectedGraph
    dag_nodes: tuple[int, ...]  # dag node i is graph node dag_nodes[i]
    hubset_k: int
    fas_size: int = 0
    fvs_size: int = 0

    @property
    def fvs_fraction(self) -> float:
        return len(self.permanent_guards) / self.graph.n


def build_reduction(g: DirectedGraph, k: int = 0) -> ReductionPlan:
    fas = feedback_arc_set(g)
    fvs = fvs_from_fas(g, fas)
    guards = fvs | k_hubset(g, k)
    if len(guards) == g.n:
        raise GraphError("every node became a permanent guard; nothing left to search")
    dag, kept = induced_subgraph(g, guards)
    topological_order(dag)  # raises CycleError if the heuristic ever failed
    return ReductionPlan(g, frozenset(guards), dag, kept, k, len(fas), len(fvs))


def write_plan(path: str | os.PathLike, plan: ReductionPlan, ids: NodeIdMap | None = None) -> None:
    lab = ids.to_external if ids is not None else (lambda v: v)
    with open(path, "w") as fh:
        g = plan.graph
        fh.write(f"# n={g.n} m={g.m} p={len(plan.permanent_guards)} k={plan.hubset_k}\n")
        for v in sorted(plan.permanent_guards):
            fh.write(f"{lab(v)}\n")


def read_plan(path: str | os.PathLike, g: DirectedGraph, ids: NodeIdMap | None = None) -> ReductionPlan:
    """Rebuild a plan for ``g`` from a guard file; the header must match ``g``."""
    resolve = ids.to_internal if ids is not None else int
    with open(path) as fh:
        header = fh.readline()
        meta = dict(tok.split("=") for tok in header.lstrip("#").split())
        if int(meta["n"]) != g.n or int(meta["m"]) != g.m:
            raise GraphError(f"plan was built for n={meta['n']} m={meta['m']}, graph has n={g.n} m={g.m}")
        guards = frozenset(resolve(int(ln)) for ln in fh if ln.strip())
    if len(guards) != int(meta["p"]):
        raise GraphError("guard count does not match header")
    dag, kept = induced_subgraph(g, guards)
    topological_order(dag)
    return ReductionPlan(g, guards, dag, kept, int(meta["k"]))


@dataclass
class SlidingSchedule:
    activation: dict[int, int] = field(default_factory=dict)
    deactivation: dict[int, int] = field(default_factory=dict)
    peak_concurrent: int = 0
    searchers: int = 0

    def active_at(self, step: int) -> set[int]:
        return {v for v, a in self.activation.items() if a <= step <= self.deactivation[v]}


def sliding_schedule(plan: ReductionPlan, strategy: SearchStrategy, trace: ClearanceTrace,
                     searchers: int) -> SlidingSchedule:
    """When each permanent guard is actually needed.

    ``strategy`` and ``trace`` describe the combined strategy on
    ``plan.graph`` (guards present in every step); ``searchers`` is the
    budget of the moving searchers alone. A guard switches on at the first
    step a non-guard neighbour is visited, or when a neighbouring guard
    switches on, whichever is earlier; it switches off once every edge
    touching it is cleared for good.
    """
    if not trace.final_cleared:
        raise StrategyError("sliding schedule needs a strategy that clears the graph")
    g = plan.graph
    guards = plan.permanent_guards
    if not guards:
        return SlidingSchedule(peak_concurrent=searchers, searchers=searchers)
    inf = len(strategy.steps) + 1
    first = [inf] * g.n
    for i, step in enumerate(strategy.steps, 1):
        for v in step:
            if v not in guards and first[v] == inf:
                first[v] = i
    act = {}
    for v in guards:
        nbrs = (*g.out_adj[v], *g.in_adj[v])
        act[v] = min((first[w] for w in nbrs if w not in guards), default=inf)
    # guards adjacent to guards share the earliest activation in their cluster
    heap = [(a, v) for v, a in act.items()]
    heapq.heapify(heap)
    while heap:
        a, v = heapq.heappop(heap)
        if a != act[v]:
            continue
        for w in (*g.out_adj[v], *g.in_adj[v]):
            if w in guards and act[w] > a:
                act[w] = a
                heapq.heappush(heap, (a, w))
    index = g.edge_index()
    deact = {}
    for v in guards:
        if act[v] == inf:  # a cluster touching no searched node: clear it in step 1
            act[v] = 1
        last = max((trace.final_clear_step[index[v, w]] for w in g.out_adj[v]), default=0)
        last = max([last, *(trace.final_clear_step[index[w, v]] for w in g.in_adj[v])])
        deact[v] = max(last, act[v])
    t = max(len(strategy.steps), 1)
    delta = [0] * (t + 2)
    for v in guards:
        delta[act[v]] += 1
        delta[deact[v] + 1] -= 1
    running = peak = 0
    for i in range(1, t + 1):
        running += delta[i]
        peak = max(peak, running)
    return SlidingSchedule(act, deact, peak + searchers, searchers)
