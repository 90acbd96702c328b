"""Clearance and recontamination dynamics of a search strategy.

An edge is cleared when both ends carry a searcher. A cleared edge ``(u, v)``
becomes contaminated again as soon as some contaminated edge's end node
reaches ``u`` along a directed path with no searcher on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import DirectedGraph, Edge
from .strategy import SearchStrategy


class StrategyError(ValueError):
    pass


@dataclass
class ClearanceTrace:
    """Step-by-step outcome of :func:`simulate`.

    ``E_i`` sets are stored as deltas; :meth:`cleared_at` rebuilds one.
    Steps are numbered from 1.
    """

    edges: tuple[Edge, ...]
    newly_cleared: list[list[int]]
    recontaminations: list[tuple[Edge, int]]
    final_clear_step: list[int]
    new_nodes_per_step: list[int]
    searchers: int
    first_witness: list[int] | None = None

    @property
    def length(self) -> int:
        return len(self.newly_cleared)

    @property
    def final_cleared(self) -> bool:
        return all(self.final_clear_step)

    def cleared_at(self, step: int) -> set[Edge]:
        if not 0 <= step <= self.length:
            raise IndexError(step)
        clean: set[int] = set()
        lost: dict[int, list[int]] = {}
        for (u, v), i in self.recontaminations:
            lost.setdefault(i, []).append(self.edges.index((u, v)))
        for i in range(1, step + 1):
            clean.difference_update(lost.get(i, ()))
            clean.update(self.newly_cleared[i - 1])
        return {self.edges[e] for e in clean}

    def contaminated_edges(self) -> list[Edge]:
        return [self.edges[i] for i, t in enumerate(self.final_clear_step) if not t]


def _check_steps(g: DirectedGraph, strategy: SearchStrategy) -> list[frozenset[int]]:
    steps = []
    for i, step in enumerate(strategy.steps, 1):
        nodes = frozenset(step)
        for v in nodes:
            if not 0 <= v < g.n:
                raise StrategyError(f"step {i}: node {v} not in graph")
        if len(nodes) > strategy.searchers:
            raise StrategyError(f"step {i}: {len(nodes)} searchers placed, budget is {strategy.searchers}")
        steps.append(nodes)
    return steps


def simulate(g: DirectedGraph, strategy: SearchStrategy) -> ClearanceTrace:
    """Run ``strategy`` on ``g`` and record what is cleared when.

    Incremental: only nodes that gain a searcher can clear edges and only
    nodes that lose one can start a recontamination cascade, so each step
    costs the degrees of the nodes that changed plus the cascade itself.
    """
    steps = _check_steps(g, strategy)
    n, m = g.n, g.m
    index = g.edge_index()
    out_e = [[(v, index[u, v]) for v in g.out_adj[u]] for u in range(n)]
    in_e = [[(w, index[w, u]) for w in g.in_adj[u]] for u in range(n)]

    clean = bytearray(m)
    dirty_in = [len(a) for a in g.in_adj]  # contaminated in-edges per node
    guarded = bytearray(n)
    seen = bytearray(n)
    final_step = [0] * m
    newly_cleared: list[list[int]] = []
    recont: list[tuple[Edge, int]] = []
    new_nodes: list[int] = []
    witness = None
    prev: frozenset[int] = frozenset()

    for i, cur in enumerate(steps, 1):
        removed = sorted(prev - cur)
        placed = sorted(cur - prev)
        for v in removed:
            guarded[v] = 0
        fresh = 0
        for v in placed:
            guarded[v] = 1
            if not seen[v]:
                seen[v] = 1
                fresh += 1
        new_nodes.append(fresh)

        now: list[int] = []
        for u in placed:
            for v, e in out_e[u]:
                if guarded[v] and not clean[e]:
                    clean[e] = 1
                    dirty_in[v] -= 1
                    final_step[e] = i
                    now.append(e)
            for w, e in in_e[u]:
                if guarded[w] and not clean[e]:
                    clean[e] = 1
                    dirty_in[u] -= 1
                    final_step[e] = i
                    now.append(e)
        now.sort()
        newly_cleared.append(now)

        # Invariant between steps: an unguarded node with a contaminated
        # in-edge has only contaminated out-edges.
        pred: dict[int, int] = {}
        stack = [v for v in removed if dirty_in[v]]
        for v in stack:
            pred[v] = -1
        stack.reverse()
        while stack:
            u = stack.pop()
            for v, e in out_e[u]:
                if clean[e]:
                    clean[e] = 0
                    final_step[e] = 0
                    recont.append(((u, v), i))
                    if witness is None:
                        witness = _witness_path(u, pred, in_e, clean, guarded)
                    dirty_in[v] += 1
                    if not guarded[v] and dirty_in[v] == 1:
                        pred[v] = u
                        stack.append(v)
        prev = cur

    return ClearanceTrace(g.edges, newly_cleared, recont, final_step, new_nodes,
                          strategy.searchers, witness)


def _witness_path(u, pred, in_e, clean, guarded) -> list[int]:
    chain = [u]
    while pred[chain[-1]] != -1:
        chain.append(pred[chain[-1]])
    root = chain[-1]
    src = next(w for w, e in in_e[root] if not clean[e])
    chain.append(src)
    chain.reverse()
    return chain  # contaminated edge (chain[0], chain[1]), then unguarded path to u


def simulate_reference(g: DirectedGraph, strategy: SearchStrategy) -> list[set[Edge]]:
    """``E_1..E_t`` by recomputing reachability from scratch each step.

    Slow and literal; kept as an independent check on :func:`simulate`.
    """
    steps = _check_steps(g, strategy)
    cleared: set[Edge] = set()
    out: list[set[Edge]] = []
    for guards in steps:
        keep = {(u, v) for u, v in g.edges if u in guards and v in guards}
        cand = cleared | keep
        while True:
            dirty = [v for (u, v) in g.edges if (u, v) not in cand]
            reach = set()
            stack = [v for v in dirty if v not in guards]
            while stack:
                x = stack.pop()
                if x in reach:
                    continue
                reach.add(x)
                stack.extend(y for y in g.out_adj[x] if y not in guards and y not in reach)
            drop = {e for e in cand if e not in keep and e[0] in reach}
            if not drop:
                break
            cand -= drop
        cleared = cand
        out.append(set(cleared))
    return out


@dataclass
class Validation:
    ok: bool
    trace: ClearanceTrace | None
    message: str = ""
    step: int | None = None
    edge: Edge | None = None
    witness: list[int] = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def describe(self, label=lambda v: v) -> str:
        if self.ok:
            return "valid"
        parts = [self.message]
        if self.edge is not None:
            parts.append(f"edge ({label(self.edge[0])}, {label(self.edge[1])})")
        if self.witness:
            parts.append("unguarded path " + " -> ".join(str(label(v)) for v in self.witness))
        return "; ".join(parts)


def validate(g: DirectedGraph, strategy: SearchStrategy) -> Validation:
    """Check that ``strategy`` leaves every edge of ``g`` cleared.

    On failure the diagnostic names the first step that went wrong: the
    first recontamination if the final state is dirty because of one,
    otherwise the last step and an edge that was never cleared.
    """
    try:
        trace = simulate(g, strategy)
    except StrategyError as exc:
        step = int(str(exc).split()[1].rstrip(":")) if str(exc).startswith("step") else None
        return Validation(False, None, str(exc), step=step)
    if trace.final_cleared:
        return Validation(True, trace)
    dirty = trace.contaminated_edges()
    if trace.recontaminations:
        edge, step = trace.recontaminations[0]
        return Validation(False, trace, f"step {step}: cleared edge recontaminated",
                          step, edge, trace.first_witness or [])
    step = max(trace.length, 1)
    return Validation(False, trace,
                      f"step {step}: {len(dirty)} edge(s) still contaminated after the final step",
                      step, dirty[0])


def lower_bound(n: int, s: int) -> int:
    """Fewest steps any ``s``-searcher strategy needs on a connected ``n``-node digraph."""
    if s < 2:
        raise ValueError("need at least two searchers")
    if n < 1:
        raise ValueError("need at least one node")
    if s >= n:
        return 1
    return -(-(n - s) // (s - 1)) + 1


def loss_max(n: int, s: int) -> int:
    """Largest loss that still allows finishing in ``lower_bound(n, s)`` steps."""
    if s >= n:
        return 0
    return (-(-(n - s) // (s - 1))) * (s - 1) - (n - s)


@dataclass
class LossReport:
    total_loss: int
    per_step_loss: list[int]
    loss_max_bound: int
    predicted_length: int
    population: int


def loss_of(trace: ClearanceTrace, strategy: SearchStrategy, n: int | None = None) -> LossReport:
    """Shortfall of each step against the ideal pace.

    Ideal is ``s`` new nodes in the first step and ``s - 1`` afterwards.
    Middle steps count their shortfall signed, so a step that opens a fresh
    region with ``s`` new nodes pays back one unit. The final step is free
    unless it visits no new node at all (a full ``s - 1`` loss) or visits
    ``s`` (pays back one). ``n`` defaults to the number of visited nodes;
    with that default ``predicted_length`` equals the true length.
    """
    if not trace.final_cleared:
        raise StrategyError("loss is only defined for a strategy that clears the graph")
    s = strategy.searchers
    if s < 2:
        raise ValueError("need at least two searchers")
    new = trace.new_nodes_per_step
    t = len(new)
    if n is None:
        n = sum(new)
    if t == 0:
        return LossReport(0, [], 0, 0, n)
    if t == 1:
        per = [0]
    else:
        per = [s - new[0]]
        per += [(s - 1) - k for k in new[1:-1]]
        per.append(s - 1 if new[-1] == 0 else min(0, (s - 1) - new[-1]))
    total = sum(per)
    predicted = -(-(n - s + total) // (s - 1)) + 1
    return LossReport(total, per, loss_max(n, s) if n >= 1 else 0, predicted, n)
