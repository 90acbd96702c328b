"""Reference points for Plank: exact search time on tiny graphs, and a splitting strategy."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .dynamics import validate
from .graph import DirectedGraph, is_acyclic, topological_order
from .plank import InternalError, plank
from .strategy import SearchStrategy

MAX_ORACLE_NODES = 12


@dataclass
class OracleResult:
    optimal_length: int | None
    witness: SearchStrategy | None
    explored_states: int
    max_t: int

    @property
    def exceeded(self) -> bool:
        return self.optimal_length is None


class _Bits:
    """Clearance transition on bitmasks: edges as bits of the cleared set, nodes as guard bits."""

    def __init__(self, g: DirectedGraph):
        self.g = g
        self.full = (1 << g.m) - 1
        self.ends = [(1 << u, 1 << v) for u, v in g.edges]
        self.in_edges = [0] * g.n
        self.out_nodes = [sum(1 << w for w in g.out_adj[v]) for v in range(g.n)]
        self.starting = [0] * g.n
        for i, (u, v) in enumerate(g.edges):
            self.starting[u] |= 1 << i
            self.in_edges[v] |= 1 << i
        self._inside: dict[int, int] = {}

    def inside(self, guards: int) -> int:
        mask = self._inside.get(guards)
        if mask is None:
            mask = 0
            for i, (bu, bv) in enumerate(self.ends):
                if guards & bu and guards & bv:
                    mask |= 1 << i
            self._inside[guards] = mask
        return mask

    def step(self, cleared: int, guards: int) -> int:
        cand = cleared | self.inside(guards)
        dirty = self.full & ~cand
        frontier = 0
        for v, mask in enumerate(self.in_edges):
            if mask & dirty and not guards >> v & 1:
                frontier |= 1 << v
        reach = 0
        while frontier:
            reach |= frontier
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= self.out_nodes[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~guards & ~reach
        r = reach
        while r:
            low = r & -r
            cand &= ~self.starting[low.bit_length() - 1]
            r ^= low
        return cand


def _placements(n: int, s: int, prune: bool) -> list[int]:
    sizes = [min(s, n)] if prune else range(1, min(s, n) + 1)
    return [sum(1 << v for v in combo) for k in sizes for combo in combinations(range(n), k)]


def exact_search_time(g: DirectedGraph, s: int, max_t: int | None = None, *, memo: bool = True,
                      prune: bool = True) -> OracleResult:
    """Fewest steps in which ``s`` searchers can clear ``g``, by exhaustive search.

    Level-by-level search over cleared-edge sets. The next cleared set
    depends only on the current one and the new placement, so cleared sets
    alone are memoised, and a state contained in a larger one of the same
    level is dropped since the transition is monotone in the cleared set.
    With
    ``prune`` only full-size placements that clear some uncleared edge are
    tried. That loses nothing: the transition is monotone in the guard set,
    and a step clearing nothing new leaves a subset of the cleared set it
    started from.
    ``memo=False`` switches to plain iterative deepening for cross-checking.

    ``max_t`` defaults to the Plank length on a DAG (an upper bound) and to
    ``2m`` otherwise. Returns an exceeded result rather than guessing when
    ``max_t`` steps do not suffice.
    """
    if s < 1:
        raise ValueError("need at least one searcher")
    if g.n > MAX_ORACLE_NODES:
        raise ValueError(f"exact search is limited to {MAX_ORACLE_NODES} nodes, got {g.n}")
    bits = _Bits(g)
    if g.m == 0:
        return OracleResult(0, SearchStrategy((), s), 1, max_t)
    if max_t is None:
        max_t = len(plank(g, s).steps) if s >= 2 and is_acyclic(g) else 2 * g.m
    placements = _placements(g.n, s, prune)

    def moves(state):
        if not prune:
            return placements
        return [p for p in placements if bits.inside(p) & ~state]

    def as_strategy(masks):
        steps = [tuple(v for v in range(g.n) if p >> v & 1) for p in masks]
        return SearchStrategy.of(steps, s)

    if not memo:
        explored = 0

        def dfs(state, depth, path):
            nonlocal explored
            for p in moves(state):
                explored += 1
                nxt = bits.step(state, p)
                if nxt == bits.full:
                    return path + [p]
                if depth > 1:
                    found = dfs(nxt, depth - 1, path + [p])
                    if found:
                        return found
            return None

        for t in range(1, max_t + 1):
            found = dfs(0, t, [])
            if found:
                return OracleResult(t, as_strategy(found), explored, max_t)
        return OracleResult(None, None, explored, max_t)

    parent: dict[int, tuple[int, int]] = {0: (-1, 0)}
    level = [0]
    for t in range(1, max_t + 1):
        found: dict[int, tuple[int, int]] = {}
        for state in level:
            for p in moves(state):
                nxt = bits.step(state, p)
                if nxt not in parent and nxt not in found:
                    found[nxt] = (state, p)
        if bits.full in found:
            path = []
            cur = bits.full
            parent.update(found)
            while cur:
                cur, move = parent[cur]
                path.append(move)
            return OracleResult(t, as_strategy(path[::-1]), len(parent), max_t)
        level = []
        larger: list[int] = []  # kept states with strictly more cleared edges
        size = -1
        for state in sorted(found, key=int.bit_count, reverse=True):
            if state.bit_count() != size:
                size = state.bit_count()
                larger = list(level)
            if any(not state & ~k for k in larger):
                continue
            parent[state] = found[state]
            level.append(state)
        if not level:
            break
    return OracleResult(None, None, len(parent), max_t)


def splitting_strategy(dag: DirectedGraph, s: int) -> SearchStrategy:
    """Breadth-first rival to Plank.

    Every step serves the open branches in ascending order of their head
    edge, placing both ends of each (two searchers per branch) while the
    budget lasts; searchers left over push the lowest branch deeper. A
    branch is never advanced past a node that still has an uncleared
    in-edge.
    """
    if s < 2:
        raise ValueError("splitting needs at least two searchers")
    topological_order(dag)
    index = dag.edge_index()
    cleared = bytearray(dag.m)
    waiting = [len(a) for a in dag.in_adj]
    left = dag.m
    steps = []
    while left:
        pending = list(waiting)
        here: set[int] = set()
        order: list[int] = []
        claimed: set[int] = set()

        def add(x):
            if x not in here:
                here.add(x)
                order.append(x)

        def claim(x, y):
            e = index[x, y]
            if e not in claimed and not cleared[e]:
                claimed.add(e)
                pending[y] -= 1

        ready = [(u, v) for u in range(dag.n) if not waiting[u]
                 for v in dag.out_adj[u] if not cleared[index[u, v]]]
        served = []
        for u, v in ready:
            cost = (u not in here) + (v not in here)
            if len(here) + cost > s:
                break
            add(u)
            add(v)
            claim(u, v)
            served.append(v)
        for tail in served:
            while len(here) < s and not pending[tail]:
                nxt = next((w for w in dag.out_adj[tail]
                            if not cleared[index[tail, w]] and index[tail, w] not in claimed), None)
                if nxt is None:
                    break
                add(nxt)
                claim(tail, nxt)
                tail = nxt
        # anything else inside the step whose start is safe clears too
        work = [x for x in order if not pending[x]]
        while work:
            x = work.pop()
            for y in dag.out_adj[x]:
                if y in here:
                    e = index[x, y]
                    if e not in claimed and not cleared[e]:
                        claim(x, y)
                        if not pending[y]:
                            work.append(y)
        for e in claimed:
            cleared[e] = 1
            waiting[dag.edges[e][1]] -= 1
        left -= len(claimed)
        steps.append(tuple(order))
    strategy = SearchStrategy(tuple(steps), s)
    check = validate(dag, strategy)
    if not check:
        raise InternalError("splitting strategy is invalid: " + check.describe())
    return strategy
