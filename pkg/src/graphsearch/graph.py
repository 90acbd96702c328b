"""Immutable directed graphs over dense integer ids, plus edge-list I/O."""
from __future__ import annotations

import heapq
import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, path, lineno: int, line: str):
        super().__init__(f"{path}:{lineno}: expected two integer labels, got {line.strip()!r}")
        self.lineno = lineno


class CycleError(GraphError):
    """Raised when an acyclic graph was required; ``cycle`` lists the nodes of one cycle."""

    def __init__(self, cycle: Sequence[int]):
        super().__init__("graph contains a cycle: " + " -> ".join(map(str, [*cycle, cycle[0]])))
        self.cycle = list(cycle)


class DirectedGraph:
    """Simple digraph on nodes ``0..n-1``.

    Duplicate edges are collapsed; self-loops are rejected. Adjacency lists are
    sorted ascending, which fixes every downstream tie-break.
    """

    __slots__ = ("n", "edges", "out_adj", "in_adj", "_index")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 1:
            raise GraphError("a graph needs at least one node")
        uniq = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            uniq.add((u, v))
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(uniq))
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            out_adj[u].append(v)
            in_adj[v].append(u)
        for lst in in_adj:
            lst.sort()
        self.out_adj = tuple(tuple(a) for a in out_adj)
        self.in_adj = tuple(tuple(a) for a in in_adj)
        self._index = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self) -> dict[Edge, int]:
        """Position of each edge in ``self.edges``."""
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.edges)}
        return self._index

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_index()

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def degree(self, v: int) -> int:
        return len(self.out_adj[v]) + len(self.in_adj[v])

    def non_isolated(self) -> list[int]:
        return [v for v in range(self.n) if self.out_adj[v] or self.in_adj[v]]

    def reverse(self) -> DirectedGraph:
        return DirectedGraph(self.n, ((v, u) for u, v in self.edges))

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"DirectedGraph(n={self.n}, m={self.m})"


@dataclass
class NodeIdMap:
    """Bijection between file labels and dense ids (first-appearance order)."""

    external_to_internal: dict[int, int] = field(default_factory=dict)
    internal_to_external: list[int] = field(default_factory=list)
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0

    def intern(self, label: int) -> int:
        idx = self.external_to_internal.get(label)
        if idx is None:
            idx = len(self.internal_to_external)
            self.external_to_internal[label] = idx
            self.internal_to_external.append(label)
        return idx

    def to_external(self, v: int) -> int:
        return self.internal_to_external[v]

    def to_internal(self, label: int) -> int:
        try:
            return self.external_to_internal[label]
        except KeyError:
            raise GraphError(f"unknown node label {label}") from None

    def compose(self, kept: Sequence[int]) -> NodeIdMap:
        """Map for a subgraph whose node ``i`` was node ``kept[i]`` here."""
        labels = [self.internal_to_external[v] for v in kept]
        return NodeIdMap({lab: i for i, lab in enumerate(labels)}, labels)

    @classmethod
    def identity(cls, n: int) -> NodeIdMap:
        return cls({i: i for i in range(n)}, list(range(n)))


def load_edge_list(path: str | os.PathLike, reverse: bool = False) -> tuple[DirectedGraph, NodeIdMap]:
    """Read a whitespace-separated ``u v`` edge list; ``#`` lines are comments.

    Self-loops and repeated edges are dropped and counted on the returned map.
    With ``reverse`` every edge ``(u, v)`` is stored as ``(v, u)``.
    """
    ids = NodeIdMap()
    edges: set[Edge] = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) < 2:
                raise EdgeListParseError(path, lineno, line)
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListParseError(path, lineno, line) from None
            u, v = ids.intern(a), ids.intern(b)
            if u == v:
                ids.self_loops_dropped += 1
                continue
            e = (v, u) if reverse else (u, v)
            if e in edges:
                ids.duplicates_dropped += 1
            else:
                edges.add(e)
    if not ids.internal_to_external:
        raise GraphError(f"{path}: no edges found")
    if ids.self_loops_dropped or ids.duplicates_dropped:
        log.info("%s: dropped %d self-loops, %d duplicate edges",
                 path, ids.self_loops_dropped, ids.duplicates_dropped)
    return DirectedGraph(len(ids.internal_to_external), edges), ids


def write_edge_list(path: str | os.PathLike, g: DirectedGraph, ids: NodeIdMap | None = None) -> None:
    lab = ids.to_external if ids is not None else (lambda v: v)
    with open(path, "w") as fh:
        fh.write(f"# nodes: {g.n} edges: {g.m}\n")
        for u, v in g.edges:
            fh.write(f"{lab(u)} {lab(v)}\n")


def weak_components(g: DirectedGraph) -> list[list[int]]:
    """Weakly connected components, each sorted, ordered by smallest member."""
    seen = bytearray(g.n)
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = 1
        comp, stack = [], [root]
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in (*g.out_adj[v], *g.in_adj[v]):
                if not seen[w]:
                    seen[w] = 1
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def is_weakly_connected(g: DirectedGraph) -> bool:
    return len(weak_components(g)) == 1


def induced_subgraph(g: DirectedGraph, removed: Iterable[int]) -> tuple[DirectedGraph, tuple[int, ...]]:
    """Delete ``removed`` and relabel densely.

    Returns the subgraph and ``kept``, where subgraph node ``i`` is ``kept[i]`` in ``g``.
    """
    gone = bytearray(g.n)
    for v in removed:
        if not 0 <= v < g.n:
            raise GraphError(f"node {v} not in graph")
        gone[v] = 1
    kept = tuple(v for v in range(g.n) if not gone[v])
    if not kept:
        raise GraphError("cannot remove every node")
    new_id = {v: i for i, v in enumerate(kept)}
    edges = [(new_id[u], new_id[v]) for u, v in g.edges if not gone[u] and not gone[v]]
    return DirectedGraph(len(kept), edges), kept


def largest_weak_component(g: DirectedGraph) -> tuple[DirectedGraph, tuple[int, ...]]:
    comps = weak_components(g)
    best = max(comps, key=len)  # first maximal component wins ties
    keep = set(best)
    return induced_subgraph(g, (v for v in range(g.n) if v not in keep))


def _find_cycle(g: DirectedGraph, alive: Sequence[int]) -> list[int]:
    # every alive node keeps an alive in-neighbour after Kahn stalls; walk
    # predecessors until a node repeats
    alive_set = set(alive)
    v = min(alive_set)
    pos: dict[int, int] = {}
    path = []
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = next(u for u in g.in_adj[v] if u in alive_set)
    cycle = path[pos[v]:]
    cycle.reverse()
    return cycle


def topological_order(g: DirectedGraph) -> list[int]:
    """Kahn's algorithm, always emitting the smallest available id.

    Raises :class:`CycleError` carrying one cycle if ``g`` is not a DAG.
    """
    indeg = [len(a) for a in g.in_adj]
    heap = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in g.out_adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) < g.n:
        raise CycleError(_find_cycle(g, [v for v in range(g.n) if indeg[v] > 0]))
    return order


def is_acyclic(g: DirectedGraph) -> bool:
    try:
        topological_order(g)
    except CycleError:
        return False
    return True
