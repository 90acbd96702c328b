"""Random DAG generators."""
from __future__ import annotations

import random

import numpy as np

from .graph import DirectedGraph


def gen_ordered_er(n: int, p: float, seed: int) -> DirectedGraph:
    """Each pair ``i < j`` becomes the edge ``(i, j)`` independently with probability ``p``.

    Draws the edge count from the binomial law, then that many distinct
    pairs uniformly, so large sparse graphs cost ``O(m log m)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    pairs = n * (n - 1) // 2
    if pairs == 0:
        return DirectedGraph(n, ())
    m = int(rng.binomial(pairs, p))
    idx = np.sort(rng.choice(pairs, size=m, replace=False)) if m < pairs else np.arange(pairs)
    # pair index -> (i, j): row i holds n-1-i pairs, starting at offset[i]
    rows = np.arange(n - 1)
    offset = rows * (2 * n - rows - 1) // 2
    i = np.searchsorted(offset, idx, side="right") - 1
    j = idx - offset[i] + i + 1
    return DirectedGraph(n, zip(i.tolist(), j.tolist()))


def gen_ba_dag(n: int, m_links: int, m0: int, seed: int) -> DirectedGraph:
    """Preferential attachment, every edge pointing from the older node to the newer.

    Starts from ``m0`` isolated nodes. Each new node links to ``m_links``
    distinct existing nodes chosen with probability proportional to degree;
    while every existing degree is zero the choice is uniform.
    """
    if not 1 <= m_links <= m0 <= n:
        raise ValueError("need 1 <= m_links <= m0 <= n")
    rng = random.Random(seed)
    ends: list[int] = []  # each node listed once per incident edge
    edges = []
    for v in range(m0, n):
        chosen: set[int] = set()
        while len(chosen) < m_links:
            if ends:
                u = ends[rng.randrange(len(ends))]
            else:
                u = rng.randrange(v)
            chosen.add(u)
        for u in sorted(chosen):
            edges.append((u, v))
            ends.extend((u, v))
    return DirectedGraph(n, edges)


def gen_random_dag(n: int, p: float, seed: int, connected: bool = False) -> DirectedGraph:
    """An ordered-ER DAG with its labels shuffled; optionally weakly connected.

    With ``connected`` a random spanning tree (each node hooked to an
    earlier one in the hidden order) is added first.
    """
    rng = random.Random(seed)
    base = gen_ordered_er(n, p, seed)
    edges = set(base.edges)
    if connected:
        for j in range(1, n):
            edges.add((rng.randrange(j), j))
    perm = list(range(n))
    rng.shuffle(perm)
    return DirectedGraph(n, ((perm[u], perm[v]) for u, v in edges))


def gen_section_dag(sections: int, s: int, seed: int, max_branches: int = 3,
                    extra: int = 2) -> DirectedGraph:
    """A DAG stitched from B-, R- and D-sections whose branches all hold at least ``s`` nodes.

    Branch length counts the nodes other than the branching node. Each new
    section hangs off a terminal of an earlier one, so the result is weakly
    connected.
    """
    rng = random.Random(seed)
    edges: list[tuple[int, int]] = []
    nxt = 1
    terminals = [0]

    def chain(a, b, inner):
        nonlocal nxt
        nodes = [a, *range(nxt, nxt + inner), b]
        nxt += inner
        edges.extend(zip(nodes, nodes[1:]))

    for _ in range(sections):
        kind = rng.choice("BRD")
        k = rng.randint(2, max_branches)
        anchor = rng.choice(terminals)
        if kind == "B":
            for _ in range(k):
                end = nxt
                nxt += 1
                chain(anchor, end, s - 1 + rng.randint(0, extra))
                terminals.append(end)
        elif kind == "R":
            bottom = nxt
            nxt += 1
            # the anchor is the first top so the section joins the rest
            tops = [anchor] + list(range(nxt, nxt + k - 1))
            nxt += k - 1
            for top in tops:
                chain(top, bottom, s - 1 + rng.randint(0, extra))
            terminals.append(bottom)
        else:
            bottom = nxt
            nxt += 1
            for _ in range(k):
                chain(anchor, bottom, s - 1 + rng.randint(0, extra))
            terminals.append(bottom)
    return DirectedGraph(nxt, edges)
