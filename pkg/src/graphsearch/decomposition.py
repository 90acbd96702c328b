"""Splitting a DAG into branching (B), root (R), diamond (D) and path (P) sections."""
from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import DirectedGraph, Edge, topological_order

KINDS = ("B", "R", "D", "P")


@dataclass(frozen=True)
class Section:
    kind: str
    tops: frozenset[int]
    bottoms: frozenset[int]
    branches: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(e for br in self.branches for e in zip(br, br[1:]))

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(v for br in self.branches for v in br)

    @property
    def terminals(self) -> frozenset[int]:
        return self.tops | self.bottoms

    @classmethod
    def build(cls, kind: str, branches: Sequence[Sequence[int]]) -> Section:
        brs = tuple(tuple(b) for b in branches)
        starts = frozenset(b[0] for b in brs)
        ends = frozenset(b[-1] for b in brs)
        return cls(kind, starts, ends, brs)


@dataclass
class Decomposition:
    sections: list[Section]
    overlap_total: int = 0
    overlap_factor: float = 0.0
    population: int = 0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def edge_density(self) -> float:
        """``m / n`` over covered nodes, a rough stand-in for the overlap factor."""
        m = sum(len(s.edges) for s in self.sections)
        return m / self.population if self.population else 0.0

    def counts(self) -> Counter:
        return Counter(s.kind for s in self.sections)


def phase_one_sequences(dag: DirectedGraph) -> list[list[int]]:
    """Cut the DAG into maximal chains.

    Walk nodes in topological order; from each unused out-edge follow the
    unique continuation while the current node has exactly one in-edge and
    one out-edge. Each edge lands in exactly one chain.
    """
    order = topological_order(dag)
    used: set[Edge] = set()
    eta = []
    for v in order:
        for u in dag.out_adj[v]:
            if (v, u) in used:
                continue
            used.add((v, u))
            seq = [v, u]
            while len(dag.in_adj[u]) == 1 and len(dag.out_adj[u]) == 1:
                w = dag.out_adj[u][0]
                used.add((u, w))
                seq.append(w)
                u = w
            eta.append(seq)
    return eta


def _distinct_by(seqs, key):
    seen, out = set(), []
    for s in seqs:
        k = key(s)
        if k not in seen:
            seen.add(k)
            out.append(s)
    return out


def phase_two_sections(eta: Sequence[Sequence[int]]) -> list[Section]:
    """Group chains by shared start and end, in chain order.

    A chain first collects unclaimed chains with the same start: those also
    sharing its end form a D-section with it, otherwise all of them form a
    B-section. Failing that, chains sharing its end form an R-section, and a
    lone chain is a P-section. Within a B (R) group only the first chain to
    reach a given end (leave a given start) is taken; the rest would close
    a diamond inside the section and are left for a later group.
    """
    by_start: dict[int, list[int]] = defaultdict(list)
    by_end: dict[int, list[int]] = defaultdict(list)
    for i, seq in enumerate(eta):
        by_start[seq[0]].append(i)
        by_end[seq[-1]].append(i)
    claimed = [False] * len(eta)
    sections = []
    for i, lam in enumerate(eta):
        if claimed[i]:
            continue
        same_start = [j for j in by_start[lam[0]] if j != i and not claimed[j]]
        if same_start:
            diamond = [j for j in same_start if eta[j][-1] == lam[-1]]
            if diamond:
                group, kind = [i, *diamond], "D"
            else:
                group = _distinct_by([i, *same_start], lambda j: eta[j][-1])
                kind = "B" if len(group) > 1 else "P"
        else:
            same_end = [j for j in by_end[lam[-1]] if j != i and not claimed[j]]
            group = _distinct_by([i, *same_end], lambda j: eta[j][0])
            kind = "R" if len(group) > 1 else "P"
        for j in group:
            claimed[j] = True
        sections.append(Section.build(kind, [eta[j] for j in group]))
    return sections


def overlap_of(sections: Iterable[Section], n: int) -> tuple[int, float]:
    """Total overlap and overlap factor ``overlap / (n - 1)``.

    A node is charged the number of sections it is a top or bottom of, but
    only when that number is at least three.
    """
    r = Counter(v for s in sections for v in s.terminals)
    omega = sum(c for c in r.values() if c >= 3)
    return omega, (omega / (n - 1) if n > 1 else 0.0)


def decompose(dag: DirectedGraph) -> Decomposition:
    sections = phase_two_sections(phase_one_sequences(dag))
    population = len(dag.non_isolated())
    omega, f_o = overlap_of(sections, population)
    return Decomposition(sections, omega, f_o, population)


def classify(edges: Iterable[Edge]) -> Section | None:
    """The section an edge set forms on its own, or ``None`` if it is not one."""
    edges = set(edges)
    if not edges:
        return None
    succ: dict[int, list[int]] = defaultdict(list)
    pred: dict[int, list[int]] = defaultdict(list)
    for u, v in edges:
        succ[u].append(v)
        pred[v].append(u)
    nodes = set(succ) | set(pred)
    heads = [v for v in nodes if not pred[v]]
    if len(heads) == 1 and all(len(pred[v]) == 1 for v in nodes if v != heads[0]):
        top = heads[0]
        # out-tree rooted at top; a B-section branches only at its root
        if all(len(succ[v]) <= 1 for v in nodes if v != top):
            branches = [_follow(top, w, succ) for w in sorted(succ[top])]
            if sum(len(b) - 1 for b in branches) != len(edges):
                return None
            return Section.build("P" if len(branches) == 1 else "B", branches)
        return None
    tails = [v for v in nodes if not succ[v]]
    if len(tails) == 1 and all(len(succ[v]) == 1 for v in nodes if v != tails[0]):
        bottom = tails[0]
        if all(len(pred[v]) <= 1 for v in nodes if v != bottom):
            branches = []
            for w in sorted(pred[bottom]):
                rev = _follow(bottom, w, pred)
                branches.append(rev[::-1])
            if sum(len(b) - 1 for b in branches) != len(edges):
                return None
            return Section.build("R", branches) if len(branches) > 1 else None
        return None
    if len(heads) == 1 and len(tails) == 1:
        top, bottom = heads[0], tails[0]
        inner = nodes - {top, bottom}
        if any(len(pred[v]) != 1 or len(succ[v]) != 1 for v in inner):
            return None
        if len(succ[top]) < 2 or len(pred[bottom]) < 2:
            return None
        branches = [_follow(top, w, succ) for w in sorted(succ[top])]
        if any(b[-1] != bottom for b in branches):
            return None
        if sum(len(b) - 1 for b in branches) != len(edges):
            return None
        return Section.build("D", branches)
    return None


def _follow(start, first, nxt):
    path = [start, first]
    seen = {start, first}
    while len(nxt[path[-1]]) == 1:
        w = nxt[path[-1]][0]
        if w in seen:
            break
        path.append(w)
        seen.add(w)
    return path


def _interior(section: Section) -> frozenset[int]:
    return section.nodes - section.terminals


def is_valid(decomp: Decomposition | Sequence[Section], dag: DirectedGraph) -> bool:
    return not validity_problems(decomp, dag)


def validity_problems(decomp: Decomposition | Sequence[Section], dag: DirectedGraph) -> list[str]:
    """Reasons the decomposition is not valid; empty when it is."""
    sections = decomp.sections if isinstance(decomp, Decomposition) else list(decomp)
    problems = []
    owner: dict[Edge, int] = {}
    for i, sec in enumerate(sections):
        for e in sec.edges:
            if e in owner:
                problems.append(f"edge {e} in sections {owner[e]} and {i}")
            owner[e] = i
            if not dag.has_edge(*e):
                problems.append(f"section {i} has non-edge {e}")
        shape = classify(sec.edges)
        if shape is None or shape.kind != sec.kind:
            problems.append(f"section {i} is not a valid {sec.kind}-section")
        elif shape.tops != sec.tops or shape.bottoms != sec.bottoms:
            problems.append(f"section {i} has wrong top/bottom nodes")
    missing = set(dag.edges) - set(owner)
    if missing:
        problems.append(f"{len(missing)} edges not covered, e.g. {min(missing)}")
    where: dict[int, list[int]] = defaultdict(list)
    for i, sec in enumerate(sections):
        for v in sec.nodes:
            where[v].append(i)
    for v, secs in where.items():
        if len(secs) > 1:
            for i in secs:
                if v not in sections[i].terminals:
                    problems.append(f"node {v} shared by sections {secs} but interior to {i}")
    return problems


def mergeable(sections: Sequence[Section]) -> list[tuple[tuple[int, ...], str]]:
    """Every pair (and P, B, R triple) of sections that merges into a valid section.

    A merge counts only if the merged section is well formed and none of
    its interior nodes is used by another section.
    """
    where: dict[int, set[int]] = defaultdict(set)
    for i, sec in enumerate(sections):
        for v in sec.nodes:
            where[v].add(i)
    nbrs = [set().union(*(where[v] for v in sec.nodes)) - {i} for i, sec in enumerate(sections)]

    def fits(group):
        merged = classify(set().union(*(sections[i].edges for i in group)))
        if merged is None:
            return None
        for v in _interior(merged):
            if where[v] - set(group):
                return None
        return merged.kind

    found = []
    for i, j in combinations(range(len(sections)), 2):
        if j in nbrs[i]:
            kind = fits((i, j))
            if kind:
                found.append(((i, j), kind))
    ps = [i for i, s in enumerate(sections) if s.kind == "P"]
    for p in ps:
        for b in (j for j in nbrs[p] if sections[j].kind == "B"):
            for r in (k for k in nbrs[p] | nbrs[b] if sections[k].kind == "R"):
                kind = fits((p, b, r))
                if kind == "D":
                    found.append(((p, b, r), kind))
    return found


def is_minimal(decomp: Decomposition | Sequence[Section]) -> bool:
    sections = decomp.sections if isinstance(decomp, Decomposition) else list(decomp)
    return not mergeable(sections)


def _ids(nodes, label):
    return ",".join(str(label(v)) for v in sorted(nodes, key=label))


def format_decomposition(decomp: Decomposition, label=lambda v: v) -> str:
    lines = [f"# sections={len(decomp.sections)} overlap={decomp.overlap_total} f_o={decomp.overlap_factor:.6g}"]
    for sec in decomp.sections:
        branches = "|".join(">".join(str(label(v)) for v in br) for br in sec.branches)
        lines.append(f"{sec.kind} tops={_ids(sec.tops, label)} bottoms={_ids(sec.bottoms, label)} branches={branches}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, resolve=int) -> list[Section]:
    sections = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        kind, *fields = ln.split()
        if kind not in KINDS:
            raise ValueError(f"unknown section kind {kind!r}")
        kv = dict(f.split("=", 1) for f in fields)
        branches = [[resolve(int(x)) for x in br.split(">")] for br in kv["branches"].split("|")]
        sec = Section.build(kind, branches)
        tops = frozenset(resolve(int(x)) for x in kv["tops"].split(","))
        bottoms = frozenset(resolve(int(x)) for x in kv["bottoms"].split(","))
        sections.append(Section(kind, tops, bottoms, sec.branches))
    return sections


def write_decomposition(path: str | os.PathLike, decomp: Decomposition, label=lambda v: v) -> None:
    with open(path, "w") as fh:
        fh.write(format_decomposition(decomp, label))
