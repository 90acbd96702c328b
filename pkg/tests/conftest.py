import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphsearch.graph import DirectedGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# The nine-node running example, labels shifted down by one so ids and
# ascending-id tie-breaks line up with the original 1..9 labelling.
EXAMPLE_EDGES = [(1, 2), (2, 4), (3, 4), (4, 5), (5, 8), (4, 6), (6, 7), (7, 8), (7, 9)]


def shift(edges, by=-1):
    return [(u + by, v + by) for u, v in edges]


@pytest.fixture
def example() -> DirectedGraph:
    return DirectedGraph(9, shift(EXAMPLE_EDGES))


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.txt"
    path.write_text("# running example\n" + "".join(f"{u} {v}\n" for u, v in EXAMPLE_EDGES))
    return path


def path_graph(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(i, i + 1) for i in range(n - 1)])


def out_star(leaves: int) -> DirectedGraph:
    return DirectedGraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def b_section(branches: int, length: int) -> DirectedGraph:
    """``branches`` paths of ``length`` nodes each hanging off node 0."""
    edges, nxt = [], 1
    for _ in range(branches):
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return DirectedGraph(nxt, edges)


def d_section(branches: int, inner: int) -> DirectedGraph:
    """``branches`` paths with ``inner`` interior nodes each, from node 0 to node 1."""
    edges, nxt = [], 2
    for _ in range(branches):
        prev = 0
        for _ in range(inner):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
        edges.append((prev, 1))
    return DirectedGraph(nxt, edges)


@st.composite
def dags(draw, max_nodes=12, min_nodes=1):
    """Random DAG: edges respect a shuffled hidden order."""
    n = draw(st.integers(min_nodes, max_nodes))
    order = draw(st.permutations(range(n)))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    return DirectedGraph(n, [(order[i], order[j]) for i, j in chosen])


@st.composite
def digraphs(draw, max_nodes=12, min_nodes=1):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    return DirectedGraph(n, chosen)


@st.composite
def strategies_for(draw, g: DirectedGraph, s: int, max_steps=8):
    steps = draw(st.lists(st.lists(st.integers(0, g.n - 1), unique=True, max_size=s), max_size=max_steps))
    return steps


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    lines = {}
    for outcome in ("passed", "failed", "skipped", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            if outcome == "passed" and rep.when != "call":
                continue
            name = nodeid.split("::test_criterion_")[1]
            num, _, label = name.partition("_")
            lines[int(num)] = f"criterion {int(num):2d} {label:<45} {outcome.upper()}"
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
