import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import dags, digraphs
from graphsearch.graph import (CycleError, DirectedGraph, EdgeListParseError, GraphError, NodeIdMap,
                               induced_subgraph, is_acyclic, is_weakly_connected,
                               largest_weak_component, load_edge_list, topological_order,
                               weak_components, write_edge_list)


def test_construction_normalises_edges():
    g = DirectedGraph(4, [(2, 3), (0, 1), (0, 1), (1, 3)])
    assert g.m == 3
    assert g.edges == ((0, 1), (1, 3), (2, 3))
    assert g.out_adj[0] == (1,) and g.in_adj[3] == (1, 2)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 5)], [(-1, 0)]])
def test_construction_rejects_bad_edges(edges):
    with pytest.raises(GraphError):
        DirectedGraph(3, edges)


def test_needs_a_node():
    with pytest.raises(GraphError):
        DirectedGraph(0)


def test_load_small_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n2 4\n3 4\n")
    g, ids = load_edge_list(p)
    assert (g.n, g.m) == (4, 3)
    assert {(ids.to_external(u), ids.to_external(v)) for u, v in g.edges} == {(1, 2), (2, 4), (3, 4)}
    assert ids.internal_to_external == [1, 2, 4, 3]  # first appearance


def test_load_drops_duplicates_and_self_loops(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("1 2\n1 2\n2 2\n")
    g, ids = load_edge_list(p)
    assert g.m == 1
    assert ids.duplicates_dropped == 1 and ids.self_loops_dropped == 1


def test_load_parse_error_reports_line(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("a b\n")
    with pytest.raises(EdgeListParseError) as err:
        load_edge_list(p)
    assert err.value.lineno == 1


def test_load_empty_file_is_an_error(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# only a comment\n")
    with pytest.raises(GraphError):
        load_edge_list(p)


def test_reverse_flag_transposes(example_file):
    g, ids = load_edge_list(example_file)
    r, rids = load_edge_list(example_file, reverse=True)
    assert ids.internal_to_external == rids.internal_to_external
    assert r == g.reverse()


@given(digraphs(max_nodes=15, min_nodes=2))
def test_store_load_round_trip(tmp_path_factory, g):
    p = tmp_path_factory.mktemp("rt") / "g.txt"
    ids = NodeIdMap.identity(g.n)
    write_edge_list(p, g, ids)
    if g.m == 0:
        with pytest.raises(GraphError):
            load_edge_list(p)
        return
    h, hids = load_edge_list(p)
    assert {(hids.to_external(u), hids.to_external(v)) for u, v in h.edges} == set(g.edges)


def test_weak_connectivity_examples(example):
    assert is_weakly_connected(example)
    assert not is_weakly_connected(DirectedGraph(4, [(0, 1), (2, 3)]))
    assert is_weakly_connected(DirectedGraph(1))


def test_weak_components_and_lcc():
    g = DirectedGraph(6, [(0, 1), (2, 3), (3, 4)])
    assert sorted(map(sorted, weak_components(g))) == [[0, 1], [2, 3, 4], [5]]
    h, kept = largest_weak_component(g)
    assert kept == (2, 3, 4) and h.edges == ((0, 1), (1, 2))


def test_induced_subgraph_drops_node(example):
    h, kept = induced_subgraph(example, {3})  # label 4
    assert h.n == 8
    back = {(kept[u] + 1, kept[v] + 1) for u, v in h.edges}
    assert back == {(1, 2), (5, 8), (6, 7), (7, 8), (7, 9)}


def test_induced_subgraph_identity_and_isolation(example):
    h, kept = induced_subgraph(example, set())
    assert h == example and kept == tuple(range(9))
    h, kept = induced_subgraph(example, {1, 2, 4, 5})  # every neighbour of label 4
    v = kept.index(3)
    assert not h.out_adj[v] and not h.in_adj[v]


def test_induced_subgraph_cannot_remove_everything():
    with pytest.raises(GraphError):
        induced_subgraph(DirectedGraph(2, [(0, 1)]), {0, 1})


@given(digraphs(), st.data())
def test_induced_subgraph_properties(g, data):
    removed = data.draw(st.sets(st.integers(0, g.n - 1), max_size=g.n - 1))
    h, kept = induced_subgraph(g, removed)
    assert h.m <= g.m
    for u, v in h.edges:
        assert kept[u] not in removed and kept[v] not in removed
        assert g.has_edge(kept[u], kept[v])
    assert h.m == sum(1 for u, v in g.edges if u not in removed and v not in removed)


def test_topological_order_examples(example):
    assert [v + 1 for v in topological_order(example)] == list(range(1, 10))
    assert topological_order(DirectedGraph(3)) == [0, 1, 2]
    with pytest.raises(CycleError) as err:
        topological_order(DirectedGraph(2, [(0, 1), (1, 0)]))
    assert sorted(err.value.cycle) == [0, 1]


@given(dags())
def test_topological_order_respects_edges(g):
    order = topological_order(g)
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(g.n))
    assert all(pos[u] < pos[v] for u, v in g.edges)


@given(digraphs())
def test_cycle_witness_is_a_cycle(g):
    try:
        topological_order(g)
    except CycleError as err:
        cyc = err.cycle
        assert all(g.has_edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        assert not is_acyclic(g)
    else:
        assert is_acyclic(g)
