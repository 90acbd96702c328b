import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import b_section, d_section, dags, digraphs, path_graph
from graphsearch.baselines import MAX_ORACLE_NODES, exact_search_time, splitting_strategy
from graphsearch.dynamics import lower_bound, validate
from graphsearch.graph import CycleError, DirectedGraph, is_weakly_connected
from graphsearch.plank import plank


def brute_force_time(g, s, max_t):
    """Try every strategy of full-size steps up to ``max_t`` long; no pruning, no memo."""
    placements = list(itertools.combinations(range(g.n), min(s, g.n)))
    for t in range(1, max_t + 1):
        for steps in itertools.product(placements, repeat=t):
            if validate(g, _strategy(steps, s)):
                return t
    return None


def _strategy(steps, s):
    from graphsearch.strategy import SearchStrategy
    return SearchStrategy.of(steps, s)


def test_oracle_examples():
    assert exact_search_time(DirectedGraph(2, [(0, 1)]), 2).optimal_length == 1
    assert exact_search_time(path_graph(5), 2).optimal_length == 4
    assert exact_search_time(b_section(2, 2), 3).optimal_length == 2
    assert exact_search_time(DirectedGraph(3), 2).optimal_length == 0


def test_one_searcher_never_clears_an_edge():
    res = exact_search_time(path_graph(3), 1)
    assert res.exceeded and res.optimal_length is None


def test_exceeded_when_max_t_too_small():
    res = exact_search_time(path_graph(5), 2, max_t=2)
    assert res.exceeded and res.witness is None and res.max_t == 2


def test_oracle_refuses_large_graphs():
    with pytest.raises(ValueError):
        exact_search_time(path_graph(MAX_ORACLE_NODES + 1), 2)


def test_oracle_handles_cycles():
    g = DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])
    res = exact_search_time(g, 3)
    assert res.optimal_length == 1
    assert exact_search_time(g, 2).optimal_length == 3


@given(digraphs(max_nodes=5, min_nodes=2), st.integers(2, 3))
@settings(max_examples=40)
def test_oracle_matches_brute_force(g, s):
    res = exact_search_time(g, s, max_t=3)
    want = brute_force_time(g, s, 3) if g.m else 0
    assert res.optimal_length == want


@given(dags(max_nodes=7, min_nodes=2), st.integers(2, 4))
@settings(max_examples=60)
def test_witness_is_valid_and_within_bounds(g, s):
    res = exact_search_time(g, s)
    assert not res.exceeded  # Plank length is an upper bound
    if g.m:
        assert validate(g, res.witness) and res.witness.length == res.optimal_length
        assert res.optimal_length <= plank(g, s).length
    if g.m and is_weakly_connected(g):
        # searchers may jump between components, so the bound needs one piece
        assert lower_bound(g.n, s) <= res.optimal_length


def test_lower_bound_fails_across_components():
    g = DirectedGraph(4, [(0, 2), (1, 3)])
    assert exact_search_time(g, 2).optimal_length == 2 < lower_bound(4, 2)


@given(digraphs(max_nodes=7, min_nodes=2), st.integers(2, 4))
@settings(max_examples=60)
def test_memo_agrees_with_plain_deepening(g, s):
    # plain deepening is exponential in t, so both searches share a small cap
    assert (exact_search_time(g, s, 3).optimal_length
            == exact_search_time(g, s, 3, memo=False).optimal_length)


def test_splitting_on_a_path_equals_plank():
    for n, s in [(6, 3), (5, 2), (9, 4)]:
        g = path_graph(n)
        assert splitting_strategy(g, s).steps == plank(g, s).steps


def test_splitting_on_a_wide_b_section():
    g = b_section(3, 4)
    assert splitting_strategy(g, 6).length >= plank(g, 6).length


def test_plank_beats_splitting_on_a_diamond():
    g = d_section(2, 5)
    assert plank(g, 4).length <= splitting_strategy(g, 4).length


def test_splitting_rejects_bad_input():
    with pytest.raises(ValueError):
        splitting_strategy(path_graph(3), 1)
    with pytest.raises(CycleError):
        splitting_strategy(DirectedGraph(2, [(0, 1), (1, 0)]), 2)


@given(dags(max_nodes=25), st.integers(2, 8))
def test_splitting_is_valid(g, s):
    strategy = splitting_strategy(g, s)
    assert validate(g, strategy)
    assert strategy.width <= s
