import networkx as nx
import pytest
from hypothesis import given, settings
from lib.exceptions import RegimeError
from lib.graph.core import Graph
from lib.graph.cycle_exact import circumference, theorem11_audit, validate_cycle

from tests.helpers import complete_graph, cycle_graph, disjoint_union, path_graph, small_graphs, star_graph


def longest_cycle_by_enumeration(g: Graph) -> int:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_edges_from(g.edges())

    return max((len(cycle) for cycle in nx.simple_cycles(nx_graph)), default=0)


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_circumference_of_cycle(n):
    result = circumference(cycle_graph(n))

    assert result.length == n
    assert result.exact
    assert validate_cycle(cycle_graph(n), result.witness)


def test_circumference_of_trees():
    for tree in (path_graph(6), star_graph(5), Graph.empty(4)):
        result = circumference(tree)

        assert result.length == 0
        assert result.witness == ()


def test_circumference_of_complete_graph(k6):
    assert circumference(k6).length == 6


def test_circumference_of_petersen(petersen):
    result = circumference(petersen)

    assert result.length == 9
    assert result.exact
    assert validate_cycle(petersen, result.witness)


def test_circumference_picks_larger_block():
    g = disjoint_union(cycle_graph(4), complete_graph(5), path_graph(3))

    assert circumference(g).length == 5


def test_circumference_reports_exhausted_budget(petersen):
    result = circumference(petersen, budget=1)

    assert not result.exact
    assert result.length <= 9
    assert validate_cycle(petersen, result.witness)


@settings(max_examples=200, deadline=None)
@given(g=small_graphs(max_n=8))
def test_circumference_matches_enumeration(g):
    result = circumference(g)

    assert result.length == longest_cycle_by_enumeration(g)
    assert validate_cycle(g, result.witness)


def test_validate_cycle():
    g = cycle_graph(5)

    assert validate_cycle(g, [])
    assert validate_cycle(g, [2, 3, 4, 0, 1])
    assert not validate_cycle(g, [0, 1])
    assert not validate_cycle(g, [0, 1, 2])
    assert not validate_cycle(g, [0, 1, 2, 3, 4, 0])


def test_theorem11_rejects_sparse_regime():
    with pytest.raises(RegimeError):
        theorem11_audit(n=50, c=10, trials=1, seed=0)


def test_theorem11_without_trials():
    report = theorem11_audit(n=50, c=20, trials=0, seed=0)

    assert report.agreement_fraction is None
    assert report.passed is None


@pytest.mark.slow
def test_theorem11_agreement_at_desk_scale():
    report = theorem11_audit(n=50, c=20, trials=200, seed=1, threads=2)

    assert report.passed, report.disagreements
