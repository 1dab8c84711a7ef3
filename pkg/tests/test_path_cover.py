from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from lib.exceptions import ComponentTooLargeError, EnumerationTooLargeError
from lib.graph.colouring import global_colouring
from lib.graph.core import Graph, sample_gnp
from lib.graph.path_cover import (
    component_share,
    phi_global,
    phi_local,
    uc_bruteforce,
    uc_exact,
    validate_witness,
)
from lib.schemas.graph import GnpParams
from lib.schemas.path_cover import PathCoverResult

from tests.helpers import complete_graph, cycle_graph, path_graph, small_graphs, star_graph

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@st.composite
def cover_instances(draw) -> tuple[Graph, frozenset[int]]:
    n = draw(st.integers(min_value=1, max_value=8))
    p = draw(st.sampled_from([0.2, 0.4, 0.6]))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    h = sample_gnp(GnpParams(n=n, c=p * n, seed=seed))
    assume(h.edge_count <= 20)
    w = draw(st.frozensets(st.integers(min_value=0, max_value=n - 1)))

    return h, w


def k7_with_detour() -> Graph:
    # K7 on 0..6 plus the path 5-7-8-6: S = 0..4, P = {5, 6}, R = {7, 8}
    return Graph.from_edges(9, [*complete_graph(7).edges(), (5, 7), (7, 8), (8, 6)])


@pytest.mark.parametrize(
    "h, w, expected",
    [
        (Graph.empty(1), set(), 1),
        (path_graph(2), {1}, 1),
        (star_graph(2), {1, 2}, 0),
        (star_graph(3), {1, 2, 3}, 0),
        (path_graph(4), {0, 3}, 0),
        (TRIANGLE, set(), 3),
        (TRIANGLE, {0, 1}, 0),
    ],
)
def test_uc_examples(h, w, expected):
    result = uc_exact(h, w)

    assert result.uncovered == expected
    assert uc_bruteforce(h, w) == expected
    assert validate_witness(h, w, result)


def test_uc_witness_on_path():
    result = uc_exact(path_graph(4), {0, 3})

    assert [sorted(path) for path in result.witness] == [[0, 1, 2, 3]]


def test_uc_leaves_odd_star_leaf():
    # a leaf outside W could only ever be a path end
    assert uc_exact(star_graph(3), {0}).uncovered == 3
    assert uc_exact(star_graph(3), {0, 1, 2}).uncovered == 1


def test_uc_rejects_large_component():
    with pytest.raises(ComponentTooLargeError) as ex:
        uc_exact(path_graph(10), {0, 9}, size_cap=8)

    assert ex.value.size == 10
    assert ex.value.size_cap == 8


def test_bruteforce_rejects_many_edges():
    with pytest.raises(EnumerationTooLargeError):
        uc_bruteforce(complete_graph(7), {0, 1})


@settings(max_examples=500, deadline=None)
@given(instance=cover_instances())
def test_uc_matches_enumeration(instance):
    h, w = instance
    result = uc_exact(h, w)

    assert result.uncovered == uc_bruteforce(h, w)
    assert validate_witness(h, w, result)


@settings(max_examples=200, deadline=None)
@given(instance=cover_instances(), data=st.data())
def test_uc_more_endpoints_never_hurt(instance, data):
    h, w = instance
    extra = data.draw(st.integers(min_value=0, max_value=h.n - 1))

    assert uc_exact(h, w).uncovered >= uc_exact(h, w | {extra}).uncovered


def test_validate_witness_rejects_bad_families():
    h = path_graph(4)
    w = {0, 3}

    assert not validate_witness(h, w, PathCoverResult(uncovered=0, witness=((0, 1, 2),)))
    assert not validate_witness(h, w, PathCoverResult(uncovered=0, witness=((0, 2, 3),)))
    assert not validate_witness(h, w, PathCoverResult(uncovered=1, witness=((0, 1, 2, 3),)))
    assert validate_witness(h, w, PathCoverResult(uncovered=2))


def test_phi_global_on_complete_graph(k6):
    breakdown = phi_global(k6, global_colouring(k6))

    assert breakdown.phi_total == 0
    assert breakdown.l_tilde == 6
    assert all(breakdown.phi(v) == 0 for v in range(6))


def test_phi_global_on_edgeless_graph(edgeless):
    breakdown = phi_global(edgeless, global_colouring(edgeless))

    assert breakdown.phi_total == 7
    assert breakdown.l_tilde == 0
    assert all(breakdown.phi(v) == 1 for v in range(7))


def test_phi_global_on_cycle(c10):
    breakdown = phi_global(c10, global_colouring(c10))

    assert breakdown.phi_total == 10
    assert breakdown.l_tilde == 0
    assert breakdown.per_component == {0: 10}


def test_phi_global_covers_detour():
    g = k7_with_detour()
    breakdown = phi_global(g, global_colouring(g))

    assert breakdown.components == (frozenset({5, 6, 7, 8}),)
    assert breakdown.phi_total == 0
    assert breakdown.l_tilde == 9


def test_phi_global_reports_component_id():
    g = k7_with_detour()

    with pytest.raises(ComponentTooLargeError) as ex:
        phi_global(g, global_colouring(g), size_cap=3)

    assert ex.value.component_id == 0
    assert ex.value.size == 4


def test_phi_shares_sum_to_total(dense_graph):
    breakdown = phi_global(dense_graph, global_colouring(dense_graph))

    assert sum(breakdown.per_vertex.values(), Fraction(0)) == breakdown.phi_total
    assert 0 <= breakdown.phi_total <= dense_graph.n
    assert all(0 <= share <= 1 for share in breakdown.per_vertex.values())


def test_component_share_of_empty_component(k6):
    assert component_share(k6, set(), set()) == 0


def test_phi_local_examples(c10, k6):
    assert phi_local(c10, 4, 1) == 1
    assert phi_local(k6, 0, 1) == 0


@settings(max_examples=100, deadline=None)
@given(g=small_graphs(max_n=10), data=st.data())
def test_phi_local_matches_global_on_whole_component(g, data):
    v = data.draw(st.integers(min_value=0, max_value=g.n - 1))
    breakdown = phi_global(g, global_colouring(g))

    assert phi_local(g, v, g.n + 1) == breakdown.phi(v)


def test_phi_global_on_cycle_sum():
    g = cycle_graph(5)

    assert phi_global(g, global_colouring(g)).phi_total == 5
