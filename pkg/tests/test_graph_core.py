import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from lib.exceptions import EdgeListFormatError, InvalidGraphParametersError, InvalidVertexError
from lib.graph.core import (
    Graph,
    ball,
    ball_sizes,
    components,
    degree_counts,
    flip,
    read_edge_list,
    sample_gnp,
    sphere,
    write_edge_list,
)
from lib.schemas.graph import GnpParams

from tests.helpers import small_graphs


def assert_simple(g: Graph) -> None:
    for v in range(g.n):
        row = g.adjacency[v]
        assert list(row) == sorted(set(row))
        assert v not in row

        for y in row:
            assert v in g.adjacency[y]

    assert sum(len(row) for row in g.adjacency) == 2 * g.edge_count


def test_sample_gnp_without_edges():
    g = sample_gnp(GnpParams(n=5, c=0, seed=3))

    assert g.n == 5
    assert g.edge_count == 0


def test_sample_gnp_complete():
    g = sample_gnp(GnpParams(n=5, c=5, seed=3))

    assert g.edge_count == 10
    assert all(g.degree(v) == 4 for v in range(5))


def test_sample_gnp_rejects_p_above_one():
    with pytest.raises(InvalidGraphParametersError):
        sample_gnp(GnpParams(n=5, c=6, seed=0))


def test_sample_gnp_is_deterministic():
    params = GnpParams(n=500, c=7.5, seed=42)

    assert sample_gnp(params) == sample_gnp(params)
    assert sample_gnp(params) != sample_gnp(GnpParams(n=500, c=7.5, seed=43))


def test_sample_gnp_edge_count():
    n, c = 10_000, 20
    g = sample_gnp(GnpParams(n=n, c=c, seed=1))
    mean = math.comb(n, 2) * c / n
    sigma = math.sqrt(mean * (1 - c / n))

    assert abs(g.edge_count - mean) <= 4 * sigma


def test_sample_gnp_mean_degree():
    n, c = 100, 5
    means = np.array([2 * sample_gnp(GnpParams(n=n, c=c, seed=seed)).edge_count / n for seed in range(1000)])
    standard_error = means.std(ddof=1) / math.sqrt(means.size)

    assert abs(means.mean() - c * (n - 1) / n) <= 4 * standard_error


@settings(max_examples=30, deadline=None)
@given(n=st.integers(min_value=1, max_value=60), c=st.floats(min_value=0, max_value=1), seed=st.integers(0, 2**32))
def test_sampled_graphs_are_simple(n, c, seed):
    assert_simple(sample_gnp(GnpParams(n=n, c=c * n, seed=seed)))


def test_ball_of_radius_zero(petersen):
    assert ball(petersen, 3, 0) == {3}


def test_ball_on_cycle(c10):
    assert ball(c10, 0, 1) == {9, 0, 1}


def test_ball_and_sphere_on_path(p5):
    assert ball(p5, 2, 2) == {0, 1, 2, 3, 4}
    assert sphere(p5, 2, 2) == {0, 4}


@settings(max_examples=50, deadline=None)
@given(g=small_graphs(max_n=12), data=st.data())
def test_ball_growth(g, data):
    v = data.draw(st.integers(min_value=0, max_value=g.n - 1))
    k = data.draw(st.integers(min_value=1, max_value=5))

    assert ball(g, v, k - 1) <= ball(g, v, k)
    assert sphere(g, v, k) == ball(g, v, k) - ball(g, v, k - 1)


def test_ball_sizes_match_ball(petersen):
    assert ball_sizes(petersen, 1).tolist() == [4] * 10
    assert ball_sizes(petersen, 2).tolist() == [10] * 10


def test_ball_rejects_unknown_vertex(p5):
    with pytest.raises(InvalidVertexError):
        ball(p5, 5, 1)


def test_components_of_empty_subset(k5):
    assert components(k5, frozenset()) == []


def test_components_of_edgeless_graph():
    assert components(Graph.empty(4), range(4)) == [frozenset({v}) for v in range(4)]


def test_components_of_two_triangles(two_triangles):
    assert components(two_triangles, range(6)) == [frozenset({0, 1, 2}), frozenset({3, 4, 5})]


@settings(max_examples=50, deadline=None)
@given(g=small_graphs(max_n=10), data=st.data())
def test_components_partition_subset(g, data):
    subset = data.draw(st.frozensets(st.integers(min_value=0, max_value=g.n - 1)))
    blocks = components(g, subset)

    assert frozenset().union(*blocks) == subset
    assert sum(len(block) for block in blocks) == len(subset)

    for block in blocks:
        for x in block:
            assert all(y not in subset or y in block for y in g.adjacency[x])


def test_degree_counts(p5):
    assert degree_counts(p5).tolist() == [0, 2, 3]
    assert degree_counts(Graph.empty(3)).tolist() == [3, 0]


def test_flip_present_edge(k5):
    pair = flip(k5, 1, 3)

    assert pair.edge == (1, 3)
    assert pair.plus == k5
    assert not pair.minus.has_edge(1, 3)
    assert pair.minus.edge_count == k5.edge_count - 1


def test_flip_absent_edge(p5):
    pair = flip(p5, 4, 0)

    assert pair.edge == (0, 4)
    assert pair.minus == p5
    assert pair.plus.has_edge(0, 4) and pair.plus.has_edge(4, 0)
    assert pair.plus.edge_count == p5.edge_count + 1


def test_flip_on_triangle():
    triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])

    assert flip(triangle, 0, 2).plus == triangle


def test_flip_rejects_self_pair(p5):
    with pytest.raises(InvalidVertexError):
        flip(p5, 2, 2)


@settings(max_examples=50, deadline=None)
@given(g=small_graphs(min_n=2, max_n=10), data=st.data())
def test_flip_round_trip(g, data):
    u, v = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    present = g.has_edge(u, v)
    pair = flip(g, u, v)
    changed = pair.minus if present else pair.plus
    back = flip(changed, u, v)

    assert changed != g
    assert (back.plus if present else back.minus) == g
    assert_simple(pair.plus)
    assert_simple(pair.minus)


def test_edge_list_round_trip(tmp_path, petersen):
    path = tmp_path / "graphs" / "petersen.txt"
    write_edge_list(petersen, path)

    assert path.read_text().splitlines()[0] == "10 15"
    assert read_edge_list(path) == petersen


@pytest.mark.parametrize(
    "content",
    [
        "",
        "3\n",
        "3 1\n0 x\n",
        "3 1\n0 3\n",
        "3 2\n0 1\n",
        "3 1\n1 1\n",
    ],
)
def test_edge_list_rejects_malformed_files(tmp_path, content):
    path = tmp_path / "bad.txt"
    path.write_text(content)

    with pytest.raises(EdgeListFormatError):
        read_edge_list(path)
