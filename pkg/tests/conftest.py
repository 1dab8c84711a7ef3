import pytest
from lib.graph.core import Graph, sample_gnp
from lib.schemas.graph import GnpParams

from tests.helpers import complete_graph, cycle_graph, disjoint_union, path_graph, petersen_graph


@pytest.fixture
def k6() -> Graph:
    return complete_graph(6)


@pytest.fixture
def k5() -> Graph:
    return complete_graph(5)


@pytest.fixture
def c10() -> Graph:
    return cycle_graph(10)


@pytest.fixture
def p5() -> Graph:
    return path_graph(5)


@pytest.fixture
def petersen() -> Graph:
    return petersen_graph()


@pytest.fixture
def k5_with_pendant() -> Graph:
    return Graph.from_edges(6, [*complete_graph(5).edges(), (0, 5)])


@pytest.fixture
def two_triangles() -> Graph:
    return disjoint_union(complete_graph(3), complete_graph(3))


@pytest.fixture
def edgeless() -> Graph:
    return Graph.empty(7)


@pytest.fixture
def sparse_graph() -> Graph:
    return sample_gnp(GnpParams(n=300, c=3.0, seed=11))


@pytest.fixture
def dense_graph() -> Graph:
    return sample_gnp(GnpParams(n=400, c=20.0, seed=5))
