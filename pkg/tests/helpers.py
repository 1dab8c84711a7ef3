from itertools import combinations

from hypothesis import strategies as st
from lib.graph.core import Graph


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, (v + 1) % n) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((v, v + 1) for v in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    """
    Centre 0 joined to leaves 1..leaves
    """
    return Graph.from_edges(leaves + 1, ((0, v) for v in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(v, (v + 1) % 5) for v in range(5)]
    spokes = [(v, v + 5) for v in range(5)]
    inner = [(5 + v, 5 + (v + 2) % 5) for v in range(5)]

    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0

    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n

    return Graph.from_edges(offset, edges)


@st.composite
def small_graphs(draw, min_n: int = 1, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))

    return Graph.from_edges(n, (pair for pair, kept in zip(pairs, keep) if kept))


@st.composite
def graphs_with_subset(draw, min_n: int = 1, max_n: int = 8) -> tuple[Graph, frozenset[int]]:
    g = draw(small_graphs(min_n=min_n, max_n=max_n))
    subset = draw(st.frozensets(st.integers(min_value=0, max_value=g.n - 1)))

    return g, subset
