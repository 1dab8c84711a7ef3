import logging
import math
from bisect import bisect_left
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from lib.exceptions import EdgeListFormatError, InvalidGraphParametersError, InvalidVertexError
from lib.schemas.graph import GnpParams
from lib.utils.seeding import derive_rng

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


class _PatchedAdjacency(Sequence):
    """
    Adjacency rows of a base graph with a handful of rows replaced.
    Flip views use it so G+e and G-e share every row except those of the two endpoints.
    """

    __slots__ = ("_base", "_patch")

    def __init__(self, base: Sequence[tuple[int, ...]], patch: dict[int, tuple[int, ...]]):
        if isinstance(base, _PatchedAdjacency):
            patch = {**base._patch, **patch}
            base = base._base

        self._base = base
        self._patch = patch

    def __len__(self) -> int:
        return len(self._base)

    def __getitem__(self, vertex: int) -> tuple[int, ...]:
        row = self._patch.get(vertex)

        return self._base[vertex] if row is None else row


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable simple undirected graph on vertices 0..n-1 with sorted adjacency rows
    """

    n: int
    adjacency: Sequence[tuple[int, ...]]
    edge_count: int

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n=n, adjacency=tuple(() for _ in range(n)), edge_count=0)

    @classmethod
    def from_arrays(cls, n: int, sources: np.ndarray, targets: np.ndarray) -> "Graph":
        """
        Builds a graph from two aligned arrays listing each edge once, without duplicates.
        :param n: Vertex count
        :param sources: First endpoints
        :param targets: Second endpoints
        :return: Graph
        """
        rows = np.concatenate([sources, targets]).astype(np.int64)
        columns = np.concatenate([targets, sources]).astype(np.int64)
        order = np.lexsort((columns, rows))
        counts = np.bincount(rows, minlength=n)
        offsets = np.concatenate([[0], np.cumsum(counts)]).tolist()
        neighbours = columns[order].tolist()
        adjacency = tuple(tuple(neighbours[offsets[v] : offsets[v + 1]]) for v in range(n))

        return cls(n=n, adjacency=adjacency, edge_count=len(sources))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """
        Builds a graph from an edge iterable, duplicates are merged.
        :param n: Vertex count
        :param edges: Pairs (u, v) with u != v
        :return: Graph
        :raise InvalidVertexError: On self-loops or endpoints outside 0..n-1
        """
        pairs: set[Edge] = set()

        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertexError(f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}")

            if u == v:
                raise InvalidVertexError(f"Self-loop at vertex {u}")

            pairs.add((min(u, v), max(u, v)))

        ordered = sorted(pairs)
        sources = np.fromiter((u for u, _ in ordered), dtype=np.int64, count=len(ordered))
        targets = np.fromiter((v for _, v in ordered), dtype=np.int64, count=len(ordered))

        return cls.from_arrays(n, sources, targets)

    def neighbours(self, vertex: int) -> tuple[int, ...]:
        return self.adjacency[vertex]

    def degree(self, vertex: int) -> int:
        return len(self.adjacency[vertex])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency[u]
        position = bisect_left(row, v)

        return position < len(row) and row[position] == v

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield u, v

    def check_vertex(self, vertex: int) -> None:
        if not 0 <= vertex < self.n:
            raise InvalidVertexError(f"Vertex {vertex} is outside 0..{self.n - 1}")

    def with_edge(self, u: int, v: int) -> "Graph":
        if self.has_edge(u, v):
            return self

        patch = {u: _insert(self.adjacency[u], v), v: _insert(self.adjacency[v], u)}

        return Graph(n=self.n, adjacency=_PatchedAdjacency(self.adjacency, patch), edge_count=self.edge_count + 1)

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            return self

        patch = {u: _remove(self.adjacency[u], v), v: _remove(self.adjacency[v], u)}

        return Graph(n=self.n, adjacency=_PatchedAdjacency(self.adjacency, patch), edge_count=self.edge_count - 1)

    def without_edges(self, edges: Iterable[Edge]) -> "Graph":
        removed = {(min(u, v), max(u, v)) for u, v in edges}

        return Graph.from_edges(self.n, (edge for edge in self.edges() if edge not in removed))

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """
        Relabels an induced subgraph to 0..len(vertices)-1 keeping the ascending order of ids.
        :param vertices: Vertex ids of the subgraph
        :return: Local graph and the local-to-global id map
        """
        mapping = sorted(set(vertices))
        local = {vertex: index for index, vertex in enumerate(mapping)}
        adjacency = tuple(tuple(local[y] for y in self.adjacency[x] if y in local) for x in mapping)
        edge_count = sum(len(row) for row in adjacency) // 2

        return Graph(n=len(mapping), adjacency=adjacency, edge_count=edge_count), mapping

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented

        return self.n == other.n and all(self.adjacency[v] == other.adjacency[v] for v in range(self.n))


@dataclass(frozen=True, eq=False)
class FlipPair:
    base: Graph
    edge: Edge
    plus: Graph
    minus: Graph


def _insert(row: tuple[int, ...], value: int) -> tuple[int, ...]:
    position = bisect_left(row, value)

    return row[:position] + (value,) + row[position:]


def _remove(row: tuple[int, ...], value: int) -> tuple[int, ...]:
    position = bisect_left(row, value)

    return row[:position] + row[position + 1 :]


def _geometric_pair_indices(rng: np.random.Generator, p: float, total_pairs: int) -> np.ndarray:
    expected = total_pairs * p
    batch = int(expected + 10 * math.sqrt(expected) + 16)
    chunks = []
    position = -1

    while True:
        positions = position + np.cumsum(rng.geometric(p, size=batch))
        inside = positions[positions < total_pairs]
        chunks.append(inside)

        if inside.size < positions.size:
            break

        position = int(positions[-1])

    return np.concatenate(chunks)


def _unrank_pairs(indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # pair index i enumerates (v, w) with w < v in row-major order: i = v(v-1)/2 + w
    rows = ((1 + np.sqrt(1 + 8 * indices.astype(np.float64))) // 2).astype(np.int64)
    rows = np.where(rows * (rows - 1) // 2 > indices, rows - 1, rows)
    rows = np.where((rows + 1) * rows // 2 <= indices, rows + 1, rows)
    columns = indices - rows * (rows - 1) // 2

    return rows, columns


def sample_gnp(params: GnpParams) -> Graph:
    """
    Samples G(n, c/n) by geometric skipping over the C(n,2) pair enumeration.
    The graph is a pure function of (n, c, seed).
    :param params: Vertex count, expected degree and seed
    :return: Graph
    :raise InvalidGraphParametersError: If c > n
    """
    n, c = params.n, params.c

    if c > n:
        raise InvalidGraphParametersError(f"c={c} exceeds n={n}, p would be above 1")

    total_pairs = n * (n - 1) // 2

    if c == 0 or total_pairs == 0:
        return Graph.empty(n)

    if c == n:
        indices = np.arange(total_pairs, dtype=np.int64)
    else:
        indices = _geometric_pair_indices(derive_rng(params.seed, "gnp"), c / n, total_pairs)

    rows, columns = _unrank_pairs(indices)

    return Graph.from_arrays(n, rows, columns)


def bfs_distances(g: Graph, source: int, max_depth: int) -> dict[int, int]:
    """
    Breadth-first distances from source, truncated at max_depth.
    :param g: Graph
    :param source: Start vertex
    :param max_depth: Largest distance explored
    :return: Mapping vertex -> distance for every vertex within max_depth
    """
    distances = {source: 0}
    frontier = [source]
    adjacency = g.adjacency

    for depth in range(1, max_depth + 1):
        next_frontier = []

        for x in frontier:
            for y in adjacency[x]:
                if y not in distances:
                    distances[y] = depth
                    next_frontier.append(y)

        if not next_frontier:
            break

        frontier = next_frontier

    return distances


def ball(g: Graph, v: int, k: int) -> frozenset[int]:
    g.check_vertex(v)

    if k < 0:
        raise InvalidGraphParametersError(f"Radius must be non-negative, got {k}")

    return frozenset(bfs_distances(g, v, k))


def sphere(g: Graph, v: int, k: int) -> frozenset[int]:
    g.check_vertex(v)

    if k < 0:
        raise InvalidGraphParametersError(f"Radius must be non-negative, got {k}")

    return frozenset(x for x, distance in bfs_distances(g, v, k).items() if distance == k)


def ball_sizes(g: Graph, k: int) -> np.ndarray:
    return np.fromiter((len(bfs_distances(g, v, k)) for v in range(g.n)), dtype=np.int64, count=g.n)


def components(g: Graph, subset: Iterable[int]) -> list[frozenset[int]]:
    """
    Connected components of the induced subgraph g[subset], ordered by smallest vertex.
    :param g: Graph
    :param subset: Vertices of the induced subgraph
    :return: List of vertex sets partitioning subset
    """
    allowed = set(subset)
    seen: set[int] = set()
    blocks = []

    for start in sorted(allowed):
        if start in seen:
            continue

        seen.add(start)
        block = [start]
        queue = deque([start])

        while queue:
            x = queue.popleft()

            for y in g.adjacency[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    block.append(y)
                    queue.append(y)

        blocks.append(frozenset(block))

    return blocks


def degree_counts(g: Graph) -> np.ndarray:
    """
    Number of vertices of each degree, index i holds n_i.
    """
    degrees = np.fromiter((len(row) for row in g.adjacency), dtype=np.int64, count=g.n)

    return np.bincount(degrees, minlength=2)


def flip(g: Graph, u: int, v: int) -> FlipPair:
    """
    Builds the views G+uv and G-uv. Both share all adjacency rows with g except those of u and v.
    :param g: Base graph
    :param u: First endpoint
    :param v: Second endpoint
    :return: FlipPair
    :raise InvalidVertexError: If u == v or either endpoint is outside the graph
    """
    g.check_vertex(u)
    g.check_vertex(v)

    if u == v:
        raise InvalidVertexError(f"Cannot flip the self-pair ({u}, {v})")

    return FlipPair(base=g, edge=(min(u, v), max(u, v)), plus=g.with_edge(u, v), minus=g.without_edge(u, v))


def write_edge_list(g: Graph, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w") as file:
        file.write(f"{g.n} {g.edge_count}\n")

        for u, v in g.edges():
            file.write(f"{u} {v}\n")


def read_edge_list(path: Path) -> Graph:
    """
    Reads the edge-list format: header "n m", then one "u v" pair per line.
    :param path: Edge-list file
    :return: Graph
    :raise EdgeListFormatError: On a malformed header, line or edge count mismatch
    """
    try:
        lines = path.read_text().splitlines()
    except OSError as ex:
        raise EdgeListFormatError(f"Cannot read edge list {path}", exception=ex)

    if not lines:
        raise EdgeListFormatError(f"{path}: missing header line 'n m'")

    try:
        n, m = (int(token) for token in lines[0].split())
    except ValueError as ex:
        raise EdgeListFormatError(f"{path}:1: header must be 'n m'", exception=ex)

    edges = []

    for line_number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue

        try:
            u, v = (int(token) for token in line.split())
        except ValueError as ex:
            raise EdgeListFormatError(f"{path}:{line_number}: expected 'u v', got {line!r}", exception=ex)

        edges.append((u, v))

    try:
        g = Graph.from_edges(n, edges)
    except InvalidVertexError as ex:
        raise EdgeListFormatError(f"{path}: invalid edge", exception=ex)

    if g.edge_count != m:
        raise EdgeListFormatError(f"{path}: header announces {m} edges, found {g.edge_count}")

    return g
