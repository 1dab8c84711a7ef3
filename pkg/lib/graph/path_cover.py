"""
Uncovered-vertex counts of W-path families.

A family of W-paths in H is a set of vertex-disjoint paths whose endpoints all lie in W.
uc(H; W) is the least number of vertices outside W that such a family leaves uncovered.
"""

import logging
from collections.abc import Iterable
from fractions import Fraction

from lib.exceptions import ComponentTooLargeError, EnumerationTooLargeError
from lib.graph.colouring import local_colouring
from lib.graph.core import Graph, components
from lib.schemas.colouring import TriColouring
from lib.schemas.path_cover import PathCoverResult, PhiBreakdown
from lib.utils.misc import bits_of, mask_of, popcount

logger = logging.getLogger(__name__)

DEFAULT_SIZE_CAP = 64
BRUTE_FORCE_MAX_EDGES = 20


class _PathCoverSearch:
    """
    Branch and bound over path families, one W endpoint at a time.

    The lowest undecided W vertex a either starts a path (grown through unused vertices and closed at
    another undecided W vertex) or is marked as never being an endpoint. W vertices may sit inside paths.
    """

    def __init__(self, h: Graph, w_mask: int):
        self.neighbours = [mask_of(h.adjacency[v]) for v in range(h.n)]
        self.full = (1 << h.n) - 1
        self.w_mask = w_mask
        self.non_w = self.full & ~w_mask
        self.target = popcount(self.non_w)
        self.best = 0
        self.best_paths: list[tuple[int, ...]] = []
        self.done = False
        self._memo: dict[tuple[int, int], int] = {}
        self._grow_memo: dict[tuple[int, int, int], int] = {}

    def _component(self, seed: int, allowed: int) -> int:
        component = seed
        frontier = seed

        while frontier:
            low = frontier & -frontier
            frontier ^= low
            fresh = self.neighbours[low.bit_length() - 1] & allowed & ~component
            component |= fresh
            frontier |= fresh

        return component

    def _coverable(self, used: int, endpoints: int) -> int:
        # non-W vertices lying in components of the unused graph that still hold two endpoints
        key = (used, endpoints)
        cached = self._memo.get(key)

        if cached is not None:
            return cached

        remaining = self.full & ~used
        total = 0

        while remaining:
            component = self._component(remaining & -remaining, remaining)
            remaining &= ~component

            if popcount(component & endpoints) >= 2:
                total += popcount(component & self.non_w)

        self._memo[key] = total

        return total

    def _grow_bound(self, end: int, used: int, endpoints: int) -> int:
        key = (end, used, endpoints)
        cached = self._grow_memo.get(key)

        if cached is not None:
            return cached

        remaining = self.full & ~used
        reachable = self.neighbours[end]
        total = 0

        while remaining:
            component = self._component(remaining & -remaining, remaining)
            remaining &= ~component
            count = popcount(component & endpoints)

            if count >= 2 or (count == 1 and component & reachable):
                total += popcount(component & self.non_w)

        self._grow_memo[key] = total

        return total

    def solve(self, used: int, decided: int, covered: int, paths: list[tuple[int, ...]]) -> None:
        if self.done:
            return

        endpoints = self.w_mask & ~used & ~decided

        if covered + self._coverable(used, endpoints) <= self.best:
            return

        if covered > self.best:
            self.best = covered
            self.best_paths = list(paths)
            self.done = covered == self.target

            if self.done:
                return

        if not endpoints:
            return

        start_bit = endpoints & -endpoints
        start = start_bit.bit_length() - 1
        self._grow(start, used | start_bit, decided | start_bit, covered, [start], paths)
        self.solve(used, decided | start_bit, covered, paths)

    def _grow(
        self, end: int, used: int, decided: int, covered: int, path: list[int], paths: list[tuple[int, ...]]
    ) -> None:
        if self.done:
            return

        endpoints = self.w_mask & ~used & ~decided

        if covered + self._grow_bound(end, used, endpoints) <= self.best:
            return

        for x in bits_of(self.neighbours[end] & ~used):
            bit = 1 << x
            extended = covered + (1 if bit & self.non_w else 0)
            path.append(x)

            if bit & endpoints:
                self.solve(used | bit, decided | bit, extended, paths + [tuple(path)])

            self._grow(x, used | bit, decided, extended, path, paths)
            path.pop()

            if self.done:
                return


def uc_exact(h: Graph, w: Iterable[int], size_cap: int = DEFAULT_SIZE_CAP) -> PathCoverResult:
    """
    Exact uc(H; W) with one optimal witness family.
    :param h: Graph, typically one red-purple component relabelled to 0..n-1
    :param w: Allowed path endpoints
    :param size_cap: Largest vertex count searched exactly
    :return: PathCoverResult with uncovered count and nontrivial witness paths
    :raise ComponentTooLargeError: If h has more than size_cap vertices
    """
    w = frozenset(w)

    if h.n > size_cap:
        raise ComponentTooLargeError(
            f"Component of size {h.n} exceeds the exact search cap {size_cap}", size=h.n, size_cap=size_cap
        )

    non_w_count = h.n - len(w)

    if len(w) < 2 or non_w_count == 0:
        return PathCoverResult(uncovered=non_w_count)

    search = _PathCoverSearch(h, mask_of(w))
    search.solve(used=0, decided=0, covered=0, paths=[])

    return PathCoverResult(uncovered=non_w_count - search.best, witness=tuple(search.best_paths))


def validate_witness(h: Graph, w: Iterable[int], result: PathCoverResult) -> bool:
    """
    Structural re-check of a witness: disjoint simple paths along edges, endpoints in W,
    and an uncovered count matching the witness.
    """
    w = frozenset(w)
    seen: set[int] = set()

    for path in result.witness:
        if len(path) < 2 or path[0] not in w or path[-1] not in w:
            return False

        if any(x in seen for x in path) or len(set(path)) != len(path):
            return False

        if any(not h.has_edge(x, y) for x, y in zip(path, path[1:])):
            return False

        seen.update(path)

    covered = sum(1 for x in seen if x not in w)

    return result.uncovered == h.n - len(w) - covered


def uc_bruteforce(h: Graph, w: Iterable[int]) -> int:
    """
    uc(H; W) by enumerating edge subsets that form linear forests with every path end in W.
    Partial subsets that already contain a cycle or a degree-3 vertex are discarded early.
    :param h: Graph with at most 20 edges
    :param w: Allowed path endpoints
    :return: Minimum number of uncovered vertices outside W
    :raise EnumerationTooLargeError: If h has more than 20 edges
    """
    w = frozenset(w)
    edges = list(h.edges())

    if len(edges) > BRUTE_FORCE_MAX_EDGES:
        raise EnumerationTooLargeError(f"Edge-subset enumeration limited to {BRUTE_FORCE_MAX_EDGES} edges")

    non_w = [x for x in range(h.n) if x not in w]
    best = 0

    def visit(index: int, degree: list[int], label: list[int]) -> None:
        nonlocal best

        if index == len(edges):
            if all(degree[x] != 1 or x in w for x in range(h.n)):
                best = max(best, sum(1 for x in non_w if degree[x] > 0))
            return

        visit(index + 1, degree, label)
        u, v = edges[index]

        if degree[u] < 2 and degree[v] < 2 and label[u] != label[v]:
            merged, absorbed = label[u], label[v]
            degree = degree.copy()
            degree[u] += 1
            degree[v] += 1
            visit(index + 1, degree, [merged if x == absorbed else x for x in label])

    visit(0, [0] * h.n, list(range(h.n)))

    return len(non_w) - best


def phi_global(g: Graph, col: TriColouring, size_cap: int = DEFAULT_SIZE_CAP) -> PhiBreakdown:
    """
    Splits Phi(G) = uc(G[P + R]; P) over red-purple components, each vertex taking an equal share.
    :param g: Graph
    :param col: Global colouring of g
    :param size_cap: Exact search cap per component
    :return: PhiBreakdown with per-vertex shares and per-component uc
    :raise ComponentTooLargeError: Carrying the offending component id
    """
    blocks = components(g, col.p | col.r)
    per_vertex: dict[int, Fraction] = {}
    per_component: dict[int, int] = {}

    for component_id, block in enumerate(blocks):
        purple = block & col.p

        if len(purple) < 2:
            uncovered = len(block) - len(purple)
        else:
            sub, mapping = g.induced_subgraph(block)
            local = {vertex: index for index, vertex in enumerate(mapping)}

            try:
                uncovered = uc_exact(sub, (local[x] for x in purple), size_cap=size_cap).uncovered
            except ComponentTooLargeError as ex:
                raise ComponentTooLargeError(
                    f"Red-purple component {component_id} has {len(block)} vertices, above cap {size_cap}",
                    size=len(block),
                    size_cap=size_cap,
                    component_id=component_id,
                    exception=ex,
                )

        per_component[component_id] = uncovered

        if uncovered:
            share = Fraction(uncovered, len(block))

            for vertex in block:
                per_vertex[vertex] = share

    return PhiBreakdown(
        n=g.n,
        phi_total=sum(per_component.values()),
        per_vertex=per_vertex,
        per_component=per_component,
        components=tuple(blocks),
    )


def component_share(
    g: Graph, block: Iterable[int], purple: Iterable[int], size_cap: int = DEFAULT_SIZE_CAP
) -> Fraction:
    """
    uc(G[C]; P) / |C| for one component C, zero for an empty component.
    """
    block = frozenset(block)

    if not block:
        return Fraction(0)

    purple = block & frozenset(purple)

    if len(purple) < 2:
        return Fraction(len(block) - len(purple), len(block))

    sub, mapping = g.induced_subgraph(block)
    local = {vertex: index for index, vertex in enumerate(mapping)}
    terminals = [local[x] for x in purple]

    return Fraction(uc_exact(sub, terminals, size_cap=size_cap).uncovered, len(block))


def phi_local(g: Graph, v: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Fraction:
    """
    Local share of v: uc over its component in the k-local colouring, divided by the component size.
    Zero when v is sapphire in the k-local colouring.
    """
    local = local_colouring(g, v, k)

    return component_share(g, local.component_of_center, local.p_k, size_cap=size_cap)
