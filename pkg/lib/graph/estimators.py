import logging
import math
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from lib.exceptions import InvalidGraphParametersError, InvalidRadiusError, NotATreeError
from lib.graph.colouring import SAPPHIRE, global_colouring, peel
from lib.graph.core import Graph, bfs_distances
from lib.graph.path_cover import DEFAULT_SIZE_CAP, component_share, phi_global, phi_local
from lib.schemas.colouring import TriColouring
from lib.schemas.estimators import CensusEntry, ProxyValues, RootedTreeClass
from lib.schemas.path_cover import PhiBreakdown

logger = logging.getLogger(__name__)

MAX_TRUNCATION = 2**63 - 1


@dataclass(frozen=True)
class LocalComponent:
    """
    Component of a vertex in its k-local colouring, with the purple vertices inside it and the vertex's share
    """

    component: frozenset[int]
    purple: frozenset[int]
    phi: Fraction

    @property
    def red(self) -> frozenset[int]:
        return self.component - self.purple


EMPTY_LOCAL = LocalComponent(component=frozenset(), purple=frozenset(), phi=Fraction(0))


def _fits_in_radius(g: Graph, v: int, block: frozenset[int], radius: int) -> bool:
    seen = {v}
    frontier = [v]

    for _ in range(radius):
        next_frontier = [y for x in frontier for y in g.adjacency[x] if y in block and y not in seen]
        seen.update(next_frontier)
        frontier = next_frontier

        if not frontier:
            break

    return len(seen) == len(block)


def _escaping_component(
    g: Graph, col: TriColouring, block: frozenset[int], v: int, k: int, size_cap: int
) -> LocalComponent:
    # Global sapphire vertices stay sapphire in every local colouring and red-purple components are
    # separated by them, so the local process only needs to run on block vertices within distance k-1.
    distances = bfs_distances(g, v, k - 1)
    inner = [x for x in distances if x in block]
    inner_set = set(inner)
    sub, mapping = g.induced_subgraph(inner_set.union(*(g.adjacency[x] for x in inner)))
    colour, _ = peel(sub.adjacency, frozen=[x not in inner_set for x in mapping])
    survivors = {mapping[x] for x in range(sub.n) if colour[x] == SAPPHIRE and mapping[x] in inner_set}

    if v in survivors:
        return EMPTY_LOCAL

    def locally_sapphire_interior(y: int) -> bool:
        return y in survivors or (y in col.s and y in distances)

    component = {v}
    queue = deque([v])

    while queue:
        x = queue.popleft()

        for y in g.adjacency[x]:
            if y in inner_set and y not in survivors and y not in component:
                component.add(y)
                queue.append(y)

    purple = frozenset(x for x in component if any(locally_sapphire_interior(y) for y in g.adjacency[x]))
    component = frozenset(component)

    return LocalComponent(component=component, purple=purple, phi=component_share(g, component, purple, size_cap))


def local_phi_table(
    g: Graph,
    k: int,
    col: TriColouring | None = None,
    breakdown: PhiBreakdown | None = None,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> dict[int, LocalComponent]:
    """
    k-local component and share for every red or purple vertex. Sapphire vertices are absent and have share 0.
    Where the global component of v lies within distance k-1 of v, the local and global components coincide.
    :param g: Graph
    :param k: Radius, at least 1
    :param col: Global colouring, computed when missing
    :param breakdown: Global shares, computed when missing
    :param size_cap: Exact search cap per component
    :return: Mapping vertex -> LocalComponent
    :raise InvalidRadiusError: If k < 1
    :raise ComponentTooLargeError: If a component needing exact search exceeds size_cap
    """
    if k < 1:
        raise InvalidRadiusError(f"Local shares need radius k >= 1, got {k}")

    col = col if col is not None else global_colouring(g)
    breakdown = breakdown if breakdown is not None else phi_global(g, col, size_cap)
    table: dict[int, LocalComponent] = {}

    for block in breakdown.components:
        whole = LocalComponent(component=block, purple=block & col.p, phi=breakdown.phi(min(block)))

        for v in sorted(block):
            if _fits_in_radius(g, v, block, k - 1):
                table[v] = whole
            else:
                table[v] = _escaping_component(g, col, block, v, k, size_cap)

    return table


def l_tilde(g: Graph, size_cap: int = DEFAULT_SIZE_CAP) -> int:
    return phi_global(g, global_colouring(g), size_cap).l_tilde


def l_tilde_k(g: Graph, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Fraction:
    """
    n minus the sum of k-local shares, exact
    """
    table = local_phi_table(g, k, size_cap=size_cap)

    return g.n - sum((entry.phi for entry in table.values()), Fraction(0))


def default_truncation(c: float, k: int) -> int | None:
    """
    Truncation size (10ck)^(2k), floored and at least 1.
    :param c: Expected degree, positive
    :param k: Radius, at least 1
    :return: The truncation, or None (unbounded) above 2^63 - 1
    :raise InvalidGraphParametersError: If c <= 0 or k < 1
    """
    if c <= 0 or k < 1:
        raise InvalidGraphParametersError(f"Truncation needs c > 0 and k >= 1, got c={c}, k={k}")

    base = Fraction(str(c)) * 10 * k

    if 2 * k * math.log(base) > math.log(MAX_TRUNCATION) + 1:
        return None

    value = math.floor(base ** (2 * k))

    return None if value > MAX_TRUNCATION else max(1, value)


def tree_ball(g: Graph, v: int, k: int, limit: int | None = None) -> list[int] | None:
    """
    Vertices of B(v, k) in BFS order when the induced ball is a tree of at most limit vertices.
    Stops at the first cycle or as soon as the ball grows past the limit.
    :return: Ball vertices starting with v, or None
    """
    parent = {v: -1}
    order = [v]
    frontier = [v]

    for _ in range(k):
        next_frontier = []

        for x in frontier:
            for y in g.adjacency[x]:
                if y == parent[x]:
                    continue

                if y in parent:
                    return None

                parent[y] = x
                order.append(y)
                next_frontier.append(y)

                if limit is not None and len(order) > limit:
                    return None

        frontier = next_frontier

    for x in frontier:
        for y in g.adjacency[x]:
            if y in parent and y != parent[x]:
                return None

    return order


def canonical_rooted_tree(t: Graph, r: int) -> str:
    """
    AHU code of a rooted tree: each vertex becomes "(" + sorted child codes + ")".
    Equal codes if and only if the rooted trees are isomorphic.
    :param t: Tree
    :param r: Root
    :return: Canonical code
    :raise NotATreeError: If t is not a tree
    """
    t.check_vertex(r)
    parent = {r: -1}
    order = [r]

    for x in order:
        for y in t.adjacency[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)

    if len(order) != t.n or t.edge_count != t.n - 1:
        raise NotATreeError(f"Graph with {t.n} vertices and {t.edge_count} edges is not a tree")

    child_codes: dict[int, list[str]] = {x: [] for x in order}
    code = "()"

    for x in reversed(order):
        code = "(" + "".join(sorted(child_codes[x])) + ")"

        if parent[x] >= 0:
            child_codes[parent[x]].append(code)

    return code


def rooted_tree_alpha(t: Graph, r: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> Fraction:
    """
    Weight 1 - (local share of the root), computed on the tree itself
    """
    return 1 - phi_local(t, r, k, size_cap)


def _check_truncation(k: int, truncation: int | None) -> None:
    if k < 1:
        raise InvalidRadiusError(f"Tree-ball estimators need radius k >= 1, got {k}")

    if truncation is not None and truncation < 1:
        raise InvalidGraphParametersError(f"Truncation must be at least 1, got {truncation}")


def l_hat_k(
    g: Graph,
    k: int,
    truncation: int | None,
    size_cap: int = DEFAULT_SIZE_CAP,
    table: dict[int, LocalComponent] | None = None,
) -> Fraction:
    """
    Sum of 1 - (local share) over vertices whose k-ball is a tree with at most truncation vertices.
    :param g: Graph
    :param k: Radius
    :param truncation: Largest tree size counted, None for no size limit
    :param size_cap: Exact search cap per component
    :param table: Precomputed local shares
    :return: Exact rational
    """
    _check_truncation(k, truncation)
    table = table if table is not None else local_phi_table(g, k, size_cap=size_cap)
    total = Fraction(0)

    for v in range(g.n):
        if tree_ball(g, v, k, truncation) is not None:
            total += 1 - table.get(v, EMPTY_LOCAL).phi

    return total


def neighbourhood_census(
    g: Graph, k: int, truncation: int | None, size_cap: int = DEFAULT_SIZE_CAP
) -> list[CensusEntry]:
    """
    Counts vertices by the isomorphism class of their k-ball, restricted to trees of at most truncation vertices.
    :return: Entries sorted by canonical code
    """
    _check_truncation(k, truncation)
    counts: dict[str, int] = {}
    classes: dict[str, RootedTreeClass] = {}

    for v in range(g.n):
        order = tree_ball(g, v, k, truncation)

        if order is None:
            continue

        tree, mapping = g.induced_subgraph(order)
        root = mapping.index(v)
        code = canonical_rooted_tree(tree, root)
        counts[code] = counts.get(code, 0) + 1

        if code not in classes:
            alpha = rooted_tree_alpha(tree, root, k, size_cap)
            classes[code] = RootedTreeClass(canonical_code=code, size=tree.n, alpha=alpha)

    return [CensusEntry(tree=classes[code], count=counts[code]) for code in sorted(counts)]


def census_total(entries: Iterable[CensusEntry]) -> Fraction:
    return sum((entry.tree.alpha * entry.count for entry in entries), Fraction(0))


def max_component_size(breakdown: PhiBreakdown) -> int:
    return max((len(block) for block in breakdown.components), default=0)


def proxy_values(g: Graph, k: int, truncation: int | None, size_cap: int = DEFAULT_SIZE_CAP) -> ProxyValues:
    """
    L-tilde, L-tilde_k and L-hat_k of one graph, sharing a single colouring pass
    """
    col = global_colouring(g)
    breakdown = phi_global(g, col, size_cap)
    table = local_phi_table(g, k, col=col, breakdown=breakdown, size_cap=size_cap)

    return ProxyValues(
        n=g.n,
        k=k,
        truncation=truncation,
        l_tilde=breakdown.l_tilde,
        l_tilde_k=g.n - sum((entry.phi for entry in table.values()), Fraction(0)),
        l_hat_k=l_hat_k(g, k, truncation, size_cap, table=table),
        max_rp_comp=max_component_size(breakdown),
    )
