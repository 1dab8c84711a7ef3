import heapq
import logging
import math
from collections import deque
from collections.abc import Iterable, Sequence

from lib.exceptions import EnumerationTooLargeError, InvalidRadiusError, InvalidVertexError
from lib.graph.core import Graph, bfs_distances, components
from lib.schemas.base import CheckResult
from lib.schemas.colouring import ColouringAuditReport, LocalColouring, TriColouring
from lib.utils.misc import mask_of
from lib.utils.seeding import derive_rng

logger = logging.getLogger(__name__)

SAPPHIRE, PURPLE, RED = 0, 1, 2
CORE_DEGREE = 4
ROBUST_DEGREE = 5
SEPARATION = 5
BRUTE_FORCE_MAX_VERTICES = 16


def peel(
    adjacency: Sequence[Sequence[int]],
    frozen: Sequence[bool] | None = None,
    reverse: bool = False,
) -> tuple[bytearray, list[int]]:
    """
    Runs the red/purple peeling process until no vertex is eligible.
    An eligible vertex is sapphire or purple, not frozen, with fewer than 4 sapphire neighbours.
    Recolouring x red turns its non-frozen sapphire neighbours purple.
    :param adjacency: Adjacency rows over vertices 0..len-1
    :param frozen: Vertices that stay sapphire forever (the boundary of a local ball)
    :param reverse: Recolour the largest eligible id first instead of the smallest
    :return: Final colour per vertex and the order in which vertices turned red
    """
    size = len(adjacency)
    colour = bytearray(size)
    sapphire_count = [len(row) for row in adjacency]
    frozen = frozen if frozen is not None else [False] * size
    sign = -1 if reverse else 1
    queued = bytearray(size)
    heap = []

    for x in range(size):
        if not frozen[x] and sapphire_count[x] < CORE_DEGREE:
            queued[x] = 1
            heap.append(sign * x)

    heapq.heapify(heap)
    peel_order = []

    def leave_sapphire(x: int) -> None:
        for y in adjacency[x]:
            sapphire_count[y] -= 1

            if sapphire_count[y] < CORE_DEGREE and not queued[y] and not frozen[y]:
                queued[y] = 1
                heapq.heappush(heap, sign * y)

    while heap:
        x = sign * heapq.heappop(heap)
        was_sapphire = colour[x] == SAPPHIRE
        colour[x] = RED
        peel_order.append(x)

        if was_sapphire:
            leave_sapphire(x)

        for y in adjacency[x]:
            if colour[y] == SAPPHIRE and not frozen[y]:
                colour[y] = PURPLE
                leave_sapphire(y)

    return colour, peel_order


def global_colouring(g: Graph, reverse: bool = False) -> TriColouring:
    """
    Colours every vertex sapphire, purple or red. Sapphire is the strong 4-core S(G),
    purple is its neighbourhood and red is the rest.
    :param g: Graph
    :param reverse: Tie-break on the largest eligible id, the partition does not depend on it
    :return: TriColouring with the red peel order
    """
    colour, peel_order = peel(g.adjacency, reverse=reverse)

    return TriColouring(
        s=frozenset(v for v in range(g.n) if colour[v] == SAPPHIRE),
        p=frozenset(v for v in range(g.n) if colour[v] == PURPLE),
        r=frozenset(v for v in range(g.n) if colour[v] == RED),
        peel_order=tuple(peel_order),
    )


def brute_force_strong_core(g: Graph) -> frozenset[int]:
    """
    Union of every vertex set A such that each vertex of A and of N(A) has at least 4 neighbours in A.
    :param g: Graph with at most 16 vertices
    :return: The strong 4-core
    :raise EnumerationTooLargeError: If the graph has more than 16 vertices
    """
    if g.n > BRUTE_FORCE_MAX_VERTICES:
        raise EnumerationTooLargeError(f"Exhaustive search limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {g.n}")

    neighbour_masks = [mask_of(g.adjacency[v]) for v in range(g.n)]
    union = 0

    for subset in range(1, 1 << g.n):
        closed = subset

        for v in range(g.n):
            if subset >> v & 1:
                closed |= neighbour_masks[v]

        if all((neighbour_masks[v] & subset).bit_count() >= CORE_DEGREE for v in range(g.n) if closed >> v & 1):
            union |= subset

    return frozenset(v for v in range(g.n) if union >> v & 1)


def local_colouring(g: Graph, v: int, k: int) -> LocalColouring:
    """
    Runs the colouring process inside the ball B(v, k) with the sphere at distance k kept sapphire.
    :param g: Graph
    :param v: Centre vertex
    :param k: Radius, at least 1
    :return: LocalColouring of the ball
    :raise InvalidRadiusError: If k < 1
    """
    g.check_vertex(v)

    if k < 1:
        raise InvalidRadiusError(f"Local colouring needs radius k >= 1, got {k}")

    distances = bfs_distances(g, v, k)
    sub, mapping = g.induced_subgraph(distances)
    boundary = [distances[x] == k for x in mapping]
    colour, _ = peel(sub.adjacency, frozen=boundary)

    interior_sapphire = [x for x in range(sub.n) if colour[x] == SAPPHIRE and not boundary[x]]
    s_local = {x for x in range(sub.n) if colour[x] == SAPPHIRE}
    p_local = {y for x in interior_sapphire for y in sub.adjacency[x] if y not in s_local}
    r_local = set(range(sub.n)) - s_local - p_local

    centre = mapping.index(v)
    component: set[int] = set()

    if centre not in s_local:
        component.add(centre)
        queue = deque([centre])

        while queue:
            x = queue.popleft()

            for y in sub.adjacency[x]:
                if y not in s_local and y not in component:
                    component.add(y)
                    queue.append(y)

    def to_global(vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(mapping[x] for x in vertices)

    return LocalColouring(
        center=v,
        radius=k,
        s_k=to_global(s_local),
        p_k=to_global(p_local),
        r_k=to_global(r_local),
        boundary=to_global(x for x in range(sub.n) if boundary[x]),
        component_of_center=to_global(component),
    )


def k_core(g: Graph, k: int) -> frozenset[int]:
    """
    Vertex set of the maximal induced subgraph with minimum degree at least k
    """
    degree = [len(row) for row in g.adjacency]
    removed = bytearray(g.n)
    queue = deque(v for v in range(g.n) if degree[v] < k)

    for v in queue:
        removed[v] = 1

    while queue:
        x = queue.popleft()

        for y in g.adjacency[x]:
            degree[y] -= 1

            if degree[y] < k and not removed[y]:
                removed[y] = 1
                queue.append(y)

    return frozenset(v for v in range(g.n) if not removed[v])


def robust_sapphire_check(h: Graph, b: Iterable[int], core: frozenset[int] | None = None) -> CheckResult:
    """
    Checks that every x in B and N(B) has its closed neighbourhood inside S(H) and degree at least 5,
    and that vertices of B are pairwise at distance at least 5.
    :param h: Graph
    :param b: Candidate vertex set
    :param core: Precomputed S(H), computed when missing
    :return: CheckResult with violation "RS1" or "RS2" and the offending vertices
    """
    b = sorted(set(b))

    if not b:
        return CheckResult(ok=True)

    core = core if core is not None else global_colouring(h).s

    for x in sorted(set(b).union(*(h.adjacency[y] for y in b))):
        if h.degree(x) < ROBUST_DEGREE or x not in core or any(y not in core for y in h.adjacency[x]):
            return CheckResult(ok=False, violation="RS1", witness=(x,))

    members = set(b)

    for x in b:
        for y in bfs_distances(h, x, SEPARATION - 1):
            if y != x and y in members:
                return CheckResult(ok=False, violation="RS2", witness=(x, y))

    return CheckResult(ok=True)


def robust_candidates(h: Graph, core: frozenset[int], within: Iterable[int] | None = None) -> frozenset[int]:
    """
    Largest set satisfying the first robust sapphire condition: every x in N[b] has degree at least 5
    and its closed neighbourhood inside the core.
    :param h: Graph
    :param core: S(H)
    :param within: Restrict the candidates to these vertices
    :return: Candidate set
    """
    solid: dict[int, bool] = {}

    def is_solid(x: int) -> bool:
        if x not in solid:
            solid[x] = x in core and h.degree(x) >= ROBUST_DEGREE and all(y in core for y in h.adjacency[x])

        return solid[x]

    pool = range(h.n) if within is None else sorted(set(within))

    return frozenset(b for b in pool if is_solid(b) and all(is_solid(x) for x in h.adjacency[b]))


def separated_subset(h: Graph, candidates: Iterable[int]) -> frozenset[int]:
    """
    Greedy maximal subset, in ascending id order, whose vertices are pairwise at distance at least 5
    """
    chosen = []
    blocked: set[int] = set()

    for b in sorted(set(candidates)):
        if b not in blocked:
            chosen.append(b)
            blocked.update(bfs_distances(h, b, SEPARATION - 1))

    return frozenset(chosen)


def property_P_check(h: Graph, a: Iterable[int], b: Iterable[int]) -> CheckResult:
    """
    Checks the star-attachment configuration of (H, A, B):
    P1 no edge inside A or inside B, P2 every b has at most one neighbour in A,
    P3 every neighbour of an A vertex lies in B, P4 B is robustly sapphire in H - E(A, B).
    :param h: Graph
    :param a: Star centres
    :param b: Attachment vertices
    :return: CheckResult naming the first failing condition
    :raise InvalidVertexError: If A and B overlap
    """
    a, b = frozenset(a), frozenset(b)

    if a & b:
        raise InvalidVertexError(f"A and B must be disjoint, both contain {sorted(a & b)[:5]}")

    for side in (a, b):
        for x in sorted(side):
            for y in h.adjacency[x]:
                if y in side:
                    return CheckResult(ok=False, violation="P1", witness=(x, y))

    for x in sorted(b):
        attached = [y for y in h.adjacency[x] if y in a]

        if len(attached) > 1:
            return CheckResult(ok=False, violation="P2", witness=(x, *attached))

    for x in sorted(a):
        for y in h.adjacency[x]:
            if y not in b:
                return CheckResult(ok=False, violation="P3", witness=(x, y))

    h_star = h.without_edges((x, y) for x in a for y in h.adjacency[x])
    robust = robust_sapphire_check(h_star, b)

    if not robust:
        return CheckResult(ok=False, violation=f"P4/{robust.violation}", witness=robust.witness)

    return CheckResult(ok=True)


def colouring_audit(g: Graph, checks: int = 1000, max_radius: int = 6, seed: int = 0) -> ColouringAuditReport:
    """
    Re-checks the structural invariants of the global colouring on one graph: no sapphire-red edge,
    at least a quarter red in every red-purple component, components of size at most (ln n)^4,
    and S(G) within B(w, k) contained in the local core at (w, k) for randomly drawn centres and radii.
    :param g: Graph
    :param checks: Number of random (w, k) pairs for the local core comparison
    :param max_radius: Largest radius drawn
    :param seed: Seed of the (w, k) draws
    :return: ColouringAuditReport
    """
    col = global_colouring(g)
    sapphire_red = sum(1 for x in col.s for y in g.adjacency[x] if y in col.r)
    blocks = components(g, col.p | col.r)
    sparse = tuple(min(block) for block in blocks if 4 * len(block & col.r) < len(block))
    violations = []

    if g.n:
        rng = derive_rng(seed, "colouring-audit")

        for _ in range(checks):
            w = int(rng.integers(0, g.n))
            k = int(rng.integers(1, max_radius + 1))
            inside = col.s.intersection(bfs_distances(g, w, k))

            if not inside <= local_colouring(g, w, k).s_k:
                violations.append((w, k))

    return ColouringAuditReport(
        n=g.n,
        sapphire=len(col.s),
        purple=len(col.p),
        red=len(col.r),
        sapphire_red_edges=sapphire_red,
        sparse_red_components=sparse,
        max_component=max((len(block) for block in blocks), default=0),
        component_bound=math.log(g.n) ** 4 if g.n > 1 else float(g.n),
        local_core_checks=checks if g.n else 0,
        local_core_violations=tuple(violations),
    )
