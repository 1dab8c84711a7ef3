"""
Star attachments to a robustly sapphire set.

(H, A, B) is a star attachment when A and B carry no inner edges, each b sees at most one vertex of A,
A only touches B, and B is robustly sapphire once the A-B edges are removed (property_P_check).
Removing those edges changes the strong 4-core and the local proxy in a closed form, checked here.
"""

import logging
from collections.abc import Iterable
from functools import partial

import numpy as np
from lib.exceptions import InvalidRadiusError, PropertyViolationError
from lib.graph.colouring import (
    CORE_DEGREE,
    global_colouring,
    property_P_check,
    robust_candidates,
    robust_sapphire_check,
    separated_subset,
)
from lib.graph.core import Edge, Graph, sample_gnp
from lib.graph.estimators import l_tilde_k
from lib.graph.path_cover import DEFAULT_SIZE_CAP
from lib.schemas.graph import GnpParams
from lib.schemas.resample import AttachmentAuditReport, IdentityCheck, PropertyInstance
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng, derive_seed
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

MAX_STAR = 5


def _draw_star_sizes(rng: np.random.Generator, stars: int, available: int) -> list[int]:
    """
    Uniform sizes in 0..MAX_STAR, each clamped to the B vertices still unused
    """
    sizes = []

    for _ in range(stars):
        size = min(int(rng.integers(0, MAX_STAR + 1)), available)
        sizes.append(size)
        available -= size

    return sizes


def generate_property_instance(
    seed: int,
    clusters: int = 12,
    cluster_size: int = 20,
    cluster_c: float = 13.0,
    noise_size: int = 40,
    noise_c: float = 1.5,
    stars: int = 4,
    star_sizes: list[int] | None = None,
) -> PropertyInstance:
    """
    Builds a star attachment from a disjoint union of dense random clusters and a sparse random piece.
    B is a greedy 5-separated subset of the robust candidates, A is a set of fresh vertices and
    each star takes distinct B vertices. The result is re-verified before it is returned.
    :param seed: Instance seed
    :param clusters: Number of dense clusters
    :param cluster_size: Vertices per cluster
    :param cluster_c: Expected degree inside a cluster
    :param noise_size: Vertices of the sparse piece
    :param noise_c: Expected degree of the sparse piece
    :param stars: Number of A vertices when star_sizes is not given, their sizes drawn to fit the B pool
    :param star_sizes: Explicit number of B neighbours of each A vertex
    :return: PropertyInstance
    :raise PropertyViolationError: If explicit star sizes need more B vertices than exist, or on a failed re-check
    """
    edges: list[Edge] = []
    offset = 0

    pieces = [(cluster_size, cluster_c, derive_seed(seed, "instance-cluster", index)) for index in range(clusters)]
    pieces.append((noise_size, noise_c, derive_seed(seed, "instance-noise")))

    for size, c, piece_seed in pieces:
        piece = sample_gnp(GnpParams(n=size, c=c, seed=piece_seed))
        edges.extend((u + offset, v + offset) for u, v in piece.edges())
        offset += size

    rng = derive_rng(seed, "instance-stars")
    n = offset + (stars if star_sizes is None else len(star_sizes))
    base = Graph.from_edges(n, edges)
    b = separated_subset(base, robust_candidates(base, global_colouring(base).s))
    pool = [int(x) for x in rng.permutation(sorted(b))]

    if star_sizes is None:
        star_sizes = _draw_star_sizes(rng, stars, len(pool))
    elif sum(star_sizes) > len(pool):
        raise PropertyViolationError(f"Stars of sizes {star_sizes} need more than the {len(pool)} available B vertices")

    for index, size in enumerate(star_sizes):
        edges.extend((pool.pop(), offset + index) for _ in range(size))

    instance = PropertyInstance(
        n=n,
        edges=tuple(sorted(edges)),
        a=frozenset(range(offset, n)),
        b=b,
        seed=seed,
    )
    check = property_P_check(instance.graph(), instance.a, instance.b)

    if not check:
        raise PropertyViolationError(f"Generated instance {seed} fails {check.violation}", violation=check.violation)

    return instance


def _require_attachment(h: Graph, a: frozenset[int], b: frozenset[int]) -> Graph:
    check = property_P_check(h, a, b)

    if not check:
        raise PropertyViolationError(
            f"(H, A, B) is not a star attachment: {check.violation} at {check.witness}", violation=check.violation
        )

    return h.without_edges((x, y) for x in a for y in h.adjacency[x])


def star_identity_check(
    h: Graph, a: Iterable[int], b: Iterable[int], k: int, size_cap: int = DEFAULT_SIZE_CAP
) -> IdentityCheck:
    """
    Verifies L-tilde_k(H) = L-tilde_k(H*) + Y in exact arithmetic, where H* drops the A-B edges and
    Y counts the stars with at least 2 edges.
    :param h: Graph
    :param a: Star centres
    :param b: Robust attachment vertices
    :param k: Local radius, at least 2
    :param size_cap: Exact path-cover cap
    :return: IdentityCheck carrying both sides and Y
    :raise InvalidRadiusError: If k < 2
    :raise PropertyViolationError: If (h, a, b) is not a star attachment
    """
    if k < 2:
        raise InvalidRadiusError(f"The star identity needs k >= 2, got {k}")

    a, b = frozenset(a), frozenset(b)
    h_star = _require_attachment(h, a, b)
    stars = sum(1 for x in a if h.degree(x) >= 2)
    lhs = l_tilde_k(h, k, size_cap)
    rhs = l_tilde_k(h_star, k, size_cap) + stars
    holds = lhs == rhs

    return IdentityCheck(holds=holds, failed=() if holds else ("star",), lhs=lhs, rhs=rhs, stars=stars)


def core_update_check(h: Graph, a: Iterable[int], b: Iterable[int]) -> IdentityCheck:
    """
    With A' the star centres of degree at least 4 and B' the neighbours of the other centres, verifies
    S(H) = (S(H*) - B') + A', P(H) = P(H*) + B' and R(H) = R(H*) - A',
    and that B minus N(A) stays robustly sapphire in H.
    :param h: Graph
    :param a: Star centres
    :param b: Robust attachment vertices
    :return: IdentityCheck, failed lists "S", "P", "R" or "robust/RSx"
    :raise PropertyViolationError: If (h, a, b) is not a star attachment
    """
    a, b = frozenset(a), frozenset(b)
    h_star = _require_attachment(h, a, b)
    col, col_star = global_colouring(h), global_colouring(h_star)
    a_prime = frozenset(x for x in a if h.degree(x) >= CORE_DEGREE)
    b_prime = frozenset(y for x in a - a_prime for y in h.adjacency[x])
    failed = []

    if col.s != (col_star.s - b_prime) | a_prime:
        failed.append("S")

    if col.p != col_star.p | b_prime:
        failed.append("P")

    if col.r != col_star.r - a_prime:
        failed.append("R")

    attached = frozenset(y for x in a for y in h.adjacency[x])
    retained = robust_sapphire_check(h, b - attached, core=col.s)

    if not retained:
        failed.append(f"robust/{retained.violation}")

    return IdentityCheck(holds=not failed, failed=tuple(failed))


def _attachment_trial(k: int, seed: int, size_cap: int, index: int) -> tuple[int, bool, bool]:
    instance_seed = derive_seed(seed, "attachment", index)
    instance = generate_property_instance(instance_seed)
    h = instance.graph()
    star = star_identity_check(h, instance.a, instance.b, k, size_cap)
    core = core_update_check(h, instance.a, instance.b)

    return instance_seed, bool(star), bool(core)


@benchmark()
def attachment_audit(
    instances: int, k: int, seed: int, threads: int = 1, size_cap: int = DEFAULT_SIZE_CAP
) -> AttachmentAuditReport:
    """
    Runs star_identity_check and core_update_check on generated star attachments
    """
    outcomes = parallel_map(
        partial(_attachment_trial, k, seed, size_cap), range(instances), threads=threads, description="attachments"
    )
    star_failures = tuple(instance_seed for instance_seed, star, _ in outcomes if not star)
    core_failures = tuple(instance_seed for instance_seed, _, core in outcomes if not core)
    logger.info(
        f"Attachment audit: {instances} instances, {len(star_failures)} star failures, "
        f"{len(core_failures)} core-update failures"
    )

    return AttachmentAuditReport(
        instances=instances, k=k, seed=seed, star_failures=star_failures, core_failures=core_failures
    )
