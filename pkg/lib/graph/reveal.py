"""
Two-round edge revealing process.

G is the union of G1 ~ G(n, p1) and a sparse G2 ~ G(n, p2) with (1 - p) = (1 - p1)(1 - p2). The process reveals
edges step by step until it holds sets A4, B4 such that (G, A4, B4) is a star attachment, without looking at
the pairs between A4 and B4 beyond counting them. Every reveal goes through an EdgeOracle which keeps an access log.
"""

import logging
from collections.abc import Iterable
from functools import partial

from lib.exceptions import InvalidGraphParametersError, RevealProcessError
from lib.graph.colouring import global_colouring, property_P_check, robust_candidates, separated_subset
from lib.graph.core import Edge, Graph, sample_gnp
from lib.schemas.graph import GnpParams
from lib.schemas.resample import AccessLogEntry, RevealAuditReport, RevealOutcome, RevealReport, RevealVerification
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_seed
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

AGGREGATE_KINDS = ("G:count>=2", "G2:count")


class EdgeOracle:
    """
    Answers edge queries on G1, G2 and their union, logging every query
    """

    def __init__(self, g1: Graph, g2: Graph):
        self.g1 = g1
        self.g2 = g2
        self.g = Graph.from_edges(g1.n, [*g1.edges(), *g2.edges()])
        self.log: list[AccessLogEntry] = []

    def _record(self, kind: str, left: Iterable[int], right: Iterable[int] | None = None, complement: bool = False):
        self.log.append(
            AccessLogEntry(
                kind=kind,
                left=frozenset(left),
                right=None if right is None else frozenset(right),
                complement_right=complement,
            )
        )

    @staticmethod
    def _between(graph: Graph, left: frozenset[int], right: frozenset[int], complement: bool) -> set[Edge]:
        found = set()

        for x in left:
            for y in graph.adjacency[x]:
                if (y not in right) if complement else (y in right):
                    found.add((min(x, y), max(x, y)))

        return found

    def reveal_g1(self) -> set[Edge]:
        self._record("G1", range(self.g1.n))

        return set(self.g1.edges())

    def reveal_g2_within(self, vertices: Iterable[int]) -> set[Edge]:
        vertices = frozenset(vertices)
        self._record("G2:within", vertices)

        return self._between(self.g2, vertices, vertices, complement=False)

    def reveal_g2_between(self, left: Iterable[int], right: Iterable[int], complement: bool = False) -> set[Edge]:
        left, right = frozenset(left), frozenset(right)
        self._record("G2:between", left, right, complement)

        return self._between(self.g2, left, right, complement)

    def reveal_g_between(self, left: Iterable[int], right: Iterable[int]) -> set[Edge]:
        left, right = frozenset(left), frozenset(right)
        self._record("G:between", left, right)

        return self._between(self.g, left, right, complement=False)

    def crowded(self, candidates: Iterable[int], targets: Iterable[int]) -> frozenset[int]:
        """
        One bit per candidate: whether it has at least two G-neighbours among targets
        """
        candidates, targets = frozenset(candidates), frozenset(targets)
        self._record("G:count>=2", candidates, targets)

        return frozenset(b for b in candidates if sum(1 for y in self.g.adjacency[b] if y in targets) >= 2)

    def count_g2_between(self, left: Iterable[int], right: Iterable[int]) -> int:
        left, right = frozenset(left), frozenset(right)
        self._record("G2:count", left, right)

        return len(self._between(self.g2, left, right, complement=False))


def split_probability(n: int, c: float, p2_scale: float) -> tuple[float, float]:
    """
    :return: (p1, p2) with p2 = p2_scale / n and 1 - c/n = (1 - p1)(1 - p2)
    :raise InvalidGraphParametersError: If p2_scale <= 0, c > n or p2 > c/n
    """
    if p2_scale <= 0:
        raise InvalidGraphParametersError(f"p2_scale must be positive, got {p2_scale}")

    if not 0 <= c <= n:
        raise InvalidGraphParametersError(f"Need 0 <= c <= n, got c={c}, n={n}")

    p = c / n
    p2 = p2_scale / n

    if p2 > p:
        raise InvalidGraphParametersError(f"p2 = {p2} exceeds p = {p}, lower p2_scale")

    p1 = 1 - (1 - p) / (1 - p2) if p2 < 1 else 0.0

    return max(p1, 0.0), p2


def _neighbourhood(graph: Graph, vertices: Iterable[int]) -> frozenset[int]:
    return frozenset(y for x in vertices for y in graph.adjacency[x])


def edge_reveal(n: int, c: float, p2_scale: float, seed: int) -> RevealOutcome:
    """
    Runs the revealing process on a fresh two-round sample.
    :param n: Vertex count
    :param c: Expected degree of G
    :param p2_scale: n times the second-round edge probability
    :param seed: Seed of both rounds
    :return: RevealOutcome with the final sets, the hidden edge count m and the access log
    :raise InvalidGraphParametersError: On an impossible probability split
    :raise RevealProcessError: If the stabilization loop does not settle within n + 1 rounds
    """
    outcome, _ = _run_reveal(n, c, p2_scale, seed)

    return outcome


def _run_reveal(n: int, c: float, p2_scale: float, seed: int) -> tuple[RevealOutcome, EdgeOracle]:
    p1, p2 = split_probability(n, c, p2_scale)
    g1 = sample_gnp(GnpParams(n=n, c=p1 * n, seed=derive_seed(seed, "reveal-g1")))
    g2 = sample_gnp(GnpParams(n=n, c=p2 * n, seed=derive_seed(seed, "reveal-g2")))
    oracle = EdgeOracle(g1, g2)
    everyone = frozenset(range(n))

    revealed = oracle.reveal_g1()
    a0 = frozenset(x for x in range(n) if g1.degree(x) == 0)
    inside_a0 = oracle.reveal_g2_within(a0)
    revealed |= inside_a0
    a1 = a0 - frozenset(x for edge in inside_a0 for x in edge)
    revealed |= oracle.reveal_g2_within(everyone - a1)

    g0 = Graph.from_edges(n, revealed)
    b0 = robust_candidates(g0, global_colouring(g0).s)
    b1 = separated_subset(g0, b0)

    a2, b2 = a1, b1
    rounds = 0

    while True:
        rounds += 1

        if rounds > n + 1:
            raise RevealProcessError(f"Stabilization did not settle after {n + 1} rounds (seed {seed})")

        revealed |= oracle.reveal_g2_between(a2, b2, complement=True)
        g_star = Graph.from_edges(n, revealed)
        a_star = frozenset(x for x in a2 if g_star.degree(x) == 0)
        b_star = separated_subset(g_star, robust_candidates(g_star, global_colouring(g_star).s, within=b2))

        if a_star == a2 and b_star == b2:
            break

        a2, b2 = a_star, b_star

    a3, b3 = a2, b2
    b3_minus = oracle.crowded(b3, a3)
    revealed |= oracle.reveal_g_between(a3, b3_minus)
    g_star = Graph.from_edges(n, revealed)
    a4 = a3 - _neighbourhood(g_star, b3_minus)

    revealed |= oracle.reveal_g_between(a3 - a4, b3)
    g_star = Graph.from_edges(n, revealed)
    b4 = b3 - _neighbourhood(g_star, a3 - a4)
    m = oracle.count_g2_between(a4, b4)

    logger.info(f"Edge reveal settled after {rounds} rounds: |A4|={len(a4)}, |B4|={len(b4)}, m={m}")
    outcome = RevealOutcome(
        n=n,
        c=c,
        p2_scale=p2_scale,
        seed=seed,
        a4=a4,
        b4=b4,
        m=m,
        revealed_edges=frozenset(revealed),
        intermediate={"A0": a0, "A1": a1, "A3": a3, "B0": b0, "B1": b1, "B3": b3, "B3-": b3_minus},
        access_log=tuple(oracle.log),
        stabilization_rounds=rounds,
    )

    return outcome, oracle


def _touches(entry: AccessLogEntry, a: frozenset[int], b: frozenset[int], n: int) -> bool:
    left = entry.left

    if entry.right is None:
        return bool(left & a) and bool(left & b)

    right = frozenset(range(n)) - entry.right if entry.complement_right else entry.right

    return bool(left & a and right & b) or bool(left & b and right & a)


def verify_reveal(outcome: RevealOutcome, g: Graph, g1: Graph) -> RevealVerification:
    """
    Structural re-check of a finished reveal against the hidden graphs.
    :param outcome: Result of the process
    :param g: The full graph G1 + G2
    :param g1: The first-round graph
    :return: RevealVerification with the star attachment check, the first-round check, whether the revealed
        edges lie within (and match) G minus E(A4, B4), and the kinds of log entries that looked at A4 x B4 pairs
    """
    a4, b4 = outcome.a4, outcome.b4
    attachment = bool(property_P_check(g, a4, b4)) if not a4 & b4 else False
    first_round_clear = not any(y in b4 for x in a4 for y in g1.adjacency[x])
    hidden = {(min(x, y), max(x, y)) for x in a4 for y in g.adjacency[x] if y in b4}
    expected = frozenset(edge for edge in g.edges() if edge not in hidden)
    leaked = tuple(
        entry.kind
        for entry in outcome.access_log
        if entry.kind != "G1" and entry.kind not in AGGREGATE_KINDS and _touches(entry, a4, b4, outcome.n)
    )

    return RevealVerification(
        property_p=attachment,
        no_first_round_edges=first_round_clear,
        revealed_within=outcome.revealed_edges <= expected,
        revealed_matches=outcome.revealed_edges == expected,
        leaked_entries=leaked,
    )


def reveal_and_verify(n: int, c: float, p2_scale: float, seed: int) -> tuple[RevealOutcome, RevealVerification]:
    """
    edge_reveal followed by verify_reveal against the oracle's own hidden graphs
    """
    outcome, oracle = _run_reveal(n, c, p2_scale, seed)

    return outcome, verify_reveal(outcome, oracle.g, oracle.g1)


def _audit_run(n: int, c: float, p2_scale: float, seed: int, run: int) -> RevealReport:
    run_seed = derive_seed(seed, "reveal", run)
    outcome, verification = reveal_and_verify(n, c, p2_scale, run_seed)

    return RevealReport(
        seed=run_seed,
        a4=len(outcome.a4),
        b4=len(outcome.b4),
        m=outcome.m,
        revealed_edges=len(outcome.revealed_edges),
        stabilization_rounds=outcome.stabilization_rounds,
        intermediate={name: len(vertices) for name, vertices in outcome.intermediate.items()},
        log_entries=len(outcome.access_log),
        verification=verification,
        passed=verification.passed,
    )


@benchmark()
def reveal_audit(n: int, c: float, p2_scale: float, seed: int, runs: int = 1, threads: int = 1) -> RevealAuditReport:
    """
    Repeats reveal_and_verify on independent samples and keeps the sizes of each outcome
    """
    reports = parallel_map(
        partial(_audit_run, n, c, p2_scale, seed), range(runs), threads=threads, description="reveal"
    )
    failed = [report.seed for report in reports if not report.passed]

    if failed:
        logger.error(f"Edge reveal verification failed for seeds {failed}")

    return RevealAuditReport(n=n, c=c, p2_scale=p2_scale, seed=seed, runs=tuple(reports))
