"""
Effect of resampling one vertex pair on the colourings and the path-cover shares.

For a pair {u, v} the graph is compared with and without the edge uv. The sets W+ and W- collect the
red-purple components of u and v on either side, D and D-tilde the vertices whose global-minus-local share
or local share changes, and I* / I*_k the vertices whose (global / local) component is untouched by the flip.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial

import numpy as np
from lib.exceptions import ComponentTooLargeError, InvalidGraphParametersError, InvalidRadiusError
from lib.graph.colouring import global_colouring
from lib.graph.core import Graph, components, flip, sample_gnp
from lib.graph.estimators import EMPTY_LOCAL, LocalComponent, local_phi_table
from lib.graph.path_cover import DEFAULT_SIZE_CAP, phi_global
from lib.schemas.colouring import TriColouring
from lib.schemas.graph import GnpParams
from lib.schemas.path_cover import PhiBreakdown
from lib.schemas.resample import (
    EfronSteinReport,
    FlipAnalysis,
    FlipLemmaReport,
    FlipViolation,
    ResampleAuditReport,
)
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng, derive_seed
from lib.utils.statistics import bootstrap_ci, variance_statistic
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

FLIPS_PER_GRAPH = 100
WITNESS_LIMIT = 10
ZERO = Fraction(0)


@dataclass(frozen=True)
class _Side:
    graph: Graph
    colouring: TriColouring
    breakdown: PhiBreakdown
    table: dict[int, LocalComponent]
    block_of: dict[int, frozenset[int]]

    def component(self, vertex: int) -> frozenset[int]:
        return self.block_of.get(vertex, frozenset())

    def local(self, vertex: int) -> LocalComponent:
        return self.table.get(vertex, EMPTY_LOCAL)


def _evaluate(graph: Graph, k: int, size_cap: int) -> _Side:
    colouring = global_colouring(graph)
    breakdown = phi_global(graph, colouring, size_cap)
    table = local_phi_table(graph, k, col=colouring, breakdown=breakdown, size_cap=size_cap)
    block_of = {x: block for block in breakdown.components for x in block}

    return _Side(graph=graph, colouring=colouring, breakdown=breakdown, table=table, block_of=block_of)


def _indifferent(
    c_plus: frozenset[int], c_minus: frozenset[int], red_plus: frozenset[int], red_minus: frozenset[int], edge
) -> bool:
    u, v = edge

    return c_plus == c_minus and not (u in c_plus and v in c_plus) and red_plus == red_minus


def analyze_flip(g: Graph, u: int, v: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> FlipAnalysis:
    """
    Colours G+uv and G-uv and collects every set that describes how the flip moves the shares.
    :param g: Graph
    :param u: First endpoint
    :param v: Second endpoint, different from u
    :param k: Local radius
    :param size_cap: Exact path-cover cap
    :return: FlipAnalysis, identical for (u, v) and (v, u)
    :raise InvalidRadiusError: If k < 1
    :raise InvalidVertexError: If u == v
    :raise ComponentTooLargeError: If a component on either side exceeds the cap
    """
    if k < 1:
        raise InvalidRadiusError(f"Flip analysis needs radius k >= 1, got {k}")

    pair = flip(g, u, v)
    plus = _evaluate(pair.plus, k, size_cap)
    minus = _evaluate(pair.minus, k, size_cap)

    w_plus = plus.component(u) | plus.component(v)
    w_minus = minus.component(u) | minus.component(v)
    w_star = w_plus | w_minus | frozenset(pair.edge)
    w_star_r = w_star & (plus.colouring.r | minus.colouring.r)

    phi_plus = dict(plus.breakdown.per_vertex)
    phi_minus = dict(minus.breakdown.per_vertex)
    phi_k_plus = {x: entry.phi for x, entry in plus.table.items() if entry.phi}
    phi_k_minus = {x: entry.phi for x, entry in minus.table.items() if entry.phi}
    touched = phi_plus.keys() | phi_minus.keys() | phi_k_plus.keys() | phi_k_minus.keys()

    d = frozenset(
        x
        for x in touched
        if phi_plus.get(x, ZERO) - phi_k_plus.get(x, ZERO) != phi_minus.get(x, ZERO) - phi_k_minus.get(x, ZERO)
    )
    d_tilde = frozenset(x for x in touched if phi_k_plus.get(x, ZERO) != phi_k_minus.get(x, ZERO))

    i_star = frozenset(
        x
        for x in range(g.n)
        if _indifferent(
            plus.component(x),
            minus.component(x),
            plus.component(x) & plus.colouring.r,
            minus.component(x) & minus.colouring.r,
            pair.edge,
        )
    )
    i_star_k = frozenset(
        x
        for x in range(g.n)
        if _indifferent(
            plus.local(x).component, minus.local(x).component, plus.local(x).red, minus.local(x).red, pair.edge
        )
    )

    return FlipAnalysis(
        flip=pair,
        k=k,
        colour_plus=plus.colouring,
        colour_minus=minus.colouring,
        w_plus=w_plus,
        w_minus=w_minus,
        w_star=w_star,
        w_star_r=w_star_r,
        d=d,
        d_tilde=d_tilde,
        i_star=i_star,
        i_star_k=i_star_k,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        phi_k_plus=phi_k_plus,
        phi_k_minus=phi_k_minus,
    )


def _external_neighbourhood(graph: Graph, vertices: frozenset[int]) -> frozenset[int]:
    return frozenset(y for x in vertices for y in graph.adjacency[x]) - vertices


def _failure(fa: FlipAnalysis, lemma: str, detail: str, witness) -> FlipLemmaReport:
    violation = FlipViolation(
        lemma=lemma, detail=detail, edge=fa.edge, witness=tuple(sorted(witness))[:WITNESS_LIMIT]
    )

    return FlipLemmaReport(ok=False, violation=violation)


def check_flip_lemmas(fa: FlipAnalysis) -> FlipLemmaReport:
    """
    Re-checks the structural facts every flip must satisfy and reports the first counterexample.
    Lemma ids: containment, localized-change, small-components, connected, red-closed, red-share, indifferent.
    :param fa: FlipAnalysis
    :return: FlipLemmaReport, ok when every check passes
    """
    u, v = fa.edge
    plus_graph, minus_graph = fa.flip.plus, fa.flip.minus
    s_plus, s_minus = fa.colour_plus.s, fa.colour_minus.s
    r_plus, r_minus = fa.colour_plus.r, fa.colour_minus.r

    # with no endpoint in S+ everything happens inside W+, otherwise inside W-
    if not {u, v} & s_plus:
        host, other_w = fa.w_plus, fa.w_minus
        inner_s, outer_s, inner_r, outer_r = s_plus, s_minus, r_minus, r_plus
    else:
        host, other_w = fa.w_minus, fa.w_plus
        inner_s, outer_s, inner_r, outer_r = s_minus, s_plus, r_plus, r_minus

    around_minus = _external_neighbourhood(minus_graph, host)
    around_plus = _external_neighbourhood(plus_graph, host)
    containments = (
        ("neighbourhood of W in G- lies in its neighbourhood in G+", around_minus - around_plus),
        ("neighbourhood of W lies in the sapphire set", around_plus - inner_s),
        ("sapphire sets are nested", inner_s - outer_s),
        ("red sets are nested", inner_r - outer_r),
        ("W sets are nested", other_w - host),
    )

    for detail, difference in containments:
        if difference:
            return _failure(fa, "containment", detail, difference)

    moved = (fa.d | fa.d_tilde) - host

    if moved:
        return _failure(fa, "localized-change", "D or D-tilde leaves W", moved)

    if max(len(fa.w_plus), len(fa.w_minus)) < fa.k and fa.d:
        return _failure(fa, "small-components", f"D is non-empty while both W sets are below k={fa.k}", fa.d)

    pieces = components(plus_graph, fa.w_star)

    if len(pieces) > 1:
        return _failure(fa, "connected", "G+[W*] is disconnected", pieces[1])

    for x in sorted(fa.w_star_r):
        outside = frozenset(plus_graph.adjacency[x]) - fa.w_star

        if outside:
            return _failure(fa, "red-closed", f"red vertex {x} has neighbours outside W*", outside | {x})

    if 4 * len(fa.w_star_r) < len(fa.w_star) - 2:
        return _failure(fa, "red-share", f"{len(fa.w_star_r)} red vertices in W* of size {len(fa.w_star)}", fa.w_star_r)

    changed = [x for x in fa.i_star if fa.phi_plus.get(x, ZERO) != fa.phi_minus.get(x, ZERO)]

    if changed:
        return _failure(fa, "indifferent", "global share changed on an indifferent vertex", changed)

    changed = [x for x in fa.i_star_k if fa.phi_k_plus.get(x, ZERO) != fa.phi_k_minus.get(x, ZERO)]

    if changed:
        return _failure(fa, "indifferent", "local share changed on a locally indifferent vertex", changed)

    return FlipLemmaReport(ok=True)


def random_pair(rng: np.random.Generator, n: int) -> tuple[int, int]:
    u = int(rng.integers(n))
    v = int(rng.integers(n - 1))

    return u, v + 1 if v >= u else v


def _audit_graph(
    n: int, c: float, k: int, seed: int, size_cap: int, flips: int, flips_per_graph: int, index: int
) -> tuple[int, list[FlipViolation], int]:
    graph_seed = derive_seed(seed, "resample-graph", index)
    g = sample_gnp(GnpParams(n=n, c=c, seed=graph_seed))
    rng = derive_rng(graph_seed, "flip-pair")
    violations = []
    aborted = 0

    for _ in range(min(flips_per_graph, flips - index * flips_per_graph)):
        u, v = random_pair(rng, n)

        try:
            report = check_flip_lemmas(analyze_flip(g, u, v, k, size_cap))
        except ComponentTooLargeError:
            aborted += 1
            continue

        if not report:
            violations.append(report.violation)

    return graph_seed, violations, aborted


@benchmark()
def resample_audit(
    n: int,
    c: float,
    k: int,
    flips: int,
    seed: int,
    threads: int = 1,
    size_cap: int = DEFAULT_SIZE_CAP,
    flips_per_graph: int = FLIPS_PER_GRAPH,
) -> ResampleAuditReport:
    """
    Runs check_flip_lemmas on uniformly random pairs of sampled graphs, flips_per_graph pairs per graph.
    :param n: Vertex count, at least 2
    :param c: Expected degree
    :param k: Local radius
    :param flips: Total number of flips
    :param seed: Master seed
    :param threads: Worker processes
    :param size_cap: Exact path-cover cap, flips hitting it count as aborted
    :param flips_per_graph: Flips drawn from each sampled graph
    :return: ResampleAuditReport listing every violation with its graph seed
    :raise InvalidGraphParametersError: If n < 2
    """
    if n < 2:
        raise InvalidGraphParametersError(f"Flips need at least 2 vertices, got n={n}")

    graphs = math.ceil(flips / flips_per_graph)
    outcomes = parallel_map(
        partial(_audit_graph, n, c, k, seed, size_cap, flips, flips_per_graph),
        range(graphs),
        threads=threads,
        description="resample-audit",
    )
    violations = []
    violation_seeds = []
    aborted = 0

    for graph_seed, graph_violations, graph_aborted in outcomes:
        violations.extend(graph_violations)
        violation_seeds.extend([graph_seed] * len(graph_violations))
        aborted += graph_aborted

    if violations:
        logger.error(f"Resample audit found {len(violations)} violations in {flips} flips")
    else:
        logger.info(f"Resample audit passed: {flips} flips over {graphs} graphs, {aborted} aborted")

    return ResampleAuditReport(
        n=n,
        c=c,
        k=k,
        flips=flips,
        seed=seed,
        aborted=aborted,
        violations=tuple(violations),
        violation_seeds=tuple(violation_seeds),
    )


def _efron_stein_trial(n: int, c: float, k: int, seed: int, size_cap: int, trial: int) -> tuple[float, ...] | None:
    trial_seed = derive_seed(seed, "efron-stein", trial)
    g = sample_gnp(GnpParams(n=n, c=c, seed=trial_seed))
    u, v = random_pair(derive_rng(trial_seed, "flip-pair"), n)

    try:
        fa = analyze_flip(g, u, v, k, size_cap)
    except ComponentTooLargeError:
        return None

    # the sampled graph is one of the two sides of its own flip
    if g.has_edge(u, v):
        phi, phi_k = fa.phi_plus, fa.phi_k_plus
    else:
        phi, phi_k = fa.phi_minus, fa.phi_k_minus

    l_tilde = n - sum(phi.values(), ZERO)
    l_tilde_k = n - sum(phi_k.values(), ZERO)

    return float(l_tilde_k), float(l_tilde - l_tilde_k), len(fa.d_tilde) ** 2, len(fa.d) ** 2


@benchmark()
def efron_stein_audit(
    n: int, c: float, k: int, trials: int, seed: int, threads: int = 1, size_cap: int = DEFAULT_SIZE_CAP
) -> EfronSteinReport:
    """
    Compares the sample variance of L-tilde_k with 2 p (1 - p) n^2 E[|D-tilde|^2], both with bootstrap intervals,
    and the same for the difference L-tilde - L-tilde_k against D. Shares lie in [0, 1] so the bounded-difference
    constant is 1. Each trial samples one graph and one uniformly random pair.
    The audit passes when the lower end of each variance interval does not exceed the upper end of its bound.
    :param n: Vertex count, at least 2
    :param c: Expected degree
    :param k: Local radius
    :param trials: Sampled graphs, at least 2
    :param seed: Master seed
    :param threads: Worker processes
    :param size_cap: Exact path-cover cap
    :return: EfronSteinReport
    :raise InvalidGraphParametersError: If trials < 2 or n < 2
    """
    if trials < 2 or n < 2:
        raise InvalidGraphParametersError(f"Efron-Stein audit needs trials >= 2 and n >= 2, got {trials} and {n}")

    outcomes = parallel_map(
        partial(_efron_stein_trial, n, c, k, seed, size_cap), range(trials), threads=threads, description="efron-stein"
    )
    kept = np.array([outcome for outcome in outcomes if outcome is not None], dtype=float).reshape(-1, 4)
    aborted = trials - len(kept)
    p = c / n
    scale = 2 * p * (1 - p) * n * n
    rng = derive_rng(seed, "efron-stein-bootstrap")

    variance = bootstrap_ci(kept[:, 0], rng, statistic=variance_statistic)
    bound = bootstrap_ci(kept[:, 2], rng, scale=scale)
    difference_variance = bootstrap_ci(kept[:, 1], rng, statistic=variance_statistic)
    difference_bound = bootstrap_ci(kept[:, 3], rng, scale=scale)
    passed = variance.ci_low <= bound.ci_high and difference_variance.ci_low <= difference_bound.ci_high
    logger.info(
        f"Efron-Stein audit: Var={variance.estimate:.3f} bound={bound.estimate:.3f}, "
        f"difference Var={difference_variance.estimate:.3f} bound={difference_bound.estimate:.3f}, "
        f"{aborted} aborted"
    )

    return EfronSteinReport(
        n=n,
        c=c,
        k=k,
        trials=trials,
        seed=seed,
        aborted=aborted,
        variance=variance,
        mean_d_squared=bootstrap_ci(kept[:, 2], rng),
        bound=bound,
        difference_variance=difference_variance,
        difference_bound=difference_bound,
        passed=passed,
    )
