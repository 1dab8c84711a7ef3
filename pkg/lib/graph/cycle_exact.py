import logging
import math
from collections.abc import Sequence
from functools import partial

import networkx as nx
import numpy as np
from lib.exceptions import ComponentTooLargeError, RegimeError
from lib.graph.colouring import k_core
from lib.graph.core import Graph, sample_gnp
from lib.graph.estimators import l_tilde
from lib.graph.path_cover import DEFAULT_SIZE_CAP
from lib.schemas.cycle import CycleResult, Theorem11Disagreement, Theorem11Report
from lib.schemas.graph import GnpParams
from lib.utils.misc import bits_of, mask_of, popcount
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng, derive_seed
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
THEOREM11_MIN_C = 20


class _BudgetExhausted(Exception):
    pass


def _rotation_extension(adjacency: Sequence[Sequence[int]], rng: np.random.Generator) -> list[int]:
    """
    Grows a path at a random end and rotates it when the end is stuck.
    Records every cycle closed by an end's back edge and stops early on a Hamilton cycle.
    :return: Longest cycle seen, possibly empty
    """
    size = len(adjacency)
    start = int(rng.integers(size))
    path = [start]
    position = {start: 0}
    best: list[int] = []

    for _ in range(20 * size * size):
        end = path[-1]
        fresh = [y for y in adjacency[end] if y not in position]

        if fresh:
            y = fresh[int(rng.integers(len(fresh)))]
            position[y] = len(path)
            path.append(y)
            continue

        for y in adjacency[end]:
            length = len(path) - position[y]

            if length >= 3 and length > len(best):
                best = path[position[y] :]

        if len(best) == size:
            break

        pivots = [y for y in adjacency[end] if position[y] < len(path) - 2]

        if not pivots:
            path.reverse()
        else:
            pivot = position[pivots[int(rng.integers(len(pivots)))]]
            path[pivot + 1 :] = path[pivot + 1 :][::-1]

        for index in range(len(path)):
            position[path[index]] = index

    return best


class _CycleSearch:
    """
    Depth-first search over cycles whose smallest vertex is s, for each s in turn.
    A branch is cut when the path plus everything still reachable cannot beat the best cycle,
    or when no reachable vertex leads back to s.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]], lower_bound: int, budget: int):
        self.size = len(adjacency)
        self.neighbours = [mask_of(row) for row in adjacency]
        self.lower_bound = lower_bound
        self.best: list[int] = []
        self.budget = budget
        self.expansions = 0

    def _reachable(self, end: int, free: int) -> int:
        reach = self.neighbours[end] & free
        frontier = reach

        while frontier:
            low = frontier & -frontier
            frontier ^= low
            fresh = self.neighbours[low.bit_length() - 1] & free & ~reach
            reach |= fresh
            frontier |= fresh

        return reach

    def _extend(self, start: int, end: int, on_path: int, allowed: int, path: list[int]) -> None:
        self.expansions += 1

        if self.expansions > self.budget:
            raise _BudgetExhausted()

        free = allowed & ~on_path
        reach = self._reachable(end, free)

        if len(path) + popcount(reach) <= self.lower_bound or not reach & self.neighbours[start]:
            return

        for y in bits_of(self.neighbours[end] & free):
            path.append(y)

            if len(path) >= 3 and self.neighbours[y] >> start & 1 and len(path) > self.lower_bound:
                self.best = list(path)
                self.lower_bound = len(path)

            self._extend(start, y, on_path | 1 << y, allowed, path)
            path.pop()

            if self.lower_bound == self.size:
                return

    def run(self) -> None:
        full = (1 << self.size) - 1

        for start in range(self.size):
            if self.size - start <= self.lower_bound:
                break

            allowed = full & ~((1 << start) - 1)
            self._extend(start, start, 1 << start, allowed, [start])


def validate_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    if not cycle:
        return True

    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False

    return all(g.has_edge(x, y) for x, y in zip(cycle, [*cycle[1:], cycle[0]]))


def circumference(g: Graph, budget: int = DEFAULT_BUDGET, seed: int = 0) -> CycleResult:
    """
    Longest cycle of g. Each biconnected block of the 2-core is tried with rotation-extension first,
    a Hamilton cycle of the block settling it, then searched exhaustively within the shared budget.
    :param g: Graph
    :param budget: Node expansions allowed across all blocks
    :param seed: Seed of the rotation-extension stream
    :return: CycleResult, exact=False when the budget ran out
    """
    core = k_core(g, 2)

    if not core:
        return CycleResult(length=0)

    sub, mapping = g.induced_subgraph(core)
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(sub.n))
    nx_graph.add_edges_from(sub.edges())
    blocks = sorted(
        (sorted(block) for block in nx.biconnected_components(nx_graph) if len(block) >= 3),
        key=lambda block: (-len(block), block),
    )
    rng = derive_rng(seed, "rotation-extension")
    best: list[int] = []
    expansions = 0
    exact = True

    for block in blocks:
        if len(block) <= len(best):
            break

        block_graph, block_mapping = sub.induced_subgraph(block)
        heuristic = _rotation_extension(block_graph.adjacency, rng)

        if len(heuristic) > len(best):
            best = [mapping[block_mapping[x]] for x in heuristic]

        if len(heuristic) == block_graph.n:
            continue

        search = _CycleSearch(block_graph.adjacency, len(best), budget - expansions)

        try:
            search.run()
        except _BudgetExhausted:
            exact = False

        expansions += search.expansions

        if len(search.best) > len(best):
            best = [mapping[block_mapping[x]] for x in search.best]

        if not exact:
            logger.warning(f"Cycle search budget of {budget} expansions exhausted, best length {len(best)}")
            break

    return CycleResult(length=len(best), witness=tuple(best), exact=exact, expansions=expansions)


def _theorem11_trial(n: int, c: float, seed: int, budget: int, size_cap: int, trial: int) -> tuple:
    trial_seed = derive_seed(seed, "theorem11", trial)
    g = sample_gnp(GnpParams(n=n, c=c, seed=trial_seed))

    try:
        proxy = l_tilde(g, size_cap)
    except ComponentTooLargeError:
        proxy = None

    cycle = circumference(g, budget=budget, seed=trial_seed)

    return trial, trial_seed, cycle.length, proxy, cycle.exact


@benchmark()
def theorem11_audit(
    n: int,
    c: float,
    trials: int,
    seed: int,
    budget: int = DEFAULT_BUDGET,
    size_cap: int = DEFAULT_SIZE_CAP,
    threads: int = 1,
) -> Theorem11Report:
    """
    Compares the circumference with n - Phi(G) on sampled graphs.
    Trials whose cycle search is inexact, or whose proxy aborts on the size cap, never count as agreement.
    :param n: Vertex count
    :param c: Expected degree, at least 20
    :param trials: Number of sampled graphs
    :param seed: Master seed
    :param budget: Cycle search budget per trial
    :param size_cap: Exact path-cover cap
    :param threads: Worker processes
    :return: Theorem11Report
    :raise RegimeError: If c < 20
    """
    if c < THEOREM11_MIN_C:
        raise RegimeError(f"The L = n - Phi regime needs c >= {THEOREM11_MIN_C}, got c={c}")

    if c > 2 * math.log(n):
        logger.warning(f"c={c} is above 2 ln n = {2 * math.log(n):.2f}, outside the proved regime")

    outcomes = parallel_map(
        partial(_theorem11_trial, n, c, seed, budget, size_cap), range(trials), threads=threads, description="theorem11"
    )
    agreements = 0
    disagreements = []
    inexact = []
    aborted = []

    for trial, trial_seed, length, proxy, exact in outcomes:
        if proxy is None:
            aborted.append(trial_seed)
        elif not exact:
            inexact.append(trial_seed)
        elif length == proxy:
            agreements += 1
        else:
            disagreements.append(
                Theorem11Disagreement(trial=trial, seed=trial_seed, circumference=length, l_tilde=proxy)
            )

    logger.info(f"theorem11 audit: {agreements}/{trials} agreements, {len(inexact)} inexact, {len(aborted)} aborted")

    return Theorem11Report(
        n=n,
        c=c,
        trials=trials,
        seed=seed,
        agreements=agreements,
        agreement_fraction=agreements / trials if trials else None,
        disagreements=tuple(disagreements),
        inexact_seeds=tuple(inexact),
        aborted_seeds=tuple(aborted),
    )
