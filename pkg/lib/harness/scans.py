"""
Experiments over parameter grids: strong 4-core emergence, the Poisson regime near connectivity,
the ball-size tail bound and the neighbourhood census of one sampled graph.
"""

import logging
import math
from functools import partial

import numpy as np
from lib.exceptions import ComponentTooLargeError, InvalidGraphParametersError, RegimeError
from lib.graph.colouring import CORE_DEGREE, global_colouring, k_core
from lib.graph.core import ball_sizes, degree_counts, sample_gnp
from lib.graph.estimators import census_total, l_hat_k, l_tilde, neighbourhood_census
from lib.harness.trials import check_aborts, effective_truncation
from lib.schemas.estimators import CensusEntry
from lib.schemas.experiment import (
    CensusReport,
    ExperimentConfig,
    ExperimentSummary,
    TailBoundReport,
    TailPoint,
    ThresholdPoint,
    ThresholdScanReport,
)
from lib.schemas.graph import GnpParams
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng, derive_seed
from lib.utils.statistics import summarize_observable, tv_to_poisson
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

JUMP_FRACTION = 0.01
TV_TOLERANCE = 0.1
TAIL_STANDARD_ERRORS = 3
DEFAULT_TAIL_POINTS = 8
STRONG_CORE_WINDOW = (8.8, 9.7)
PLAIN_CORE_WINDOW = (4.95, 5.35)
# from this lam on the deficit is zero with high probability
ZERO_DEFICIT_LAM = 6.0
MIN_ZERO_FRACTION = 0.99


def threshold_grid(c_min: float, c_max: float, c_step: float) -> list[float]:
    """
    \n**example:** \n threshold_grid(8.0, 8.3, 0.1) --> [8.0, 8.1, 8.2, 8.3]
    """
    steps = int(math.floor((c_max - c_min) / c_step + 1e-9))

    return [round(c_min + index * c_step, 10) for index in range(steps + 1)]


def _core_fractions(
    n: int, grid: tuple[float, ...], trials: int, seed: int, plain_core: bool, index: int
) -> tuple[float, float | None]:
    c = grid[index // trials]
    g = sample_gnp(GnpParams(n=n, c=c, seed=derive_seed(seed, "threshold", index)))
    strong = len(global_colouring(g).s) / n
    plain = len(k_core(g, CORE_DEGREE)) / n if plain_core else None

    return strong, plain


def _jump(points: list[ThresholdPoint], attribute: str) -> float | None:
    return next((point.c for point in points if getattr(point, attribute) > JUMP_FRACTION), None)


def _covered_window(grid: tuple[float, ...], window: tuple[float, float]) -> tuple[float, float] | None:
    return window if grid and grid[0] <= window[0] and grid[-1] >= window[1] else None


@benchmark()
def run_threshold_scan(config: ExperimentConfig) -> ThresholdScanReport:
    """
    Mean fraction of vertices in the strong 4-core, and optionally the plain 4-core, at each c of the grid.
    The jump is the smallest grid c whose mean fraction exceeds 0.01. Passes when each jump falls in its expected
    window, a window is checked only when the grid spans it.
    :param config: threshold-scan configuration
    :return: ThresholdScanReport
    :raise InvalidGraphParametersError: If the grid reaches above n
    """
    grid = tuple(threshold_grid(config.c_min, config.c_max, config.c_step))

    if grid and grid[-1] > config.n:
        raise InvalidGraphParametersError(f"c_max={config.c_max} exceeds n={config.n}")

    fractions = parallel_map(
        partial(_core_fractions, config.n, grid, config.trials, config.seed, config.plain_core),
        range(len(grid) * config.trials),
        threads=config.threads,
        description="threshold-scan",
    )
    points = []

    for position, c in enumerate(grid):
        block = fractions[position * config.trials : (position + 1) * config.trials]
        strong = float(np.mean([value for value, _ in block])) if block else 0.0
        plain = float(np.mean([value for _, value in block])) if block and config.plain_core else None
        points.append(ThresholdPoint(c=c, strong_core_fraction=strong, plain_core_fraction=plain))

    report = ThresholdScanReport(
        n=config.n,
        trials=config.trials,
        points=tuple(points),
        strong_core_jump=_jump(points, "strong_core_fraction"),
        plain_core_jump=_jump(points, "plain_core_fraction") if config.plain_core else None,
        strong_core_window=_covered_window(grid, STRONG_CORE_WINDOW),
        plain_core_window=_covered_window(grid, PLAIN_CORE_WINDOW) if config.plain_core else None,
    )
    logger.info(f"Threshold scan n={config.n}: strong jump {report.strong_core_jump}, plain {report.plain_core_jump}")

    return report


def poisson_regime_c(n: int, lam: float) -> float:
    """
    c = ln n + ln ln n + lam
    :raise InvalidGraphParametersError: If n < 3 or the resulting c lies outside [0, n]
    """
    if n < 3:
        raise InvalidGraphParametersError(f"The Poisson regime needs n >= 3, got n={n}")

    c = math.log(n) + math.log(math.log(n)) + lam

    if not 0 <= c <= n:
        raise InvalidGraphParametersError(f"c={c:.4f} from lam={lam} lies outside [0, {n}]")

    return c


def _deficit_trial(n: int, c: float, seed: int, size_cap: int, trial: int) -> tuple[int | None, int]:
    g = sample_gnp(GnpParams(n=n, c=c, seed=derive_seed(seed, "poisson-regime", trial)))
    counts = degree_counts(g)
    low_degree = int(counts[0] + counts[1])

    try:
        return n - l_tilde(g, size_cap), low_degree
    except ComponentTooLargeError:
        return None, low_degree


@benchmark()
def run_poisson_regime(config: ExperimentConfig) -> ExperimentSummary:
    """
    Distribution of n - L-tilde at c = ln n + ln ln n + lam, compared with Poisson(e^-lam) in total variation,
    next to the count n_0 + n_1 of vertices of degree at most 1.
    Passes when the total-variation distance is at most 0.1, or for lam >= 6 when at least 99% of the
    deficits are zero.
    :param config: poisson-regime configuration, lam read from config.lam
    :return: ExperimentSummary with observables "deficit" and "degree_proxy"
    :raise ExperimentAbortedError: If more than 1% of the trials abort on the size cap
    """
    n = config.n
    c = poisson_regime_c(n, config.lam)

    if c > 2 * math.log(n):
        logger.warning(f"c={c:.3f} is above 2 ln n = {2 * math.log(n):.3f}, outside the L = L-tilde regime")

    outcomes = parallel_map(
        partial(_deficit_trial, n, c, config.seed, config.size_cap),
        range(config.trials),
        threads=config.threads,
        description="poisson-regime",
    )
    kept = [(deficit, low) for deficit, low in outcomes if deficit is not None]
    check_aborts(len(outcomes) - len(kept), len(outcomes))
    deficits = np.array([deficit for deficit, _ in kept], dtype=np.int64)
    proxies = np.array([low for _, low in outcomes], dtype=np.int64)
    rng = derive_rng(config.seed, "summary-bootstrap")
    expected = math.exp(-config.lam)
    distance = tv_to_poisson(deficits, expected) if deficits.size else None
    proxy_distance = tv_to_poisson(proxies, expected) if proxies.size else None
    extra = {
        "c": c,
        "lam": config.lam,
        "poisson_mean": expected,
        "zero_fraction": float(np.mean(deficits == 0)) if deficits.size else None,
        "proxy_agreement": float(np.mean([deficit == low for deficit, low in kept])) if kept else None,
        "proxy_tv_to_poisson": proxy_distance,
    }

    if config.lam >= ZERO_DEFICIT_LAM:
        passed = None if not deficits.size else extra["zero_fraction"] >= MIN_ZERO_FRACTION
    else:
        passed = None if distance is None else distance <= TV_TOLERANCE

    logger.info(f"Poisson regime n={n} lam={config.lam}: TV={distance}, zero fraction={extra['zero_fraction']}")

    return ExperimentSummary(
        experiment=config.experiment,
        n=n,
        c=c,
        k=config.k,
        seed=config.seed,
        trials=config.trials,
        aborted=config.trials - len(kept),
        observables={
            "deficit": summarize_observable(deficits, n, rng),
            "degree_proxy": summarize_observable(proxies, n, rng),
        },
        tv_to_poisson=distance,
        extra=extra,
        passed=passed,
    )


def tail_threshold(c: float, k: int) -> float:
    return (7 * c) ** k


def default_tail_grid(c: float, k: int, points: int = DEFAULT_TAIL_POINTS) -> tuple[int, ...]:
    """
    Doubling grid starting at the first integer above (7c)^k, and at least 2
    """
    start = max(math.floor(tail_threshold(c, k)) + 1, 2)

    return tuple(start * 2**index for index in range(points))


def _tail_fractions(n: int, c: float, k: int, seed: int, grid: tuple[int, ...], sample: int) -> np.ndarray:
    g = sample_gnp(GnpParams(n=n, c=c, seed=derive_seed(seed, "tail-bound", sample)))
    sizes = ball_sizes(g, k)

    return np.array([np.mean(sizes >= s) for s in grid], dtype=float)


@benchmark()
def run_tail_bound(config: ExperimentConfig) -> TailBoundReport:
    """
    Fraction of vertices whose k-ball has at least s vertices, against k exp(-s^(1/k)), for every s of the grid.
    A grid point passes when the mean fraction over samples is at most the bound plus 3 standard errors.
    :param config: tail-bound configuration, the grid read from config.s_grid
    :return: TailBoundReport
    :raise RegimeError: If a grid point is not above (7c)^k
    """
    threshold = tail_threshold(config.c, config.k)
    grid = config.s_grid or default_tail_grid(config.c, config.k)
    outside = [s for s in grid if s <= threshold]

    if outside:
        raise RegimeError(f"Grid points {outside} are not above (7c)^k = {threshold:g}")

    samples = parallel_map(
        partial(_tail_fractions, config.n, config.c, config.k, config.seed, tuple(grid)),
        range(config.trials),
        threads=config.threads,
        description="tail-bound",
    )
    matrix = np.array(samples, dtype=float).reshape(len(samples), len(grid))
    points = []

    for column, s in enumerate(grid):
        values = matrix[:, column]
        fraction = float(values.mean()) if values.size else 0.0
        error = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size >= 2 else 0.0
        bound = config.k * math.exp(-(s ** (1 / config.k)))
        points.append(
            TailPoint(
                s=s,
                fraction=fraction,
                bound=bound,
                standard_error=error,
                passed=fraction <= bound + TAIL_STANDARD_ERRORS * error,
            )
        )

    report = TailBoundReport(
        n=config.n,
        c=config.c,
        k=config.k,
        samples=config.trials,
        points=tuple(points),
        passed=all(point.passed for point in points),
    )
    logger.info(f"Tail bound n={config.n} c={config.c} k={config.k}: passed={report.passed}")

    return report


def run_census(config: ExperimentConfig) -> tuple[list[CensusEntry], CensusReport]:
    """
    Census of the rooted-tree classes of the k-balls of one sampled graph.
    The census-weighted total is reported next to L-hat_k, the two agree exactly.
    :param config: census configuration
    :return: Census entries sorted by canonical code and the report
    """
    truncation = effective_truncation(config)
    g = sample_gnp(GnpParams(n=config.n, c=config.c, seed=derive_seed(config.seed, "census")))
    entries = neighbourhood_census(g, config.k, truncation, config.size_cap)
    report = CensusReport(
        n=config.n,
        c=config.c,
        k=config.k,
        seed=config.seed,
        truncation=truncation,
        classes=len(entries),
        vertices_counted=sum(entry.count for entry in entries),
        weighted_total=census_total(entries),
        l_hat_k=l_hat_k(g, config.k, truncation, config.size_cap),
    )
    logger.info(f"Census n={config.n} k={config.k}: {report.classes} classes over {report.vertices_counted} vertices")

    return entries, report
