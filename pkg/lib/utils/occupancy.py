import logging
import math
from fractions import Fraction
from functools import partial

import numpy as np
from lib.exceptions import EnumerationTooLargeError, OccupancyError
from lib.schemas.occupancy import OccupancyEstimate, OccupancyParams, OccupancyReport
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng

logger = logging.getLogger(__name__)

MAX_ASSIGNMENTS = 10**7
TRIALS_PER_CHUNK = 1000
AGREEMENT_STANDARD_ERRORS = 4
LOWER_BOUND_LIMIT = 0.01
LOWER_BOUND_POINTS = 1000
H_RELATIVE_TOLERANCE = 0.1


def h(x: float) -> float:
    """
    Variance density of the number of bins holding at least 2 balls, at x balls per bin.
    :param x: Load factor m / N, nonnegative
    :return: (1 + x) e^-x - ((1 + x)^2 + x^3) e^-2x
    :raise OccupancyError: If x < 0
    """
    if x < 0:
        raise OccupancyError(f"Load factor must be nonnegative, got {x}")

    return (1 + x) * math.exp(-x) - ((1 + x) ** 2 + x**3) * math.exp(-2 * x)


def h_lower_bound_holds(points: int = LOWER_BOUND_POINTS, limit: float = LOWER_BOUND_LIMIT) -> bool:
    """
    Checks h(x) > x^2 / 3 on an evenly spaced grid of the open interval (0, limit)
    """
    grid = np.linspace(0, limit, points + 2)[1:-1]

    return all(h(float(x)) > x * x / 3 for x in grid)


def var_z_exact(bins: int, balls: int) -> Fraction:
    """
    Exact variance of Z, the number of bins with at least 2 balls, over all bins^balls equally likely
    assignments. Assignments are grouped by bin load, bin by bin, with integer counts.
    :param bins: N, at least 1
    :param balls: m, nonnegative
    :return: Var(Z) as a fraction
    :raise EnumerationTooLargeError: If bins^balls exceeds 10^7
    """
    if bins < 1 or balls < 0:
        raise OccupancyError(f"Need bins >= 1 and balls >= 0, got {bins} and {balls}")

    total = bins**balls

    if total > MAX_ASSIGNMENTS:
        raise EnumerationTooLargeError(f"{bins}^{balls} assignments exceed the cap of {MAX_ASSIGNMENTS}")

    if balls < 2:
        return Fraction(0)

    # (balls placed so far, bins with at least 2) -> number of assignments
    ways = {(0, 0): 1}

    for _ in range(bins):
        following: dict[tuple[int, int], int] = {}

        for (placed, crowded), count in ways.items():
            for load in range(balls - placed + 1):
                key = (placed + load, crowded + (load >= 2))
                following[key] = following.get(key, 0) + count * math.comb(balls - placed, load)

        ways = following

    first = sum(crowded * count for (placed, crowded), count in ways.items() if placed == balls)
    second = sum(crowded * crowded * count for (placed, crowded), count in ways.items() if placed == balls)

    return Fraction(second, total) - Fraction(first, total) ** 2


def _crowded_bins(bins: int, balls: int, seed: int, trials: int, chunk: int) -> np.ndarray:
    size = min(TRIALS_PER_CHUNK, trials - chunk * TRIALS_PER_CHUNK)

    if balls < 2:
        return np.zeros(size, dtype=np.int64)

    rng = derive_rng(seed, "balls-bins", chunk)
    placed = np.sort(rng.integers(0, bins, size=(size, balls)), axis=1)
    repeat = placed[:, 1:] == placed[:, :-1]
    # a crowded bin starts a run of repeats
    starts = repeat.copy()
    starts[:, 1:] &= ~repeat[:, :-1]

    return starts.sum(axis=1)


def simulate_z(params: OccupancyParams, threads: int = 1) -> np.ndarray:
    """
    Per-trial values of Z, drawn in fixed chunks of trials so the values do not depend on threads
    """
    chunks = math.ceil(params.trials / TRIALS_PER_CHUNK)
    parts = parallel_map(
        partial(_crowded_bins, params.bins, params.balls, params.seed, params.trials),
        range(chunks),
        threads=threads,
        description="balls-bins",
    )

    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def simulate_var_z(params: OccupancyParams, threads: int = 1) -> OccupancyEstimate:
    """
    Monte Carlo mean and variance of Z with the standard error of the sample variance.
    :param params: OccupancyParams with at least 2 trials
    :param threads: Worker processes
    :return: OccupancyEstimate
    :raise OccupancyError: If trials < 2
    """
    if params.trials < 2:
        raise OccupancyError(f"Variance estimate needs at least 2 trials, got {params.trials}")

    values = simulate_z(params, threads).astype(float)
    trials = values.size
    mean = float(values.mean())
    variance = float(values.var(ddof=1))
    central = values - mean
    fourth = float(np.mean(central**4))
    spread = fourth - (trials - 3) / (trials - 1) * variance**2

    return OccupancyEstimate(mean=mean, variance=variance, standard_error=math.sqrt(max(spread, 0.0) / trials))


def balls_bins_report(params: OccupancyParams, threads: int = 1) -> OccupancyReport:
    """
    Simulation next to h(m / N) N and, when small enough, the exact variance.
    Without the exact variance the estimate is held to h(m / N) N instead, within 10% or 4 standard errors.
    """
    estimate = simulate_var_z(params, threads)

    try:
        exact = var_z_exact(params.bins, params.balls)
    except EnumerationTooLargeError:
        exact = None

    agrees = None

    if exact is not None:
        agrees = abs(estimate.variance - float(exact)) <= AGREEMENT_STANDARD_ERRORS * estimate.standard_error

    prediction = h(params.balls / params.bins) * params.bins
    agrees_with_h = None

    if exact is None:
        margin = max(H_RELATIVE_TOLERANCE * prediction, AGREEMENT_STANDARD_ERRORS * estimate.standard_error)
        agrees_with_h = abs(estimate.variance - prediction) <= margin

    logger.info(
        f"Balls in bins N={params.bins} m={params.balls}: Var(Z)={estimate.variance:.4f} "
        f"+- {estimate.standard_error:.4f}, exact={exact}, h N={prediction:.4f}"
    )

    return OccupancyReport(
        bins=params.bins,
        balls=params.balls,
        trials=params.trials,
        seed=params.seed,
        estimate=estimate,
        exact=exact,
        h_prediction=prediction,
        agrees_with_exact=agrees,
        agrees_with_h=agrees_with_h,
        h_lower_bound_holds=h_lower_bound_holds(),
    )
