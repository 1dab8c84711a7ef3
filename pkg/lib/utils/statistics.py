import math
from collections.abc import Callable, Sequence

import numpy as np
from lib.schemas.experiment import ObservableSummary
from lib.schemas.resample import BootstrapEstimate
from scipy import stats

BOOTSTRAP_RESAMPLES = 2000
CONFIDENCE = 0.95


def _as_array(values: Sequence[float] | np.ndarray) -> np.ndarray:
    return np.asarray(values, dtype=float)


def sample_variance(values: Sequence[float] | np.ndarray) -> float:
    values = _as_array(values)

    return float(np.var(values, ddof=1)) if values.size >= 2 else 0.0


def skewness(values: Sequence[float] | np.ndarray) -> float | None:
    values = _as_array(values)

    if values.size < 3 or np.ptp(values) == 0:
        return None

    return float(stats.skew(values))


def ks_to_normal(values: Sequence[float] | np.ndarray) -> float | None:
    """
    Sup-distance between the empirical CDF of the standardized sample and the standard normal CDF.
    Standardization uses the sample mean and sample deviation, so this is a Lilliefors-type statistic.
    :param values: Observations
    :return: KS statistic, None for fewer than 2 values or a constant sample
    """
    values = _as_array(values)

    if values.size < 2:
        return None

    deviation = float(np.std(values, ddof=1))

    if deviation == 0:
        return None

    standardized = (values - values.mean()) / deviation

    return float(stats.kstest(standardized, "norm").statistic)


def tv_to_poisson(values: Sequence[int] | np.ndarray, lam: float) -> float:
    """
    Total-variation distance between the empirical law of an integer observable and Poisson(lam).
    :param values: Nonnegative integer observations
    :param lam: Poisson mean, nonnegative
    :return: Distance in [0, 1]
    """
    values = np.asarray(values, dtype=np.int64)

    if values.size == 0:
        raise ValueError("Total-variation distance needs at least one observation")

    if (values < 0).any():
        raise ValueError("Poisson comparison needs nonnegative observations")

    top = int(max(values.max(), stats.poisson.ppf(1 - 1e-12, lam) if lam > 0 else 0))
    empirical = np.bincount(values, minlength=top + 1) / values.size
    support = np.arange(top + 1)
    reference = stats.poisson.pmf(support, lam) if lam > 0 else (support == 0).astype(float)
    tail = float(stats.poisson.sf(top, lam)) if lam > 0 else 0.0

    return 0.5 * (float(np.abs(empirical - reference).sum()) + tail)


def bootstrap_ci(
    values: Sequence[float] | np.ndarray,
    rng: np.random.Generator,
    statistic: Callable[[np.ndarray], np.ndarray] | None = None,
    resamples: int = BOOTSTRAP_RESAMPLES,
    confidence: float = CONFIDENCE,
    scale: float = 1.0,
) -> BootstrapEstimate:
    """
    Percentile bootstrap interval of a statistic.
    :param values: Observations
    :param rng: Random stream for the resampling indices
    :param statistic: Vectorized statistic taking a (resamples, size) array and reducing axis 1, mean by default.
        It must accept samples of size 1.
    :param resamples: Number of bootstrap resamples
    :param confidence: Two-sided confidence level
    :param scale: Constant factor applied to the estimate and both bounds
    :return: BootstrapEstimate
    """
    values = _as_array(values)
    statistic = statistic if statistic is not None else lambda sample: sample.mean(axis=1)

    if values.size == 0:
        return BootstrapEstimate(estimate=0.0, ci_low=0.0, ci_high=0.0)

    estimate = float(statistic(values[np.newaxis, :])[0])

    if values.size < 2 or np.ptp(values) == 0:
        return BootstrapEstimate(estimate=scale * estimate, ci_low=scale * estimate, ci_high=scale * estimate)

    indices = rng.integers(0, values.size, size=(resamples, values.size))
    replicates = statistic(values[indices])
    alpha = (1 - confidence) / 2
    low, high = np.quantile(replicates, [alpha, 1 - alpha])

    return BootstrapEstimate(estimate=scale * estimate, ci_low=scale * float(low), ci_high=scale * float(high))


def variance_statistic(sample: np.ndarray) -> np.ndarray:
    if sample.shape[1] < 2:
        return np.zeros(sample.shape[0])

    return np.var(sample, axis=1, ddof=1)


def summarize_observable(values: Sequence[float] | np.ndarray, n: int, rng: np.random.Generator) -> ObservableSummary:
    """
    Mean, sample variance, variance per vertex, skewness, KS distance to the normal law and bootstrap intervals
    :param values: Per-trial values of one observable
    :param n: Vertex count used for the variance scaling
    :param rng: Stream for the bootstrap
    :return: ObservableSummary
    """
    values = _as_array(values)
    variance = sample_variance(values)
    mean_ci = bootstrap_ci(values, rng)
    variance_ci = bootstrap_ci(values, rng, statistic=variance_statistic)

    return ObservableSummary(
        mean=float(values.mean()) if values.size else math.nan,
        variance=variance,
        variance_per_n=variance / n,
        skewness=skewness(values),
        ks_to_normal=ks_to_normal(values),
        mean_ci=(mean_ci.ci_low, mean_ci.ci_high),
        variance_ci=(variance_ci.ci_low, variance_ci.ci_high),
    )
