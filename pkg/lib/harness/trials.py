"""
Per-trial Monte Carlo records and the experiments summarizing them.

Every trial samples its own graph from a seed derived from (master seed, trial index) and emits exactly one
TrialRecord, so record files do not depend on how trials were scheduled over workers.
"""

import logging
import math
from functools import partial
from time import perf_counter_ns

import numpy as np
from lib.exceptions import ComponentTooLargeError, ExperimentAbortedError
from lib.graph.core import sample_gnp
from lib.graph.estimators import default_truncation, proxy_values
from lib.schemas.experiment import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentSummary,
    TrialRecord,
    VarianceScanEntry,
    VarianceScanReport,
)
from lib.schemas.graph import GnpParams
from lib.utils.parallel import parallel_map
from lib.utils.seeding import derive_rng, derive_seed
from lib.utils.statistics import summarize_observable
from lib.wrappers.misc import benchmark

logger = logging.getLogger(__name__)

OBSERVABLES = ("l_tilde", "l_tilde_k", "l_hat_k")
MAX_ABORT_FRACTION = 0.01
KS_TOLERANCE = 0.06
VARIANCE_RATIO_TOLERANCE = 0.2


def effective_truncation(config: ExperimentConfig) -> int | None:
    """
    Tree-size truncation used by L-hat_k: the configured one, else (10ck)^(2k), None meaning no size limit
    """
    if config.truncation is not None:
        return config.truncation

    return default_truncation(config.c, config.k) if config.c > 0 else None


def run_trial(config: ExperimentConfig, truncation: int | None, trial: int) -> TrialRecord:
    """
    Samples one graph and records its three proxies.
    A red-purple component above the size cap aborts the trial, leaving the proxies empty.
    :param config: Experiment configuration
    :param truncation: Tree-size truncation for L-hat_k
    :param trial: Trial index
    :return: TrialRecord
    """
    trial_seed = derive_seed(config.seed, "trial", trial)
    start = perf_counter_ns()
    g = sample_gnp(GnpParams(n=config.n, c=config.c, seed=trial_seed))

    try:
        proxy = proxy_values(g, config.k, truncation, config.size_cap)
    except ComponentTooLargeError as ex:
        logger.debug(f"Trial {trial} aborted on a component of size {ex.size}")
        proxy = None
        max_rp_comp = ex.size
    else:
        max_rp_comp = proxy.max_rp_comp

    runtime_us = (perf_counter_ns() - start) // 1000 if config.timing else 0

    return TrialRecord(
        trial=trial,
        seed=trial_seed,
        l_tilde=None if proxy is None else proxy.l_tilde,
        l_tilde_k=None if proxy is None else proxy.l_tilde_k,
        l_hat_k=None if proxy is None else proxy.l_hat_k,
        max_rp_comp=max_rp_comp,
        aborts=0 if proxy is not None else 1,
        runtime_us=runtime_us,
    )


def collect_records(config: ExperimentConfig) -> list[TrialRecord]:
    return parallel_map(
        partial(run_trial, config, effective_truncation(config)),
        range(config.trials),
        threads=config.threads,
        description=str(config.experiment),
    )


def observable_values(records: list[TrialRecord], name: str) -> np.ndarray:
    return np.array([float(getattr(record, name)) for record in records if not record.aborts], dtype=float)


def summarize_records(config: ExperimentConfig, records: list[TrialRecord]) -> ExperimentSummary:
    """
    Statistics of the recorded proxies. Depends only on the config and the records, so a summary recomputed
    from a record file equals the live one.
    :param config: Experiment configuration
    :param records: Trial records, in any order
    :return: ExperimentSummary, observables with zero sample variance listed as degenerate
    """
    records = sorted(records, key=lambda record: record.trial)
    rng = derive_rng(config.seed, "summary-bootstrap")
    observables = {name: summarize_observable(observable_values(records, name), config.n, rng) for name in OBSERVABLES}
    degenerate = tuple(name for name, summary in observables.items() if summary.variance == 0)
    ks = observables["l_tilde"].ks_to_normal

    return ExperimentSummary(
        experiment=config.experiment,
        n=config.n,
        c=config.c,
        k=config.k,
        seed=config.seed,
        trials=len(records),
        aborted=sum(1 for record in records if record.aborts),
        degenerate=degenerate,
        observables=observables,
        extra={"truncation": effective_truncation(config)},
        passed=None if ks is None else ks <= KS_TOLERANCE,
    )


def check_aborts(aborted: int, trials: int) -> None:
    """
    :raise ExperimentAbortedError: If more than 1% of the trials hit the path-cover size cap
    """
    if aborted > MAX_ABORT_FRACTION * trials:
        raise ExperimentAbortedError(
            f"{aborted} of {trials} trials hit the path-cover size cap", aborted=aborted, trials=trials
        )


def _check_record_aborts(records: list[TrialRecord]) -> None:
    check_aborts(sum(1 for record in records if record.aborts), len(records))


@benchmark()
def run_clt(config: ExperimentConfig) -> tuple[list[TrialRecord], ExperimentSummary]:
    """
    Samples config.trials graphs and summarizes the standardized proxies against the normal law.
    :param config: clt configuration
    :return: The records and their summary
    :raise ExperimentAbortedError: If more than 1% of the trials abort on the size cap
    """
    records = collect_records(config)
    _check_record_aborts(records)
    summary = summarize_records(config, records)

    if summary.degenerate:
        logger.warning(f"Degenerate observables with zero variance: {', '.join(summary.degenerate)}")

    logger.info(
        f"clt n={config.n} c={config.c} k={config.k}: KS(L-tilde)={summary.observables['l_tilde'].ks_to_normal}, "
        f"Var/n={summary.observables['l_tilde'].variance_per_n:.4f}"
    )

    return records, summary


def _ratio(previous: float, current: float) -> float:
    if previous == 0:
        return 1.0 if current == 0 else math.inf

    return current / previous


@benchmark()
def run_variance_scan(config: ExperimentConfig) -> VarianceScanReport:
    """
    Variance per vertex of each proxy at every size in config.sizes, with the ratios between consecutive sizes.
    Passes when every ratio lies within 20% of 1.
    :param config: variance-scan configuration
    :return: VarianceScanReport
    :raise ExperimentAbortedError: If more than 1% of the trials at some size abort
    """
    entries = []

    for position, n in enumerate(config.sizes):
        sized = config.model_copy(update={"n": n, "seed": derive_seed(config.seed, "variance-scan", position)})
        records = collect_records(sized)
        _check_record_aborts(records)
        summary = summarize_records(sized, records)
        entries.append(
            VarianceScanEntry(
                n=n,
                trials=summary.trials,
                aborted=summary.aborted,
                variance_per_n={name: summary.observables[name].variance_per_n for name in OBSERVABLES},
            )
        )

    ratios = {
        name: tuple(
            _ratio(before.variance_per_n[name], after.variance_per_n[name])
            for before, after in zip(entries, entries[1:])
        )
        for name in OBSERVABLES
    }
    passed = all(abs(ratio - 1) <= VARIANCE_RATIO_TOLERANCE for values in ratios.values() for ratio in values)
    logger.info(f"Variance scan over sizes {list(config.sizes)}: ratios {ratios}")

    return VarianceScanReport(
        entries=tuple(entries), ratios=ratios, tolerance=VARIANCE_RATIO_TOLERANCE, passed=passed
    )
