from enum import StrEnum
from pathlib import Path
from typing import Any

from lib.schemas.base import BaseSchema, Rational
from pydantic import Field, field_validator, model_validator


class ExperimentKind(StrEnum):
    clt = "clt"
    variance_scan = "variance-scan"
    threshold_scan = "threshold-scan"
    resample_audit = "resample-audit"
    poisson_regime = "poisson-regime"
    tail_bound = "tail-bound"
    theorem11 = "theorem11"
    balls_bins = "balls-bins"
    reveal = "reveal"
    census = "census"


class ExperimentConfig(BaseSchema):
    experiment: ExperimentKind
    n: int = Field(default=1000, ge=1)
    c: float = Field(default=20.0, ge=0)
    k: int = Field(default=6, ge=1)
    trials: int = Field(default=100, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    truncation: int | None = Field(default=None, ge=1)
    size_cap: int = Field(default=64, ge=1)
    p2_scale: float = Field(default=0.1, gt=0)
    threads: int = Field(default=1, ge=1)
    output: Path | None = None
    # variance-scan
    sizes: tuple[int, ...] = ()
    # threshold-scan
    c_min: float = Field(default=8.0, ge=0)
    c_max: float = Field(default=11.0, ge=0)
    c_step: float = Field(default=0.1, gt=0)
    plain_core: bool = False
    # poisson-regime
    lam: float = 0.0
    # tail-bound
    s_grid: tuple[int, ...] = ()
    # balls-bins
    bins: int = Field(default=2, ge=1)
    balls: int = Field(default=2, ge=0)
    # theorem11 and audits
    budget: int = Field(default=10**8, ge=1)
    timing: bool = False

    @field_validator("sizes", "s_grid", mode="before")
    @classmethod
    def split_comma_list(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(int(item) for item in value.split(",") if item.strip())

        return value

    @model_validator(mode="after")
    def check_experiment_fields(self) -> "ExperimentConfig":
        unused_c = (ExperimentKind.balls_bins, ExperimentKind.poisson_regime, ExperimentKind.threshold_scan)

        if self.experiment not in unused_c and self.c > self.n:
            raise ValueError(f"c={self.c} exceeds n={self.n}, p would be above 1")

        match self.experiment:
            case ExperimentKind.clt if self.trials < 100:
                raise ValueError("clt needs at least 100 trials")
            case ExperimentKind.theorem11 if self.c < 20:
                raise ValueError("theorem11 needs c >= 20")
            case ExperimentKind.threshold_scan if self.c_min > self.c_max:
                raise ValueError("c_min must not exceed c_max")
            case ExperimentKind.variance_scan if len(self.sizes) < 2:
                raise ValueError("variance-scan needs at least two sizes")

        return self


class TrialRecord(BaseSchema):
    trial: int
    seed: int
    l_tilde: int | None
    l_tilde_k: Rational | None
    l_hat_k: Rational | None
    max_rp_comp: int
    aborts: int
    runtime_us: int


class ObservableSummary(BaseSchema):
    mean: float
    variance: float
    variance_per_n: float
    skewness: float | None
    ks_to_normal: float | None
    mean_ci: tuple[float, float]
    variance_ci: tuple[float, float]


class ExperimentSummary(BaseSchema):
    experiment: ExperimentKind
    n: int
    c: float
    k: int
    seed: int
    trials: int
    aborted: int
    degenerate: tuple[str, ...] = ()
    observables: dict[str, ObservableSummary]
    tv_to_poisson: float | None = None
    extra: dict[str, float | int | str | None] = {}
    passed: bool | None = None


class ThresholdPoint(BaseSchema):
    c: float
    strong_core_fraction: float
    plain_core_fraction: float | None = None


def _jump_within(jump: float | None, window: tuple[float, float] | None) -> bool | None:
    if window is None:
        return None

    return jump is not None and window[0] <= jump <= window[1]


class ThresholdScanReport(BaseSchema):
    n: int
    trials: int
    points: tuple[ThresholdPoint, ...]
    strong_core_jump: float | None
    plain_core_jump: float | None = None
    # expected jump windows, set only when the grid covers them
    strong_core_window: tuple[float, float] | None = None
    plain_core_window: tuple[float, float] | None = None

    @property
    def passed(self) -> bool | None:
        checks = [
            check
            for check in (
                _jump_within(self.strong_core_jump, self.strong_core_window),
                _jump_within(self.plain_core_jump, self.plain_core_window),
            )
            if check is not None
        ]

        return all(checks) if checks else None


class VarianceScanEntry(BaseSchema):
    n: int
    trials: int
    aborted: int
    variance_per_n: dict[str, float]


class VarianceScanReport(BaseSchema):
    entries: tuple[VarianceScanEntry, ...]
    ratios: dict[str, tuple[float, ...]]
    tolerance: float
    passed: bool


class TailPoint(BaseSchema):
    s: int
    fraction: float
    bound: float
    standard_error: float
    passed: bool


class TailBoundReport(BaseSchema):
    n: int
    c: float
    k: int
    samples: int
    points: tuple[TailPoint, ...]
    passed: bool


class CensusReport(BaseSchema):
    n: int
    c: float
    k: int
    seed: int
    truncation: int | None
    classes: int
    vertices_counted: int
    weighted_total: Rational
    l_hat_k: Rational
