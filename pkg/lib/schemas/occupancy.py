from lib.schemas.base import BaseSchema, Rational
from pydantic import Field


class OccupancyParams(BaseSchema):
    bins: int = Field(ge=1)
    balls: int = Field(ge=0)
    trials: int = Field(ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)


class OccupancyEstimate(BaseSchema):
    mean: float
    variance: float
    standard_error: float


class OccupancyReport(BaseSchema):
    bins: int
    balls: int
    trials: int
    seed: int
    estimate: OccupancyEstimate
    exact: Rational | None = None
    h_prediction: float
    # exact variance within 4 standard errors, None when the enumeration is too large
    agrees_with_exact: bool | None = None
    # h(m / N) N within 10% or 4 standard errors, checked only without the exact variance
    agrees_with_h: bool | None = None
    h_lower_bound_holds: bool = True

    @property
    def passed(self) -> bool:
        return self.agrees_with_exact is not False and self.agrees_with_h is not False and self.h_lower_bound_holds
