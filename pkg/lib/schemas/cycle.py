from lib.schemas.base import BaseSchema

MIN_AGREEMENT = 0.95


class CycleResult(BaseSchema):
    length: int
    witness: tuple[int, ...] = ()
    exact: bool = True
    expansions: int = 0


class Theorem11Disagreement(BaseSchema):
    trial: int
    seed: int
    circumference: int
    l_tilde: int


class Theorem11Report(BaseSchema):
    n: int
    c: float
    trials: int
    seed: int
    agreements: int
    agreement_fraction: float | None
    disagreements: tuple[Theorem11Disagreement, ...] = ()
    inexact_seeds: tuple[int, ...] = ()
    aborted_seeds: tuple[int, ...] = ()

    @property
    def passed(self) -> bool | None:
        if self.agreement_fraction is None:
            return None

        return self.agreement_fraction >= MIN_AGREEMENT and not self.inexact_seeds
