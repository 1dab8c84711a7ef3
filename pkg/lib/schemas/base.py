from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, ConfigDict, PlainSerializer


def fraction_to_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


# Exact rationals stay Fraction in memory and become "num/den" in JSON
Rational = Annotated[Fraction, PlainSerializer(fraction_to_text, return_type=str, when_used="json")]
VertexSet = frozenset[int]


class BaseSchema(BaseModel):
    model_config = ConfigDict(
        from_attributes=True,
        strict=True,
        arbitrary_types_allowed=True,
        extra="forbid",
        frozen=True,
    )


class CheckResult(BaseSchema):
    ok: bool
    violation: str | None = None
    witness: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok
