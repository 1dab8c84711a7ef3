from lib.schemas.base import BaseSchema
from pydantic import Field


class GnpParams(BaseSchema):
    n: int = Field(ge=1)
    c: float = Field(ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @property
    def p(self) -> float:
        return self.c / self.n
