from lib.schemas.base import BaseSchema, Rational


class RootedTreeClass(BaseSchema):
    canonical_code: str
    size: int
    alpha: Rational


class CensusEntry(BaseSchema):
    tree: RootedTreeClass
    count: int


class ProxyValues(BaseSchema):
    n: int
    k: int
    truncation: int | None
    l_tilde: int
    l_tilde_k: Rational
    l_hat_k: Rational
    max_rp_comp: int
