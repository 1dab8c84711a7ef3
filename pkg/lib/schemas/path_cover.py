from fractions import Fraction

from lib.schemas.base import BaseSchema, Rational, VertexSet


class PathCoverResult(BaseSchema):
    uncovered: int
    # nontrivial paths only, a lone W vertex covers nothing
    witness: tuple[tuple[int, ...], ...] = ()


class PhiBreakdown(BaseSchema):
    n: int
    phi_total: int
    per_vertex: dict[int, Rational]
    per_component: dict[int, int]
    components: tuple[VertexSet, ...]

    @property
    def l_tilde(self) -> int:
        return self.n - self.phi_total

    def phi(self, vertex: int) -> Fraction:
        return self.per_vertex.get(vertex, Fraction(0))
