from enum import StrEnum

from lib.schemas.base import BaseSchema, VertexSet


class Colour(StrEnum):
    sapphire = "S"
    purple = "P"
    red = "R"


class TriColouring(BaseSchema):
    s: VertexSet
    p: VertexSet
    r: VertexSet
    peel_order: tuple[int, ...] = ()

    def colour_of(self, vertex: int) -> Colour:
        if vertex in self.s:
            return Colour.sapphire

        if vertex in self.p:
            return Colour.purple

        return Colour.red

    def same_partition(self, other: "TriColouring") -> bool:
        return self.s == other.s and self.p == other.p and self.r == other.r


class LocalColouring(BaseSchema):
    center: int
    radius: int
    s_k: VertexSet
    p_k: VertexSet
    r_k: VertexSet
    boundary: VertexSet
    component_of_center: VertexSet


class ColouringAuditReport(BaseSchema):
    n: int
    sapphire: int
    purple: int
    red: int
    sapphire_red_edges: int
    # smallest vertex of each red-purple component with fewer than a quarter red
    sparse_red_components: tuple[int, ...] = ()
    max_component: int
    component_bound: float
    local_core_checks: int
    local_core_violations: tuple[tuple[int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return (
            self.sapphire_red_edges == 0
            and not self.sparse_red_components
            and self.max_component <= self.component_bound
            and not self.local_core_violations
        )
