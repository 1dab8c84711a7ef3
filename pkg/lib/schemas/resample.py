from lib.graph.core import FlipPair, Graph
from lib.schemas.base import BaseSchema, Rational, VertexSet
from lib.schemas.colouring import TriColouring


class FlipAnalysis(BaseSchema):
    flip: FlipPair
    k: int
    colour_plus: TriColouring
    colour_minus: TriColouring
    w_plus: VertexSet
    w_minus: VertexSet
    w_star: VertexSet
    w_star_r: VertexSet
    d: VertexSet
    d_tilde: VertexSet
    i_star: VertexSet
    i_star_k: VertexSet
    # nonzero shares only, a missing vertex has share 0
    phi_plus: dict[int, Rational]
    phi_minus: dict[int, Rational]
    phi_k_plus: dict[int, Rational]
    phi_k_minus: dict[int, Rational]

    @property
    def edge(self) -> tuple[int, int]:
        return self.flip.edge


class FlipViolation(BaseSchema):
    lemma: str
    detail: str
    edge: tuple[int, int]
    witness: tuple[int, ...] = ()


class FlipLemmaReport(BaseSchema):
    ok: bool
    violation: FlipViolation | None = None

    def __bool__(self) -> bool:
        return self.ok


class IdentityCheck(BaseSchema):
    holds: bool
    failed: tuple[str, ...] = ()
    lhs: Rational | None = None
    rhs: Rational | None = None
    stars: int | None = None

    def __bool__(self) -> bool:
        return self.holds


class PropertyInstance(BaseSchema):
    n: int
    edges: tuple[tuple[int, int], ...]
    a: VertexSet
    b: VertexSet
    seed: int

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


class ResampleAuditReport(BaseSchema):
    n: int
    c: float
    k: int
    flips: int
    seed: int
    aborted: int
    violations: tuple[FlipViolation, ...] = ()
    violation_seeds: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.violations


class BootstrapEstimate(BaseSchema):
    estimate: float
    ci_low: float
    ci_high: float


class EfronSteinReport(BaseSchema):
    n: int
    c: float
    k: int
    trials: int
    seed: int
    aborted: int
    variance: BootstrapEstimate
    mean_d_squared: BootstrapEstimate
    bound: BootstrapEstimate
    difference_variance: BootstrapEstimate
    difference_bound: BootstrapEstimate
    passed: bool


class AccessLogEntry(BaseSchema):
    """
    One reveal of the edge oracle: every pair between left and right (or inside left when right is None).
    With complement_right the right side is every vertex not in right.
    """

    kind: str
    left: VertexSet
    right: VertexSet | None = None
    complement_right: bool = False


class RevealOutcome(BaseSchema):
    n: int
    c: float
    p2_scale: float
    seed: int
    a4: VertexSet
    b4: VertexSet
    m: int
    revealed_edges: frozenset[tuple[int, int]]
    intermediate: dict[str, VertexSet]
    access_log: tuple[AccessLogEntry, ...]
    stabilization_rounds: int


class RevealVerification(BaseSchema):
    property_p: bool
    no_first_round_edges: bool
    # nothing outside G - E(A4, B4) was revealed
    revealed_within: bool
    # revealed edges are exactly G - E(A4, B4), vertices dropped from A2 may keep hidden edges to B2
    revealed_matches: bool
    leaked_entries: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.property_p and self.no_first_round_edges and self.revealed_within and not self.leaked_entries


class AttachmentAuditReport(BaseSchema):
    instances: int
    k: int
    seed: int
    star_failures: tuple[int, ...] = ()
    core_failures: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.star_failures and not self.core_failures


class RevealReport(BaseSchema):
    seed: int
    a4: int
    b4: int
    m: int
    revealed_edges: int
    stabilization_rounds: int
    intermediate: dict[str, int]
    log_entries: int
    verification: RevealVerification
    passed: bool


class RevealAuditReport(BaseSchema):
    n: int
    c: float
    p2_scale: float
    seed: int
    runs: tuple[RevealReport, ...]

    @property
    def passed(self) -> bool:
        return all(run.passed for run in self.runs)
