import pytest
from lib.exceptions import InvalidGraphParametersError
from lib.graph.reveal import AGGREGATE_KINDS, edge_reveal, reveal_and_verify, reveal_audit, split_probability


def test_split_probability_composes_to_p():
    p1, p2 = split_probability(n=100, c=20, p2_scale=1)

    assert p2 == pytest.approx(0.01)
    assert (1 - p1) * (1 - p2) == pytest.approx(1 - 0.2)


def test_split_probability_without_edges_left_for_first_round():
    p1, p2 = split_probability(n=100, c=5, p2_scale=5)

    assert p1 == pytest.approx(0)
    assert p2 == pytest.approx(0.05)


@pytest.mark.parametrize(
    "n, c, p2_scale",
    [
        (100, 20, 0),
        (100, 20, -1),
        (100, 200, 1),
        (100, 2, 3),
    ],
)
def test_split_probability_rejects_bad_arguments(n, c, p2_scale):
    with pytest.raises(InvalidGraphParametersError):
        split_probability(n, c, p2_scale)


def test_edge_reveal_is_deterministic():
    first = edge_reveal(n=400, c=8, p2_scale=0.5, seed=3)
    second = edge_reveal(n=400, c=8, p2_scale=0.5, seed=3)

    assert first == second
    assert first != edge_reveal(n=400, c=8, p2_scale=0.5, seed=4)


def test_edge_reveal_structure():
    outcome, verification = reveal_and_verify(n=800, c=7, p2_scale=0.5, seed=11)
    steps = outcome.intermediate

    assert not outcome.a4 & outcome.b4
    assert outcome.a4 <= steps["A3"] <= steps["A1"] <= steps["A0"]
    assert outcome.b4 <= steps["B3"] <= steps["B1"] <= steps["B0"]
    assert steps["B3-"] <= steps["B3"]
    assert outcome.stabilization_rounds >= 1
    assert verification.property_p
    assert verification.no_first_round_edges
    assert verification.revealed_within
    assert verification.leaked_entries == ()
    assert verification.passed


def test_edge_reveal_logs_every_query():
    outcome = edge_reveal(n=300, c=6, p2_scale=0.5, seed=2)
    kinds = [entry.kind for entry in outcome.access_log]

    assert kinds[:3] == ["G1", "G2:within", "G2:within"]
    assert kinds.count("G2:between") == outcome.stabilization_rounds
    assert kinds[-1] == "G2:count"
    assert "G:count>=2" in AGGREGATE_KINDS


def test_tiny_second_round_hides_nothing():
    outcome, verification = reveal_and_verify(n=1000, c=6, p2_scale=1e-9, seed=5)

    assert outcome.m == 0
    assert verification.passed
    assert verification.revealed_matches


def test_reveal_audit_runs_are_independent():
    report = reveal_audit(n=300, c=8, p2_scale=0.5, seed=7, runs=3)

    assert len(report.runs) == 3
    assert len({run.seed for run in report.runs}) == 3
    assert report.passed
    assert all(run.passed == run.verification.passed for run in report.runs)


@pytest.mark.slow
def test_reveal_at_desk_scale():
    report = reveal_audit(n=100_000, c=20, p2_scale=0.1, seed=3)

    assert report.passed
