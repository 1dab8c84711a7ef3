import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from lib.exceptions import InvalidGraphParametersError, InvalidRadiusError, InvalidVertexError
from lib.graph.core import sample_gnp
from lib.graph.resample import analyze_flip, check_flip_lemmas, efron_stein_audit, random_pair, resample_audit
from lib.schemas.graph import GnpParams
from lib.utils.seeding import derive_rng

COMPARED_FIELDS = (
    "w_plus",
    "w_minus",
    "w_star",
    "w_star_r",
    "d",
    "d_tilde",
    "i_star",
    "i_star_k",
    "phi_plus",
    "phi_minus",
    "phi_k_plus",
    "phi_k_minus",
)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=40),
    c=st.floats(min_value=0, max_value=8),
    k=st.integers(min_value=1, max_value=4),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_flip_analysis_is_symmetric(n, c, k, seed):
    g = sample_gnp(GnpParams(n=n, c=min(c, n), seed=seed))
    u, v = random_pair(derive_rng(seed, "test-pair"), n)
    forward = analyze_flip(g, u, v, k)
    backward = analyze_flip(g, v, u, k)

    assert forward.edge == backward.edge == (min(u, v), max(u, v))

    for field in COMPARED_FIELDS:
        assert getattr(forward, field) == getattr(backward, field), field

    assert forward.colour_plus.same_partition(backward.colour_plus)
    assert forward.colour_minus.same_partition(backward.colour_minus)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=40),
    c=st.floats(min_value=0, max_value=10),
    k=st.integers(min_value=1, max_value=4),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_flip_lemmas_hold_on_random_flips(n, c, k, seed):
    g = sample_gnp(GnpParams(n=n, c=min(c, n), seed=seed))
    u, v = random_pair(derive_rng(seed, "test-pair"), n)
    report = check_flip_lemmas(analyze_flip(g, u, v, k))

    assert report, report.violation


@pytest.mark.parametrize("k", [3, 4, 6])
def test_flip_on_edgeless_graph(edgeless, k):
    fa = analyze_flip(edgeless, 2, 5, k)

    assert fa.w_star == frozenset({2, 5})
    assert fa.d == fa.d_tilde == frozenset()
    assert check_flip_lemmas(fa)


def test_flip_inside_core_changes_nothing(k6):
    fa = analyze_flip(k6, 0, 1, k=2)

    assert fa.colour_minus.s == frozenset(range(6))
    assert fa.colour_plus.same_partition(fa.colour_minus)
    assert fa.i_star == fa.i_star_k == frozenset(range(6))
    assert fa.w_star == frozenset({0, 1})
    assert check_flip_lemmas(fa)


def test_corrupted_analysis_is_reported(dense_graph):
    rng = derive_rng(0, "test-pair")

    while True:
        u, v = random_pair(rng, dense_graph.n)
        fa = analyze_flip(dense_graph, u, v, k=3)

        if fa.w_star != frozenset(range(dense_graph.n)):
            break

    outsider = min(frozenset(range(dense_graph.n)) - fa.w_star)
    report = check_flip_lemmas(fa.model_copy(update={"d": fa.d | {outsider}}))

    assert not report
    assert report.violation.lemma == "localized-change"
    assert outsider in report.violation.witness
    assert report.violation.edge == fa.edge


def test_analyze_flip_rejects_bad_arguments(k6):
    with pytest.raises(InvalidRadiusError):
        analyze_flip(k6, 0, 1, k=0)

    with pytest.raises(InvalidVertexError):
        analyze_flip(k6, 3, 3, k=2)


def test_random_pair_never_repeats_a_vertex():
    rng = derive_rng(5, "test-pair")

    for _ in range(1000):
        u, v = random_pair(rng, 3)
        assert u != v
        assert 0 <= u < 3 and 0 <= v < 3


def test_resample_audit_small():
    report = resample_audit(n=80, c=8, k=3, flips=40, seed=2, flips_per_graph=20)

    assert report.flips == 40
    assert report.passed, report.violations
    assert len(report.violation_seeds) == len(report.violations)


def test_resample_audit_is_thread_independent():
    single = resample_audit(n=40, c=6, k=2, flips=30, seed=9, flips_per_graph=10, threads=1)
    pooled = resample_audit(n=40, c=6, k=2, flips=30, seed=9, flips_per_graph=10, threads=2)

    assert single == pooled


def test_resample_audit_rejects_single_vertex():
    with pytest.raises(InvalidGraphParametersError):
        resample_audit(n=1, c=0, k=2, flips=1, seed=0)


def test_efron_stein_without_edges():
    report = efron_stein_audit(n=10, c=0, k=2, trials=5, seed=0)

    assert report.aborted == 0
    assert report.variance.estimate == 0
    assert report.bound.estimate == 0
    assert report.difference_variance.estimate == 0
    assert report.difference_bound.estimate == 0
    assert report.passed


def test_efron_stein_rejects_single_trial():
    with pytest.raises(InvalidGraphParametersError):
        efron_stein_audit(n=10, c=1, k=2, trials=1, seed=0)


def test_efron_stein_small_regime():
    report = efron_stein_audit(n=60, c=5, k=2, trials=40, seed=4)

    assert report.trials == 40
    assert report.aborted == 0
    assert report.variance.estimate >= 0
    assert report.bound.ci_low <= report.bound.ci_high
    assert report.mean_d_squared.estimate * 2 * (5 / 60) * (1 - 5 / 60) * 60**2 == pytest.approx(report.bound.estimate)


@pytest.mark.slow
@pytest.mark.parametrize("n, c, k", [(500, 5, 4), (2000, 20, 6)])
def test_flip_lemmas_at_desk_scale(n, c, k):
    report = resample_audit(n=n, c=c, k=k, flips=10_000, seed=1, threads=4)

    assert report.passed, report.violations[:5]


@pytest.mark.slow
def test_efron_stein_at_desk_scale():
    report = efron_stein_audit(n=2000, c=20, k=6, trials=500, seed=1, threads=4)

    assert report.aborted <= 5
    assert report.variance.ci_low <= report.bound.ci_high
    assert report.passed
