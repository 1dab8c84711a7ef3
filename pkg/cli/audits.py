import click
from core.helpers import build_config, emit_report, outcome
from core.schema import ExitCode
from lib.graph.attachment import attachment_audit
from lib.graph.cycle_exact import theorem11_audit
from lib.graph.resample import efron_stein_audit, resample_audit
from lib.graph.reveal import reveal_audit
from lib.schemas.experiment import ExperimentKind
from lib.schemas.occupancy import OccupancyParams
from lib.utils.occupancy import balls_bins_report


@click.command(name="resample-audit")
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree, p = c/n")
@click.option("--k", type=int, help="Local radius")
@click.option("--flips", "trials", type=int, help="Number of random flips")
@click.option("--size-cap", type=int, help="Largest red-purple component solved exactly")
@click.option(
    "--efron-stein-trials", type=int, default=0, show_default=True, help="Graphs for the variance bound, 0 skips"
)
@click.option("--attachments", type=int, default=0, show_default=True, help="Generated star attachments, 0 skips")
@click.pass_context
def resample_audit_command(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    k: int | None,
    trials: int | None,
    size_cap: int | None,
    efron_stein_trials: int,
    attachments: int,
) -> ExitCode:
    """Check the flip lemmas on random flips, optionally the variance bound and the star identities"""
    config = build_config(ctx, ExperimentKind.resample_audit, n=n, c=c, k=k, trials=trials, size_cap=size_cap)
    report = resample_audit(
        config.n, config.c, config.k, config.trials, config.seed, threads=config.threads, size_cap=config.size_cap
    )
    emit_report(report, "resample-audit", config.output)
    passed = report.passed

    if efron_stein_trials:
        bound = efron_stein_audit(
            config.n,
            config.c,
            config.k,
            efron_stein_trials,
            config.seed,
            threads=config.threads,
            size_cap=config.size_cap,
        )
        emit_report(bound, "efron-stein", config.output)
        passed = passed and bound.passed

    if attachments:
        identities = attachment_audit(
            attachments, max(config.k, 2), config.seed, threads=config.threads, size_cap=config.size_cap
        )
        emit_report(identities, "attachments", config.output)
        passed = passed and identities.passed

    return outcome(passed, "resample-audit")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree, between 20 and 2 ln n")
@click.option("--trials", type=int, help="Number of sampled graphs")
@click.option("--budget", type=int, help="Cycle search node expansions per graph")
@click.pass_context
def theorem11(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    trials: int | None,
    budget: int | None,
) -> ExitCode:
    """Compare the exact circumference with n - Phi(G)"""
    config = build_config(ctx, ExperimentKind.theorem11, n=n, c=c, trials=trials, budget=budget)
    report = theorem11_audit(
        config.n,
        config.c,
        config.trials,
        config.seed,
        budget=config.budget,
        size_cap=config.size_cap,
        threads=config.threads,
    )
    emit_report(report, "theorem11", config.output)

    return outcome(report.passed, "theorem11")


@click.command()
@click.option("--bins", type=int, help="Number of bins N")
@click.option("--balls", type=int, help="Number of balls m")
@click.option("--trials", type=int, help="Monte Carlo trials, at least 2")
@click.pass_context
def balls_bins(
    ctx: click.Context,
    bins: int | None,
    balls: int | None,
    trials: int | None,
) -> ExitCode:
    """Variance of the number of bins holding at least 2 balls"""
    config = build_config(ctx, ExperimentKind.balls_bins, bins=bins, balls=balls, trials=trials)
    params = OccupancyParams(bins=config.bins, balls=config.balls, trials=config.trials, seed=config.seed)
    report = balls_bins_report(params, threads=config.threads)
    emit_report(report, "balls-bins", config.output)

    return outcome(report.passed, "balls-bins")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree of the union graph")
@click.option("--p2-scale", type=float, help="n times the second-round edge probability")
@click.option("--runs", type=int, default=1, show_default=True, help="Independent reveals")
@click.pass_context
def reveal(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    p2_scale: float | None,
    runs: int,
) -> ExitCode:
    """Run the two-round edge revealing process and verify its outcome"""
    config = build_config(ctx, ExperimentKind.reveal, n=n, c=c, p2_scale=p2_scale)
    report = reveal_audit(config.n, config.c, config.p2_scale, config.seed, runs=runs, threads=config.threads)
    emit_report(report, "reveal", config.output)

    return outcome(report.passed, "reveal")
