import click
from core.helpers import build_config, emit_report, outcome
from core.schema import ExitCode
from lib.harness.scans import run_census, run_poisson_regime, run_tail_bound, run_threshold_scan
from lib.harness.trials import run_clt, run_variance_scan
from lib.schemas.experiment import ExperimentKind
from lib.utils.files import write_census, write_records


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree, p = c/n")
@click.option("--k", type=int, help="Local radius of L-tilde_k and L-hat_k")
@click.option("--trials", type=int, help="Number of sampled graphs, at least 100")
@click.option("--truncation", type=int, help="Largest ball-tree size counted by L-hat_k, default (10ck)^(2k)")
@click.option("--size-cap", type=int, help="Largest red-purple component solved exactly")
@click.option("--timing/--no-timing", default=None, help="Record per-trial runtimes")
@click.pass_context
def clt(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    k: int | None,
    trials: int | None,
    truncation: int | None,
    size_cap: int | None,
    timing: bool | None,
) -> ExitCode:
    """Sample graphs and compare the standardized proxies with the normal law"""
    config = build_config(
        ctx,
        ExperimentKind.clt,
        n=n,
        c=c,
        k=k,
        trials=trials,
        truncation=truncation,
        size_cap=size_cap,
        timing=timing,
    )
    records, summary = run_clt(config)

    if config.output is not None:
        write_records(records, config.output / "clt-records.csv")

    emit_report(summary, "clt-summary", config.output)

    return outcome(summary.passed, "clt")


@click.command()
@click.option("--sizes", help="Comma separated vertex counts, e.g. 4000,16000")
@click.option("--c", type=float, help="Expected degree, p = c/n")
@click.option("--k", type=int, help="Local radius")
@click.option("--trials", type=int, help="Sampled graphs per size")
@click.option("--size-cap", type=int, help="Largest red-purple component solved exactly")
@click.pass_context
def variance_scan(
    ctx: click.Context,
    sizes: str | None,
    c: float | None,
    k: int | None,
    trials: int | None,
    size_cap: int | None,
) -> ExitCode:
    """Compare Var/n of the proxies across graph sizes"""
    config = build_config(
        ctx, ExperimentKind.variance_scan, sizes=sizes, c=c, k=k, trials=trials, size_cap=size_cap
    )
    report = run_variance_scan(config)
    emit_report(report, "variance-scan", config.output)

    return outcome(report.passed, "variance-scan")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c-min", type=float, help="First c of the grid")
@click.option("--c-max", type=float, help="Last c of the grid")
@click.option("--c-step", type=float, help="Grid step")
@click.option("--trials", type=int, help="Sampled graphs per grid point")
@click.option("--plain-core/--strong-only", default=None, help="Also scan the plain 4-core")
@click.pass_context
def threshold_scan(
    ctx: click.Context,
    n: int | None,
    c_min: float | None,
    c_max: float | None,
    c_step: float | None,
    trials: int | None,
    plain_core: bool | None,
) -> ExitCode:
    """Locate the emergence of the strong 4-core over a grid of c"""
    config = build_config(
        ctx,
        ExperimentKind.threshold_scan,
        n=n,
        c_min=c_min,
        c_max=c_max,
        c_step=c_step,
        trials=trials,
        plain_core=plain_core,
    )
    report = run_threshold_scan(config)
    emit_report(report, "threshold-scan", config.output)

    return outcome(report.passed, "threshold-scan")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--lam", type=float, help="Offset of c = ln n + ln ln n + lam")
@click.option("--trials", type=int, help="Number of sampled graphs")
@click.option("--size-cap", type=int, help="Largest red-purple component solved exactly")
@click.pass_context
def poisson_regime(
    ctx: click.Context,
    n: int | None,
    lam: float | None,
    trials: int | None,
    size_cap: int | None,
) -> ExitCode:
    """Compare n - L-tilde near the connectivity threshold with Poisson(e^-lam)"""
    config = build_config(ctx, ExperimentKind.poisson_regime, n=n, lam=lam, trials=trials, size_cap=size_cap)
    summary = run_poisson_regime(config)
    emit_report(summary, "poisson-regime", config.output)

    return outcome(summary.passed, "poisson-regime")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree, p = c/n")
@click.option("--k", type=int, help="Ball radius")
@click.option("--trials", type=int, help="Number of sampled graphs")
@click.option("--s-grid", help="Comma separated ball sizes, each above (7c)^k")
@click.pass_context
def tail_bound(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    k: int | None,
    trials: int | None,
    s_grid: str | None,
) -> ExitCode:
    """Compare the tail of the k-ball sizes with k exp(-s^(1/k))"""
    config = build_config(ctx, ExperimentKind.tail_bound, n=n, c=c, k=k, trials=trials, s_grid=s_grid)
    report = run_tail_bound(config)
    emit_report(report, "tail-bound", config.output)

    return outcome(report.passed, "tail-bound")


@click.command()
@click.option("--n", type=int, help="Vertex count")
@click.option("--c", type=float, help="Expected degree, p = c/n")
@click.option("--k", type=int, help="Ball radius")
@click.option("--truncation", type=int, help="Largest ball-tree size counted, default (10ck)^(2k)")
@click.pass_context
def census(
    ctx: click.Context,
    n: int | None,
    c: float | None,
    k: int | None,
    truncation: int | None,
) -> ExitCode:
    """Count the rooted-tree classes of the k-balls of one sampled graph"""
    config = build_config(ctx, ExperimentKind.census, n=n, c=c, k=k, truncation=truncation)
    entries, report = run_census(config)

    if config.output is not None:
        write_census(entries, config.output / "census.csv")

    emit_report(report, "census", config.output)

    return outcome(report.weighted_total == report.l_hat_k, "census")
