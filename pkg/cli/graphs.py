from pathlib import Path

import click
from core.config import settings
from core.helpers import emit_report, load_graph, outcome
from core.schema import ClickColors, ContextKeys, ExitCode
from lib.graph.colouring import colouring_audit, global_colouring
from lib.graph.path_cover import phi_global
from lib.utils.files import write_colouring

EDGE_LIST = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.command()
@click.option("--graph", "graph_path", type=EDGE_LIST, help="Edge-list file, header 'n m' then one 'u v' per line")
@click.option("--n", type=int, default=1000, show_default=True, help="Vertex count of a sampled graph")
@click.option("--c", type=float, default=20.0, show_default=True, help="Expected degree of a sampled graph")
@click.option("--size-cap", type=int, default=settings.size_cap, show_default=True, help="Exact search cap")
@click.pass_context
def phi(
    ctx: click.Context,
    graph_path: Path | None,
    n: int,
    c: float,
    size_cap: int,
) -> ExitCode:
    """Per-component path-cover values and per-vertex shares of one graph"""
    seed = ctx.obj.get(ContextKeys.seed)
    seed = settings.default_seed if seed is None else seed
    g = load_graph(graph_path, n, c, seed)
    breakdown = phi_global(g, global_colouring(g), size_cap)
    emit_report(breakdown, "phi", ctx.obj.get(ContextKeys.output))
    click.secho(f"L-tilde = {breakdown.l_tilde}", fg=ClickColors.cyan, err=True)

    return ExitCode.success


@click.command()
@click.option("--graph", "graph_path", type=EDGE_LIST, help="Edge-list file, header 'n m' then one 'u v' per line")
@click.option("--n", type=int, default=1000, show_default=True, help="Vertex count of a sampled graph")
@click.option("--c", type=float, default=20.0, show_default=True, help="Expected degree of a sampled graph")
@click.option("--export", "export_path", type=click.Path(dir_okay=False, path_type=Path), help="Write S/P/R lines")
@click.option("--audit", is_flag=True, help="Re-check the colouring invariants instead of printing the partition")
@click.option("--checks", type=int, default=1000, show_default=True, help="Random (w, k) pairs for the local core")
@click.pass_context
def colour(
    ctx: click.Context,
    graph_path: Path | None,
    n: int,
    c: float,
    export_path: Path | None,
    audit: bool,
    checks: int,
) -> ExitCode:
    """Strong 4-core colouring of one graph"""
    seed = ctx.obj.get(ContextKeys.seed)
    seed = settings.default_seed if seed is None else seed
    output = ctx.obj.get(ContextKeys.output)
    g = load_graph(graph_path, n, c, seed)

    if audit:
        report = colouring_audit(g, checks=checks, seed=seed)
        emit_report(report, "colour-audit", output)

        return outcome(report.passed, "colour")

    col = global_colouring(g)

    if export_path is not None:
        write_colouring(col, export_path)
        click.secho(f"Colouring written to {export_path}", fg=ClickColors.green, err=True)

    emit_report(col, "colour", output)

    return ExitCode.success
