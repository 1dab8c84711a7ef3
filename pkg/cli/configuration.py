from pathlib import Path

import click
from core.config import save_config, settings
from core.helpers import build_config
from core.schema import ClickColors, ExitCode
from lib.schemas.experiment import ExperimentKind

EXPERIMENT = click.Choice([kind.value for kind in ExperimentKind])


@click.command()
@click.argument("experiment", type=EXPERIMENT)
@click.pass_context
def show(
    ctx: click.Context,
    experiment: str,
):
    """Print the merged configuration of an experiment as key=value lines"""
    config = build_config(ctx, ExperimentKind(experiment))

    for key, value in config.model_dump(exclude_none=True).items():
        click.secho(f"{key}=", fg=ClickColors.bright_black, nl=False)
        click.echo(",".join(map(str, value)) if isinstance(value, tuple) else str(value))

    return ExitCode.success


@click.command()
@click.argument("experiment", type=EXPERIMENT)
@click.argument("config_path", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
def save(
    ctx: click.Context,
    experiment: str,
    config_path: Path,
):
    """Save the merged configuration of an experiment for later use with --config"""
    config = build_config(ctx, ExperimentKind(experiment))
    save_config(config, config_path)
    click.secho(f"Configuration for {experiment} saved to {config_path}", fg=ClickColors.green)

    return ExitCode.success


@click.command()
def settings_info():
    """Show the package settings and the defaults every experiment starts from"""
    for key, value in settings.model_dump().items():
        click.secho(f"{key}: ", fg=ClickColors.bright_black, nl=False)
        click.echo(str(value))

    return ExitCode.success
