import logging
import sys
from pathlib import Path

import click
from cli import audits, configuration, experiments, graphs
from core.config import settings
from core.schema import ClickColors, ContextKeys, ExitCode
from lib.exceptions import CustomException, ExperimentAbortedError
from lib.logger import configure_logging

logger = logging.getLogger(__name__)


@click.group()
@click.version_option(version=settings.package_version, prog_name=settings.package_name)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Master seed of every random stream")
@click.option("--threads", type=click.IntRange(min=1), help="Worker processes for the trials")
@click.option("--output", type=click.Path(file_okay=False, path_type=Path), help="Directory for records and reports")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="key=value experiment configuration, overridden by flags",
)
@click.pass_context
def cli(
    ctx: click.Context,
    seed: int | None,
    threads: int | None,
    output: Path | None,
    config_path: Path | None,
):
    """
    Random-graph laboratory for the strong 4-core circumference proxy:
    Monte Carlo experiments, resampling audits and exact cross-checks.
    """
    configure_logging(settings.logs_directory, settings.log_level)
    ctx.ensure_object(dict)
    ctx.obj[ContextKeys.seed] = seed
    ctx.obj[ContextKeys.threads] = threads
    ctx.obj[ContextKeys.output] = output
    ctx.obj[ContextKeys.config] = config_path


@cli.group()
def config():
    """Experiment configuration files."""


for command in (
    experiments.clt,
    experiments.variance_scan,
    experiments.threshold_scan,
    experiments.poisson_regime,
    experiments.tail_bound,
    experiments.census,
    audits.resample_audit_command,
    audits.theorem11,
    audits.balls_bins,
    audits.reveal,
    graphs.phi,
    graphs.colour,
):
    cli.add_command(command)

config.add_command(configuration.show)
config.add_command(configuration.save)
config.add_command(configuration.settings_info)


def main() -> None:
    """
    Console entry point: 0 when every acceptance check passed, 2 when one failed, 1 on usage or I/O errors
    """
    try:
        code = cli.main(standalone_mode=False)
    except click.ClickException as ex:
        ex.show()
        code = ExitCode.usage_error
    except click.Abort:
        click.secho("Aborted", fg=ClickColors.red, err=True)
        code = ExitCode.usage_error
    except ExperimentAbortedError as ex:
        logger.error(f"Experiment aborted: {ex.aborted} of {ex.trials} trials")
        click.secho(str(ex), fg=ClickColors.red, err=True)
        code = ExitCode.acceptance_failure
    except (CustomException, OSError) as ex:
        logger.exception("Experiment failed")
        click.secho(str(ex), fg=ClickColors.red, err=True)
        code = ExitCode.usage_error

    sys.exit(int(code) if isinstance(code, int) else ExitCode.success)


if __name__ == "__main__":
    main()
