import logging
import sys
from pathlib import Path
from typing import Any, NoReturn

import click
from core.config import load_config
from core.schema import ClickColors, ContextKeys, ExitCode
from lib.exceptions import RecordFormatError
from lib.graph.core import Graph, read_edge_list, sample_gnp
from lib.schemas.experiment import ExperimentConfig, ExperimentKind
from lib.schemas.graph import GnpParams
from lib.utils.files import write_json
from pydantic import BaseModel

logger = logging.getLogger(__name__)


def fail(message: str, code: ExitCode = ExitCode.usage_error) -> NoReturn:
    """
    Prints the message in red and exits with the given code.
    :param message: Message shown to the user
    :param code: Process exit code
    :raises SystemExit: Always
    """
    click.secho(message, fg=ClickColors.red, err=True)
    sys.exit(code)


def build_config(click_context: click.Context, experiment: ExperimentKind, **options: Any) -> ExperimentConfig:
    """
    Merges Settings defaults, the --config file, the global flags and the subcommand options, in increasing priority.
    :param click_context: The Click context holding the global flags
    :param experiment: Experiment the configuration is for
    :param options: Subcommand options, None meaning not given
    :return: Validated ExperimentConfig
    :raises SystemExit: With the usage error code if the merged values are invalid
    """
    overrides = {
        "seed": click_context.obj.get(ContextKeys.seed),
        "threads": click_context.obj.get(ContextKeys.threads),
        "output": click_context.obj.get(ContextKeys.output),
        **options,
        "experiment": experiment,
    }

    try:
        return load_config(click_context.obj.get(ContextKeys.config), overrides)
    except RecordFormatError as ex:
        fail(str(ex))


def load_graph(graph_path: Path | None, n: int, c: float, seed: int) -> Graph:
    """
    Reads an edge-list file when given, otherwise samples G(n, c/n) from the seed
    """
    if graph_path is not None:
        return read_edge_list(graph_path)

    return sample_gnp(GnpParams(n=n, c=c, seed=seed))


def emit_report(report: BaseModel, name: str, output: Path | None) -> None:
    """
    Prints the report as JSON on stdout and, when an output directory is set, writes it to <output>/<name>.json
    """
    click.echo(report.model_dump_json(indent=2))

    if output is not None:
        write_json(report, output / f"{name}.json")
        logger.info(f"Wrote {output / f'{name}.json'}")


def outcome(passed: bool | None, label: str) -> ExitCode:
    """
    Reports the acceptance outcome and maps it to the exit code, None meaning there was nothing to accept
    """
    if passed is False:
        click.secho(f"{label}: acceptance check failed", fg=ClickColors.red, err=True)
        return ExitCode.acceptance_failure

    if passed:
        click.secho(f"{label}: passed", fg=ClickColors.green, err=True)

    return ExitCode.success
