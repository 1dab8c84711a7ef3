import logging
import tomllib
from pathlib import Path
from typing import Any

from lib.exceptions import RecordFormatError
from lib.schemas.experiment import ExperimentConfig
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

PROJECT_DIR = Path(__file__).parent.parent

with open(PROJECT_DIR / "pyproject.toml", "rb") as f:
    PYPROJECT_CONTENT = tomllib.load(f)["tool"]["poetry"]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="CIRCUMLAB_",
        env_ignore_empty=True,
        extra="ignore",
    )

    package_name: str = PYPROJECT_CONTENT["name"]
    package_version: str = PYPROJECT_CONTENT["version"]
    package_description: str = PYPROJECT_CONTENT["description"]

    default_seed: int = 0
    default_k: int = 6
    size_cap: int = 64
    cycle_budget: int = 10**8
    threads: int = 1
    output_directory: Path = Path.cwd() / "results"
    logs_directory: Path = Path.home() / ".local" / "state" / "circum_lab" / "logs"
    log_level: str | None = None


def _format_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(str(item) for item in value)

    return str(value)


def save_config(config: ExperimentConfig, config_path: Path) -> None:
    """
    Saves an experiment configuration in the key=value format read by load_config.
    Unset optional fields are omitted.
    :param config: Experiment configuration to save
    :param config_path: Destination file
    """
    config_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}={_format_value(value)}" for key, value in config.model_dump(exclude_none=True).items()]
    config_path.write_text("\n".join(lines) + "\n")


def read_config_pairs(config_path: Path) -> dict[str, str]:
    """
    Reads raw key=value pairs. Blank lines and lines starting with # are skipped.
    :param config_path: The path to the config file
    :return: Mapping of key to raw string value
    :raise RecordFormatError: If the file is missing or a line has no '='
    """
    if not config_path.is_file():
        raise RecordFormatError("The configuration file path is not a file", path=str(config_path))

    pairs: dict[str, str] = {}

    for line_number, raw_line in enumerate(config_path.read_text().splitlines(), start=1):
        line = raw_line.strip()

        if not line or line.startswith("#"):
            continue

        if "=" not in line:
            raise RecordFormatError(f"Expected key=value, got {line!r}", path=str(config_path), line=line_number)

        key, value = line.split("=", maxsplit=1)
        pairs[key.strip().replace("-", "_")] = value.strip()

    return pairs


def settings_defaults() -> dict[str, Any]:
    return {
        "seed": settings.default_seed,
        "k": settings.default_k,
        "size_cap": settings.size_cap,
        "budget": settings.cycle_budget,
        "threads": settings.threads,
    }


def load_config(config_path: Path | None, overrides: dict[str, Any] | None = None) -> ExperimentConfig:
    """
    Builds an experiment configuration from Settings defaults, an optional config file and overrides.
    Command-line flags override file values, which override Settings defaults.
    :param config_path: The path to the key=value config file, None for defaults and overrides only
    :param overrides: Values taking precedence over the file, None values are ignored
    :return: Validated experiment configuration
    :raise RecordFormatError: If the file cannot be parsed or the merged values fail validation
    """
    data = settings_defaults()

    if config_path is not None:
        data.update(read_config_pairs(config_path))

    data.update({key: value for key, value in (overrides or {}).items() if value is not None})

    try:
        return ExperimentConfig.model_validate(data, strict=False)
    except ValidationError as ex:
        raise RecordFormatError(
            "Invalid experiment configuration", path=None if config_path is None else str(config_path), exception=ex
        )


settings = Settings()
