import json
import logging
import logging.config
from datetime import datetime, timezone
from pathlib import Path

# attributes every LogRecord carries, anything else came in through extra=
LOG_RECORD_BUILTIN_ATTRS = set(logging.makeLogRecord({}).__dict__) | {"message", "asctime"}

LOG_FILE_PLACEHOLDER = "LOG_FILE_DIRECTORY"
CONFIG_FILE_PATH = Path(__file__).parent / "logging_config.json"


class JSONFormatter(logging.Formatter):
    """
    One JSON object per record.
    :param fmt_keys: Output key -> LogRecord attribute, "message" and "timestamp" are filled in by the formatter
    """

    def __init__(self, *, fmt_keys: dict[str, str] | None = None):
        super().__init__()
        self.fmt_keys = fmt_keys or {}

    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(self._prepare_log_dict(record), default=str)

    def _prepare_log_dict(self, record: logging.LogRecord) -> dict[str, object]:
        fields = {
            "message": record.getMessage(),
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
        }
        message = {
            key: fields.get(attribute, getattr(record, attribute, None)) for key, attribute in self.fmt_keys.items()
        }
        message.setdefault("message", fields["message"])
        message.setdefault("timestamp", fields["timestamp"])

        if record.exc_info:
            message["exc_info"] = self.formatException(record.exc_info)

        # extra={"runner": ..., "seconds": ...} fields end up here
        message.update({key: val for key, val in record.__dict__.items() if key not in LOG_RECORD_BUILTIN_ATTRS})

        return message


def configure_logging(logs_directory: Path, level: str | None = None) -> None:
    """
    Sets up logging from logging_config.json with the JSON-lines file placed in logs_directory.
    can be used like below

        >>> logger = logging.getLogger(__name__)
        >>> logger.info("Trials finished", extra={"trials": 100})
    :param logs_directory: Directory for the rotating log.jsonl file, created if missing.
    :param level: Optional override for the stderr handler level (e.g. "DEBUG").
    :return: None
    """
    logs_directory.mkdir(parents=True, exist_ok=True)
    log_file_path = str(logs_directory / "log.jsonl")

    with open(CONFIG_FILE_PATH) as config_file:
        config = json.load(config_file)

    for handler in config["handlers"].values():
        if handler.get("filename") == LOG_FILE_PLACEHOLDER:
            handler["filename"] = log_file_path

    if level is not None:
        config["handlers"]["stderr"]["level"] = level.upper()

    logging.config.dictConfig(config)
