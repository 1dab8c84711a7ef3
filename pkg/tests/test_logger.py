import json
import logging
import sys

from lib.logger import JSONFormatter

FMT_KEYS = {"level": "levelname", "message": "message", "timestamp": "timestamp", "logger": "name"}


def make_record(message: str, exc_info=None, **extra) -> logging.LogRecord:
    record = logging.LogRecord("circum_lab.test", logging.INFO, __file__, 10, message, None, exc_info)
    record.__dict__.update(extra)

    return record


def test_record_keeps_mapped_keys_and_extras():
    line = JSONFormatter(fmt_keys=FMT_KEYS).format(make_record("Trials finished", runner="run_clt", seconds=1.5))
    entry = json.loads(line)

    assert entry["level"] == "INFO"
    assert entry["message"] == "Trials finished"
    assert entry["logger"] == "circum_lab.test"
    assert entry["runner"] == "run_clt"
    assert entry["seconds"] == 1.5
    assert "timestamp" in entry
    assert "lineno" not in entry
    assert "exc_info" not in entry
    assert "stack_info" not in entry


def test_record_without_keys_still_has_message_and_timestamp():
    entry = json.loads(JSONFormatter().format(make_record("plain")))

    assert set(entry) == {"message", "timestamp"}


def test_exception_is_formatted():
    try:
        raise ValueError("bad trial")
    except ValueError:
        record = make_record("Experiment failed", exc_info=sys.exc_info())

    entry = json.loads(JSONFormatter(fmt_keys=FMT_KEYS).format(record))

    assert "ValueError: bad trial" in entry["exc_info"]
