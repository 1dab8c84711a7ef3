from enum import IntEnum, StrEnum


class ContextKeys(StrEnum):
    config = "config"
    output = "output"
    threads = "threads"
    seed = "seed"


class ClickColors(StrEnum):
    red = "red"
    green = "green"
    yellow = "yellow"
    blue = "blue"
    cyan = "cyan"
    bright_black = "bright_black"


class ExitCode(IntEnum):
    success = 0
    usage_error = 1
    acceptance_failure = 2
