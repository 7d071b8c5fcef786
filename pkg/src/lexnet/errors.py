"""Exception hierarchy. Each class maps to one CLI exit code."""


class LexnetError(Exception):
    exit_code = 3


class InputError(LexnetError):
    """Unreadable or malformed input data."""

    exit_code = 1


class TranscriptParseError(InputError):
    def __init__(self, line_no: int, message: str, source: str = "") -> None:
        where = f"{source}:{line_no}" if source else f"line {line_no}"
        super().__init__(f"{where}: {message}")
        self.line_no = line_no
        self.source = source


class ConfigError(LexnetError):
    exit_code = 2


class InvariantError(LexnetError):
    """An internal consistency check failed."""

    exit_code = 3
