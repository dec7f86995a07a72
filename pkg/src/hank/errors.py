"""Exception hierarchy shared across the analyzer."""

from __future__ import annotations


class HankError(Exception):
    """Base class for every error the CLI maps to exit status 2."""


class LexError(HankError):
    """Unterminated string, sigil or quoted atom at end of input.

    ``tokens`` still holds a lossless stream: the unterminated literal is the
    last token and runs to the end of the text.
    """

    def __init__(self, message: str, file_id: str, line: int, column: int, tokens=()) -> None:
        super().__init__(f"{file_id}:{line}:{column}: {message}")
        self.reason = message
        self.file_id = file_id
        self.line = line
        self.column = column
        self.tokens = list(tokens)


class TermError(HankError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.reason = message
        self.line = line
        self.column = column


class ConfigError(HankError):
    pass


class HankIOError(HankError):
    pass


class RuleCrash(HankError):
    def __init__(self, rule: str, cause: BaseException) -> None:
        super().__init__(f"rule {rule} crashed: {cause!r}")
        self.rule = rule
        self.cause = cause
