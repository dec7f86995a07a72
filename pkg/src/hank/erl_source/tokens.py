"""Token kinds and the token record produced by the lexer."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    ATOM = "atom"
    VARIABLE = "variable"
    INTEGER = "integer"
    FLOAT = "float"
    STRING = "string"
    CHAR = "char"
    MACRO_MARKER = "macro_marker"
    PUNCTUATION = "punctuation"
    KEYWORD = "keyword"
    DOT = "dot_terminator"
    COMMENT = "comment"
    WHITESPACE = "whitespace"


TRIVIA = frozenset({TokenKind.COMMENT, TokenKind.WHITESPACE})

# `maybe` and `else` are deliberately absent: older code uses them as plain
# atoms, and an atom lost to keyword classification could hide a usage.
KEYWORDS = frozenset(
    """after and andalso band begin bnot bor bsl bsr bxor case catch cond div
    end fun if let not of or orelse receive rem try when xor""".split()
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    @property
    def significant(self) -> bool:
        return self.kind not in TRIVIA

    def is_punct(self, text: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.text == text

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.line}:{self.column})"


def significant(tokens) -> list[Token]:
    return [t for t in tokens if t.kind not in TRIVIA]
