"""Split a token stream into top-level, dot-terminated forms."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .lexer import atom_value
from .tokens import Token, TokenKind

OPENERS = {"(": ")", "[": "]", "{": "}", "<<": ">>"}
CLOSERS = frozenset(OPENERS.values())


class FormKind(str, Enum):
    ATTRIBUTE = "attribute"
    FUNCTION = "function"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class Form:
    kind: FormKind
    name: str | None
    arity: int | None
    tokens: tuple[Token, ...]
    line: int

    @property
    def significant(self) -> list[Token]:
        return [t for t in self.tokens if t.significant]


def _ends_line(tokens: list[Token], i: int) -> bool:
    """True when the token after position ``i`` starts a new line (or there is none)."""
    if i + 1 >= len(tokens):
        return True
    nxt = tokens[i + 1]
    return nxt.kind is TokenKind.COMMENT or (
        nxt.kind is TokenKind.WHITESPACE and "\n" in nxt.text
    )


def split_forms(tokens: list[Token]) -> list[Form]:
    forms: list[Form] = []
    start: int | None = None
    depth = 0
    for i, tok in enumerate(tokens):
        if not tok.significant:
            continue
        if start is None:
            start = i
        if tok.kind is TokenKind.PUNCTUATION:
            if tok.text in OPENERS:
                depth += 1
            elif tok.text in CLOSERS:
                depth = max(0, depth - 1)
        elif tok.kind is TokenKind.DOT and (depth == 0 or _ends_line(tokens, i)):
            # A dot at the end of a line closes the form even with brackets
            # left open, so one malformed form cannot swallow the rest.
            forms.append(make_form(tokens[start:i + 1]))
            start, depth = None, 0
    if start is not None:
        tail = tokens[start:]
        while tail and not tail[-1].significant:
            tail = tail[:-1]
        forms.append(Form(FormKind.OTHER, None, None, tuple(tail), tail[0].line))
    return forms


def count_args(sig: list[Token], open_index: int) -> tuple[int, int]:
    """Count comma-separated groups inside the bracket at ``open_index``.

    Only bracket nesting is considered. Returns ``(count, close_index)``;
    ``close_index`` is ``len(sig)`` when the bracket never closes.
    """
    depth = 0
    groups = 0
    seen = False
    for j in range(open_index + 1, len(sig)):
        tok = sig[j]
        if tok.kind is TokenKind.PUNCTUATION:
            if tok.text in OPENERS:
                depth += 1
            elif tok.text in CLOSERS:
                if depth == 0:
                    return (groups + 1 if seen else 0), j
                depth -= 1
            elif tok.text == "," and depth == 0:
                groups += 1
                continue
        if tok.kind is TokenKind.DOT:
            break
        seen = True
    return (groups + 1 if seen else 0), len(sig)


def make_form(tokens: list[Token]) -> Form:
    sig = [t for t in tokens if t.significant]
    first = sig[0]
    if (
        first.is_punct("-")
        and len(sig) > 1
        and sig[1].kind in (TokenKind.ATOM, TokenKind.KEYWORD)
    ):
        return Form(FormKind.ATTRIBUTE, atom_value(sig[1].text), None, tuple(tokens), first.line)
    if first.kind is TokenKind.ATOM and len(sig) > 1 and sig[1].is_punct("("):
        arity, _ = count_args(sig, 1)
        return Form(FormKind.FUNCTION, atom_value(first.text), arity, tuple(tokens), first.line)
    return Form(FormKind.OTHER, None, None, tuple(tokens), first.line)
