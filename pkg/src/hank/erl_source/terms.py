"""Reader for Erlang term files such as ``.app.src`` and ``sys.config``.

Terms map onto Python values: atoms become :class:`Atom`, tuples stay
tuples, lists stay lists, maps become dicts, strings become ``str`` and
binary literals become :class:`Binary`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

from ..errors import LexError, TermError
from .lexer import atom_value, string_value, tokenize, unescape
from .tokens import Token, TokenKind, significant


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


class Binary(str):
    """A ``<<"...">>`` literal; compares equal to its text."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"Binary({str.__repr__(self)})"


TermValue = Union[Atom, int, float, str, Binary, list, tuple, dict]


def read_terms(text: str | bytes) -> list[TermValue]:
    try:
        tokens = significant(tokenize(text))
    except LexError as exc:
        raise TermError(exc.reason, exc.line, exc.column) from None
    terms: list[TermValue] = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok.kind is TokenKind.DOT:
            terms.append(_Parser(tokens[start:i], tok).parse())
            start = i + 1
    if start < len(tokens):
        last = tokens[-1]
        raise TermError("term is missing its terminating dot", last.line, last.column)
    return terms


def parse_term_tokens(tokens: list[Token]) -> TermValue:
    """Parse exactly one term from significant tokens (no trailing dot)."""
    return _Parser([t for t in tokens if t.significant], None).parse()


class _Parser:
    def __init__(self, tokens: list[Token], end: Token | None) -> None:
        self.tokens = tokens
        self.pos = 0
        self.end = end

    def error(self, message: str) -> TermError:
        tok = self.tokens[self.pos] if self.pos < len(self.tokens) else self.end
        if tok is None and self.tokens:
            tok = self.tokens[-1]
        line, column = (tok.line, tok.column) if tok else (0, 0)
        return TermError(message, line, column)

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of term")
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.take()
        if tok.kind not in (TokenKind.PUNCTUATION, TokenKind.KEYWORD) or tok.text != text:
            self.pos -= 1
            raise self.error(f"expected {text!r}, found {tok.text!r}")

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is TokenKind.PUNCTUATION and tok.text == text

    def parse(self) -> TermValue:
        if not self.tokens:
            raise self.error("empty term")
        value = self.term()
        if self.pos != len(self.tokens):
            raise self.error(f"unexpected {self.tokens[self.pos].text!r} after term")
        return value

    def term(self) -> TermValue:
        tok = self.take()
        kind = tok.kind
        if kind is TokenKind.ATOM:
            return Atom(atom_value(tok.text))
        if kind is TokenKind.INTEGER:
            return _integer(tok.text)
        if kind is TokenKind.FLOAT:
            return float(tok.text.replace("_", ""))
        if kind is TokenKind.CHAR:
            return _char(tok.text)
        if kind is TokenKind.STRING:
            parts = [string_value(tok.text)]
            while (nxt := self.peek()) is not None and nxt.kind is TokenKind.STRING:
                parts.append(string_value(self.take().text))
            return "".join(parts)
        if kind is TokenKind.PUNCTUATION:
            text = tok.text
            if text in ("-", "+"):
                nxt = self.peek()
                if nxt is not None and nxt.kind in (TokenKind.INTEGER, TokenKind.FLOAT, TokenKind.CHAR):
                    value = self.term()
                    return -value if text == "-" else value
            elif text == "{":
                return tuple(self.sequence("}"))
            elif text == "[":
                return self.list_rest()
            elif text == "<<":
                return self.binary()
            elif text == "#" and self.at("{"):
                self.take()
                return self.map_rest()
        self.pos -= 1
        raise self.error(f"unexpected {tok.text!r} in term")

    def sequence(self, closer: str) -> list[TermValue]:
        items: list[TermValue] = []
        if self.at(closer):
            self.take()
            return items
        while True:
            items.append(self.term())
            if self.at(","):
                self.take()
                continue
            self.expect(closer)
            return items

    def list_rest(self) -> list[TermValue]:
        items: list[TermValue] = []
        if self.at("]"):
            self.take()
            return items
        while True:
            items.append(self.term())
            if self.at(","):
                self.take()
            elif self.at("|"):
                self.take()
                tail = self.term()
                if not isinstance(tail, list):
                    raise self.error("improper list")
                self.expect("]")
                return items + tail
            else:
                self.expect("]")
                return items

    def map_rest(self) -> dict:
        result: dict = {}
        if self.at("}"):
            self.take()
            return result
        while True:
            key = self.term()
            self.expect("=>")
            try:
                result[key] = self.term()
            except TypeError:
                raise self.error("unhashable map key") from None
            if self.at(","):
                self.take()
                continue
            self.expect("}")
            return result

    def binary(self) -> Binary:
        chunks: list[str] = []
        if self.at(">>"):
            self.take()
            return Binary("")
        while True:
            value = self.term()
            if isinstance(value, str):
                chunks.append(value)
            elif isinstance(value, int) and 0 <= value <= 255:
                chunks.append(chr(value))
            else:
                raise self.error("unsupported binary segment")
            if self.at(":"):
                self.take()
                self.term()
            if self.at("/"):
                self.take()
                self.take()
                while self.at("-"):
                    self.take()
                    self.take()
            if self.at(","):
                self.take()
                continue
            self.expect(">>")
            return Binary("".join(chunks))


def _integer(text: str) -> int:
    text = text.replace("_", "")
    if "#" in text:
        base, digits = text.split("#", 1)
        try:
            return int(digits, int(base))
        except ValueError:
            raise TermError(f"bad based integer {text!r}") from None
    return int(text)


def _char(text: str) -> int:
    body = text[1:]
    if body.startswith("\\"):
        value = unescape(body)
        return ord(value[0]) if value else 0
    return ord(body[0]) if body else 0


def to_text(value: Any) -> str:
    """Render a term back in Erlang-like notation, for messages."""
    if isinstance(value, Atom):
        return value.name
    if isinstance(value, Binary):
        return f'<<"{value}">>'
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, tuple):
        return "{" + ", ".join(to_text(v) for v in value) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(to_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "#{" + ", ".join(f"{to_text(k)} => {to_text(v)}" for k, v in value.items()) + "}"
    return repr(value)
