"""Lossless tokenizer for un-preprocessed Erlang source.

Every byte of the input ends up in exactly one token, comments and
whitespace included, so ``"".join(t.text for t in tokenize(src)) == src``.
Anything the scanner does not recognise becomes a one-character
punctuation token instead of an error.
"""

from __future__ import annotations

import re

from ..errors import LexError
from .tokens import KEYWORDS, Token, TokenKind

_WS = re.compile(r"[\x00-\x20\x80-\xa0]+")
_COMMENT = re.compile(r"%[^\n]*")
_NAME_TAIL = r"[A-Za-z0-9_@\xc0-\xd6\xd8-\xf6\xf8-\xff]*"
_ATOM = re.compile(r"[a-z\xdf-\xf6\xf8-\xff]" + _NAME_TAIL)
_VAR = re.compile(r"[A-Z_\xc0-\xd6\xd8-\xde]" + _NAME_TAIL)
_DIGITS = r"[0-9]+(?:_[0-9]+)*"
_BASED = re.compile(_DIGITS + r"#[0-9A-Za-z]+(?:_[0-9A-Za-z]+)*")
_FLOAT = re.compile(_DIGITS + r"\." + _DIGITS + r"(?:[eE][+-]?" + _DIGITS + ")?")
_INT = re.compile(_DIGITS)
_CHAR = re.compile(
    r"\$(?:\\(?:x\{[0-9A-Fa-f]*\}|x[0-9A-Fa-f]{2}|[0-7]{1,3}|\^.|.)|.)", re.S
)
_QUOTED = {
    "'": re.compile(r"'[^'\\]*(?:\\.[^'\\]*)*'", re.S),
    '"': re.compile(r'"[^"\\]*(?:\\.[^"\\]*)*"', re.S),
}
_TRIPLE_OPEN = re.compile(r'("{3,})[ \t]*\r?\n')
_SIGIL_PREFIX = re.compile(r"~([A-Za-z][A-Za-z0-9_]*)?")
_SIGIL_SUFFIX = re.compile(r"[A-Za-z0-9_]*")
_SIGIL_PAIRS = {"(": ")", "[": "]", "{": "}", "<": ">"}
_SIGIL_SAME = set("/|'\"`#")

# Longest first; mirrors erl_scan, including its `=<<` -> `=<`, `<` quirk.
_OPERATORS = (
    "=:=", "=/=", "...", "<:-", "<:=",
    "==", "/=", "=<", ">=", "->", "<-", "<=", "=>", ":=", "::",
    "++", "--", "||", "<<", ">>", "..", "&&", "?=", "??",
)
_OPERATOR_RE = re.compile("|".join(re.escape(op) for op in _OPERATORS))
_WS_CHARS = frozenset(chr(c) for c in [*range(0x21), *range(0x80, 0xA1)])


def decode_source(data: bytes) -> tuple[str, str]:
    """Decode file bytes losslessly, honouring an Erlang latin-1 coding comment.

    Returns the text and the codec to re-encode it with (always combined with
    ``errors="surrogateescape"``).
    """
    head = data[:512].split(b"\n", 2)[:2]
    for line in head:
        if re.search(rb"%.*coding\s*[:=]\s*latin-?1", line, re.I):
            return data.decode("latin-1"), "latin-1"
    return data.decode("utf-8", errors="surrogateescape"), "utf-8"


def tokenize(source: str | bytes, file_id: str = "<string>") -> list[Token]:
    if isinstance(source, bytes):
        source, _ = decode_source(source)
    return _Lexer(source, file_id).run()


class _Lexer:
    def __init__(self, text: str, file_id: str) -> None:
        self.text = text
        self.file_id = file_id
        self.pos = 0
        self.line = 1
        self.col = 1
        self.out: list[Token] = []

    def emit(self, kind: TokenKind, end: int) -> None:
        chunk = self.text[self.pos:end]
        self.out.append(Token(kind, chunk, self.line, self.col))
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = len(chunk) - chunk.rfind("\n")
        else:
            self.col += len(chunk)
        self.pos = end

    def fail(self, kind: TokenKind, what: str) -> None:
        line, col = self.line, self.col
        self.emit(kind, len(self.text))
        raise LexError(f"unterminated {what}", self.file_id, line, col, self.out)

    def run(self) -> list[Token]:
        text = self.text
        n = len(text)
        while self.pos < n:
            pos = self.pos
            c = text[pos]
            if c in _WS_CHARS:
                self.emit(TokenKind.WHITESPACE, _WS.match(text, pos).end())
            elif c == "%":
                self.emit(TokenKind.COMMENT, _COMMENT.match(text, pos).end())
            elif m := _ATOM.match(text, pos):
                kind = TokenKind.KEYWORD if m.group() in KEYWORDS else TokenKind.ATOM
                self.emit(kind, m.end())
            elif m := _VAR.match(text, pos):
                self.emit(TokenKind.VARIABLE, m.end())
            elif "0" <= c <= "9":
                self.number(pos)
            elif c == "'":
                self.quoted(pos, TokenKind.ATOM, "quoted atom")
            elif c == '"':
                self.string(pos)
            elif c == "$":
                m = _CHAR.match(text, pos)
                self.emit(TokenKind.CHAR if m else TokenKind.PUNCTUATION,
                          m.end() if m else pos + 1)
            elif c == "~":
                self.sigil(pos)
            elif c == ".":
                self.dot(pos)
            elif m := _OPERATOR_RE.match(text, pos):
                self.emit(TokenKind.PUNCTUATION, m.end())
            elif c == "?":
                self.emit(TokenKind.MACRO_MARKER, pos + 1)
            else:
                self.emit(TokenKind.PUNCTUATION, pos + 1)
        return self.out

    def number(self, pos: int) -> None:
        for regex, kind in ((_BASED, TokenKind.INTEGER), (_FLOAT, TokenKind.FLOAT)):
            m = regex.match(self.text, pos)
            if m:
                self.emit(kind, m.end())
                return
        self.emit(TokenKind.INTEGER, _INT.match(self.text, pos).end())

    def quoted(self, pos: int, kind: TokenKind, what: str) -> None:
        m = _QUOTED[self.text[pos]].match(self.text, pos)
        if m is None:
            self.fail(kind, what)
        self.emit(kind, m.end())

    def string(self, pos: int) -> None:
        end = self.triple_end(pos)
        if end is not None:
            self.emit(TokenKind.STRING, end)
        else:
            self.quoted(pos, TokenKind.STRING, "string")

    def triple_end(self, pos: int) -> int | None:
        m = _TRIPLE_OPEN.match(self.text, pos)
        if m is None:
            return None
        delim = m.group(1)
        close = re.compile(r"\n[ \t]*" + delim + '(?!")').search(self.text, m.end() - 1)
        if close is None:
            self.fail(TokenKind.STRING, "triple-quoted string")
        return close.end()

    def sigil(self, pos: int) -> None:
        text = self.text
        start = _SIGIL_PREFIX.match(text, pos).end()
        if start >= len(text):
            self.emit(TokenKind.PUNCTUATION, pos + 1)
            return
        opener = text[start]
        verbatim = start > pos + 1 and text[pos + 1].isupper()
        if opener == '"':
            end = self.triple_end(start)
            if end is None:
                end = self.delimited(start, '"', verbatim)
        elif opener in _SIGIL_PAIRS:
            end = self.delimited(start, _SIGIL_PAIRS[opener], verbatim)
        elif opener in _SIGIL_SAME:
            end = self.delimited(start, opener, verbatim)
        else:
            self.emit(TokenKind.PUNCTUATION, pos + 1)
            return
        self.emit(TokenKind.STRING, _SIGIL_SUFFIX.match(text, end).end())

    def delimited(self, start: int, closer: str, verbatim: bool) -> int:
        text = self.text
        i = start + 1
        while i < len(text):
            ch = text[i]
            if ch == "\\" and not verbatim:
                i += 2
                continue
            if ch == closer:
                return i + 1
            i += 1
        self.fail(TokenKind.STRING, "sigil string")
        raise AssertionError("unreachable")

    def dot(self, pos: int) -> None:
        text = self.text
        if text.startswith("..", pos):
            self.emit(TokenKind.PUNCTUATION, pos + (3 if text.startswith("...", pos) else 2))
            return
        nxt = text[pos + 1] if pos + 1 < len(text) else ""
        if nxt == "" or nxt == "%" or nxt in _WS_CHARS:
            self.emit(TokenKind.DOT, pos + 1)
        else:
            self.emit(TokenKind.PUNCTUATION, pos + 1)


_ESCAPE = re.compile(
    r"\\(?:x\{([0-9A-Fa-f]*)\}|x([0-9A-Fa-f]{2})|([0-7]{1,3})|\^(.)|(.))", re.S
)
_SIMPLE_ESCAPES = {
    "b": "\b", "d": "\x7f", "e": "\x1b", "f": "\f", "n": "\n",
    "r": "\r", "s": " ", "t": "\t", "v": "\v",
}


def _codepoint(value: int) -> str:
    return chr(value) if value <= 0x10FFFF else "\ufffd"


def _replace_escape(m: re.Match) -> str:
    braced, hex2, octal, ctrl, other = m.groups()
    if braced is not None:
        return _codepoint(int(braced, 16)) if braced else ""
    if hex2 is not None:
        return chr(int(hex2, 16))
    if octal is not None:
        return chr(int(octal, 8))
    if ctrl is not None:
        return chr(ord(ctrl) & 0x1F)
    return _SIMPLE_ESCAPES.get(other, other)


def unescape(body: str) -> str:
    return _ESCAPE.sub(_replace_escape, body) if "\\" in body else body


def atom_value(text: str) -> str:
    """Name of an atom token, with quotes and escapes resolved."""
    if not text.startswith("'"):
        return text
    body = text[1:-1] if len(text) > 1 and text.endswith("'") else text[1:]
    return unescape(body)


def string_value(text: str) -> str:
    """Contents of a string token (plain, triple-quoted or sigil)."""
    verbatim = False
    if text.startswith("~"):
        end = _SIGIL_PREFIX.match(text).end()
        verbatim = end > 1 and text[1].isupper()
        text = text[end:]
        closer = _SIGIL_PAIRS.get(text[:1], text[:1])
        if not _TRIPLE_OPEN.match(text):
            text = text[: text.rfind(closer) + 1]
    m = _TRIPLE_OPEN.match(text)
    if m:
        lines = text[m.end():].split("\n")
        indent = len(lines[-1]) - len(lines[-1].lstrip(" \t"))
        return "\n".join(line[indent:] for line in lines[:-1])
    body = text[1:-1] if len(text) >= 2 else ""
    return body if verbatim else unescape(body)
