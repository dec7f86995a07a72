"""Tolerant, lightweight syntax trees for Erlang forms.

The parser classifies only the constructs the rules look at (macro
definitions and uses, records, includes, behaviours, callbacks, ``-hank``
attributes, function clauses, calls) and folds everything else into
``other`` nodes. Every atom, variable and macro use of a form is surfaced
somewhere in its tree, whatever shape the surrounding code has, because a
lost usage could turn into a false positive.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import TermError
from .forms import Form, FormKind
from .lexer import atom_value, string_value
from .terms import parse_term_tokens
from .tokens import Token, TokenKind


class NodeKind(str, Enum):
    ATOM = "atom"
    VARIABLE = "variable"
    UNDERSCORE = "underscore"
    MACRO_USE = "macro_use"
    DEFINE_ATTR = "define_attr"
    RECORD_ATTR = "record_attr"
    RECORD_EXPR = "record_expr"
    RECORD_ACCESS = "record_access"
    RECORD_INDEX = "record_index"
    INCLUDE_ATTR = "include_attr"
    INCLUDE_LIB_ATTR = "include_lib_attr"
    BEHAVIOR_ATTR = "behavior_attr"
    CALLBACK_ATTR = "callback_attr"
    HANK_ATTR = "hank_attr"
    FUNCTION_DEF = "function_def"
    CLAUSE = "clause"
    CALL = "call"
    FUN_REF = "fun_ref"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class SynNode:
    """One node of a form's tree.

    ``name``/``arity`` hold the identifying name and arity where the kind has
    one (macro, record, function, call, callback, behaviour, attribute).
    ``payload`` is kind specific:

    - atom: the raw token text (``name`` is the unquoted value)
    - record_attr: ``((field, line), ...)`` in declaration order
    - record_expr: field names referenced, ``"_"`` for the wildcard and
      ``None`` where the field is hidden behind a macro
    - record_access / record_index: the field name or ``None``
    - include_attr / include_lib_attr: the literal path, ``None`` if not literal
    - hank_attr: the parsed term, or the ``TermError`` it failed with
    - function_def: ``True`` when every clause head was recognised
    - clause: the argument pattern nodes
    - call / fun_ref: the module name for remote references, else ``None``
    - other: macro names tested by ``-ifdef``/``-ifndef``/``defined()``
    """

    kind: NodeKind
    line: int
    children: tuple[SynNode, ...] = ()
    name: str | None = None
    arity: int | None = None
    payload: Any = None


ATTRIBUTE_KINDS = {
    "define": NodeKind.DEFINE_ATTR,
    "record": NodeKind.RECORD_ATTR,
    "include": NodeKind.INCLUDE_ATTR,
    "include_lib": NodeKind.INCLUDE_LIB_ATTR,
    "behaviour": NodeKind.BEHAVIOR_ATTR,
    "behavior": NodeKind.BEHAVIOR_ATTR,
    "callback": NodeKind.CALLBACK_ATTR,
    "hank": NodeKind.HANK_ATTR,
}

_BRACKETS = {"(": ")", "[": "]", "{": "}", "<<": ">>"}
_BRACKET_CLOSERS = frozenset(_BRACKETS.values())
_BLOCK_KEYWORDS = frozenset({"begin", "case", "if", "receive", "try", "cond"})
_EXPR_END_PUNCT = frozenset({")", "}", "]", ">>"})
_EXPR_END_KINDS = frozenset(
    {TokenKind.VARIABLE, TokenKind.ATOM, TokenKind.STRING, TokenKind.INTEGER,
     TokenKind.FLOAT, TokenKind.CHAR}
)
_MAYBE_FOLLOWERS = frozenset(
    {TokenKind.ATOM, TokenKind.VARIABLE, TokenKind.INTEGER, TokenKind.FLOAT,
     TokenKind.STRING, TokenKind.CHAR, TokenKind.MACRO_MARKER}
)
_MAYBE_FOLLOWER_TEXT = frozenset(
    {"[", "{", "<<", "#", "begin", "case", "if", "fun", "receive", "try", "catch", "not", "bnot"}
)
_NAME_KINDS = (TokenKind.ATOM, TokenKind.VARIABLE)


def _name_of(tok: Token) -> str:
    return atom_value(tok.text) if tok.kind is TokenKind.ATOM else tok.text


def _bracket_table(sig: list[Token]) -> dict[int, int]:
    table: dict[int, int] = {}
    stack: list[int] = []
    for i, tok in enumerate(sig):
        if tok.kind is not TokenKind.PUNCTUATION:
            continue
        if tok.text in _BRACKETS:
            stack.append(i)
        elif tok.text in _BRACKET_CLOSERS:
            for depth in range(len(stack) - 1, -1, -1):
                if _BRACKETS[sig[stack[depth]].text] == tok.text:
                    table[stack[depth]] = i
                    del stack[depth:]
                    break
    return table


class _Walker:
    """Cursor-free recursive walker over the significant tokens of one form."""

    def __init__(self, sig: list[Token]) -> None:
        self.sig = sig
        self.brackets = _bracket_table(sig)
        # opener index -> (end of inner range, index to resume at)
        self.spans: dict[int, tuple[int, int]] = {}
        self._build_spans()

    def _is_block_fun(self, i: int) -> bool:
        sig = self.sig
        j = i + 1
        if j < len(sig) and sig[j].kind is TokenKind.VARIABLE:
            j += 1
        if j >= len(sig) or not sig[j].is_punct("("):
            return False
        close = self.brackets.get(j)
        if close is None or close + 1 >= len(sig):
            return False
        after = sig[close + 1]
        return after.is_punct("->") or (after.kind is TokenKind.KEYWORD and after.text == "when")

    def _is_block_maybe(self, i: int) -> bool:
        if i + 1 >= len(self.sig):
            return False
        nxt = self.sig[i + 1]
        return nxt.kind in _MAYBE_FOLLOWERS or nxt.text in _MAYBE_FOLLOWER_TEXT

    def _opener(self, i: int, tok: Token) -> str | None:
        """Kind of opener at ``i``: a bracket text, ``"end"`` for blocks, or None."""
        if tok.kind is TokenKind.PUNCTUATION and tok.text in _BRACKETS:
            return _BRACKETS[tok.text]
        if tok.kind is TokenKind.KEYWORD:
            if tok.text in _BLOCK_KEYWORDS or (tok.text == "fun" and self._is_block_fun(i)):
                return "end"
        elif tok.kind is TokenKind.ATOM and tok.text == "maybe" and self._is_block_maybe(i):
            return "end"
        return None

    def _build_spans(self) -> None:
        sig = self.sig
        stack: list[tuple[int, str]] = []

        def close_through(depth: int, at: int, consumed: bool) -> None:
            for k in range(len(stack) - 1, depth, -1):
                self.spans[stack[k][0]] = (at, at)
            self.spans[stack[depth][0]] = (at, at + 1) if consumed else (at, at)
            del stack[depth:]

        for i, tok in enumerate(sig):
            closer = self._opener(i, tok)
            if closer is not None:
                stack.append((i, closer))
                continue
            if tok.kind is TokenKind.KEYWORD and tok.text == "end":
                want = "end"
            elif tok.kind is TokenKind.PUNCTUATION and tok.text in _BRACKET_CLOSERS:
                want = tok.text
            elif tok.kind is TokenKind.DOT:
                if stack:
                    close_through(0, i, False)
                continue
            else:
                continue
            for depth in range(len(stack) - 1, -1, -1):
                if stack[depth][1] == want:
                    close_through(depth, i, True)
                    break
        if stack:
            close_through(0, len(sig), False)

    def span(self, i: int, hi: int) -> tuple[int, int]:
        inner, resume = self.spans.get(i, (hi, hi))
        return min(inner, hi), min(resume, hi)

    def groups(self, lo: int, hi: int) -> list[tuple[int, int]]:
        """Top-level comma-separated ranges in ``[lo, hi)``."""
        out: list[tuple[int, int]] = []
        start = i = lo
        while i < hi:
            if i in self.spans:
                i = max(self.span(i, hi)[1], i + 1)
                continue
            if self.sig[i].is_punct(","):
                out.append((start, i))
                start = i + 1
            i += 1
        if start < hi or out:
            out.append((start, hi))
        return out

    def peek(self, i: int, hi: int) -> Token | None:
        return self.sig[i] if i < hi else None

    def walk(self, lo: int, hi: int) -> list[SynNode]:
        out: list[SynNode] = []
        i = lo
        sig = self.sig
        while i < hi:
            tok = sig[i]
            kind = tok.kind
            if kind is TokenKind.ATOM and i not in self.spans:
                i = self._atom(i, hi, out)
            elif kind is TokenKind.VARIABLE:
                out.append(_variable(tok))
                i += 1
            elif kind is TokenKind.MACRO_MARKER:
                i = self._macro(i, hi, out)
            elif tok.is_punct("#"):
                i = self._record(i, hi, out)
            elif kind is TokenKind.KEYWORD and tok.text == "fun" and i not in self.spans:
                i = self._fun_ref(i, hi, out)
            elif i in self.spans:
                inner, resume = self.span(i, hi)
                if kind is TokenKind.ATOM:
                    # `maybe` opening a block is still an atom token.
                    out.append(_atom(tok))
                kids = self.walk(i + 1, inner)
                if kids:
                    out.append(SynNode(NodeKind.OTHER, tok.line, tuple(kids)))
                i = max(resume, i + 1)
            else:
                i += 1
        return out

    def _call(self, lo: int, open_i: int, hi: int, name: str, module: str | None,
              heads: list[SynNode]) -> tuple[SynNode, int]:
        inner, resume = self.span(open_i, hi)
        arity = len(self.groups(open_i + 1, inner))
        kids = heads + self.walk(open_i + 1, inner)
        node = SynNode(NodeKind.CALL, self.sig[lo].line, tuple(kids), name, arity, module)
        return node, max(resume, open_i + 1)

    def _atom(self, i: int, hi: int, out: list[SynNode]) -> int:
        sig = self.sig
        tok = sig[i]
        nxt = self.peek(i + 1, hi)
        if nxt is not None and nxt.is_punct("("):
            node, i = self._call(i, i + 1, hi, atom_value(tok.text), None, [_atom(tok)])
            out.append(node)
            return i
        if (
            nxt is not None and nxt.is_punct(":")
            and i + 3 < hi
            and sig[i + 2].kind is TokenKind.ATOM
            and sig[i + 3].is_punct("(")
        ):
            fun = sig[i + 2]
            node, i = self._call(i, i + 3, hi, atom_value(fun.text), atom_value(tok.text),
                                 [_atom(tok), _atom(fun)])
            out.append(node)
            return i
        out.append(_atom(tok))
        return i + 1

    def _macro(self, i: int, hi: int, out: list[SynNode]) -> int:
        name_tok = self.peek(i + 1, hi)
        if name_tok is None or name_tok.kind not in _NAME_KINDS:
            return i + 1
        heads = [_atom(name_tok)] if name_tok.kind is TokenKind.ATOM else []
        nxt = self.peek(i + 2, hi)
        line = self.sig[i].line
        if nxt is not None and nxt.is_punct("("):
            inner, resume = self.span(i + 2, hi)
            arity = len(self.groups(i + 3, inner))
            kids = heads + self.walk(i + 3, inner)
            out.append(SynNode(NodeKind.MACRO_USE, line, tuple(kids), _name_of(name_tok), arity))
            return max(resume, i + 3)
        out.append(SynNode(NodeKind.MACRO_USE, line, tuple(heads), _name_of(name_tok)))
        return i + 2

    def _ref_name(self, j: int, hi: int) -> tuple[str | None, list[SynNode], int] | None:
        """Record or field name at ``j``: an atom, or a macro standing in for one."""
        tok = self.peek(j, hi)
        if tok is None:
            return None
        if tok.kind is TokenKind.ATOM:
            return atom_value(tok.text), [_atom(tok)], j + 1
        if tok.kind is TokenKind.MACRO_MARKER:
            nodes: list[SynNode] = []
            end = self._macro(j, min(hi, j + 2), nodes)
            if nodes:
                return None, nodes, end
        return None

    def _record(self, i: int, hi: int, out: list[SynNode]) -> int:
        sig = self.sig
        ref = self._ref_name(i + 1, hi)
        if ref is None:
            return i + 1
        name, heads, j = ref
        line = sig[i].line
        nxt = self.peek(j, hi)
        if nxt is not None and nxt.is_punct("{"):
            inner, resume = self.span(j, hi)
            fields: list[str | None] = []
            for lo, end in self.groups(j + 1, inner):
                if lo >= end:
                    continue
                first = sig[lo]
                if first.kind is TokenKind.ATOM:
                    fields.append(atom_value(first.text))
                elif first.kind is TokenKind.VARIABLE and first.text == "_":
                    fields.append("_")
                else:
                    fields.append(None)
            kids = heads + self.walk(j + 1, inner)
            out.append(SynNode(NodeKind.RECORD_EXPR, line, tuple(kids), name, None, tuple(fields)))
            return max(resume, j + 1)
        if nxt is not None and nxt.is_punct("."):
            field_ref = self._ref_name(j + 1, hi)
            if field_ref is not None:
                field, field_nodes, end = field_ref
                prev = sig[i - 1] if i > 0 else None
                is_access = prev is not None and (
                    prev.kind in _EXPR_END_KINDS
                    or (prev.kind is TokenKind.PUNCTUATION and prev.text in _EXPR_END_PUNCT)
                )
                kind = NodeKind.RECORD_ACCESS if is_access else NodeKind.RECORD_INDEX
                out.append(SynNode(kind, line, tuple(heads + field_nodes), name, None, field))
                return end
        out.extend(heads)
        return j

    def _fun_ref(self, i: int, hi: int, out: list[SynNode]) -> int:
        sig = self.sig

        def at(k: int) -> Token | None:
            return self.peek(k, hi)

        def arity_at(k: int) -> int | None:
            slash, num = at(k), at(k + 1)
            if slash is not None and slash.is_punct("/") and num is not None \
                    and num.kind is TokenKind.INTEGER and num.text.isdigit():
                return int(num.text)
            return None

        first = at(i + 1)
        line = sig[i].line
        if first is not None and first.kind is TokenKind.ATOM:
            arity = arity_at(i + 2)
            if arity is not None:
                out.append(SynNode(NodeKind.FUN_REF, line, (_atom(first),),
                                   atom_value(first.text), arity))
                return i + 4
            colon, fun = at(i + 2), at(i + 3)
            if colon is not None and colon.is_punct(":") and fun is not None \
                    and fun.kind is TokenKind.ATOM:
                arity = arity_at(i + 4)
                if arity is not None:
                    out.append(SynNode(NodeKind.FUN_REF, line, (_atom(first), _atom(fun)),
                                       atom_value(fun.text), arity, atom_value(first.text)))
                    return i + 6
        elif first is not None and first.kind is TokenKind.MACRO_MARKER:
            name_tok, colon, fun = at(i + 2), at(i + 3), at(i + 4)
            if (name_tok is not None and name_tok.kind in _NAME_KINDS
                    and colon is not None and colon.is_punct(":")
                    and fun is not None and fun.kind is TokenKind.ATOM):
                arity = arity_at(i + 5)
                if arity is not None:
                    kids: list[SynNode] = []
                    self._macro(i + 1, i + 3, kids)
                    kids.append(_atom(fun))
                    out.append(SynNode(NodeKind.FUN_REF, line, tuple(kids),
                                       atom_value(fun.text), arity, None))
                    return i + 7
        return i + 1


def _atom(tok: Token) -> SynNode:
    return SynNode(NodeKind.ATOM, tok.line, (), atom_value(tok.text), None, tok.text)


def _variable(tok: Token) -> SynNode:
    kind = NodeKind.UNDERSCORE if tok.text == "_" else NodeKind.VARIABLE
    return SynNode(kind, tok.line, (), tok.text)


def _body_end(sig: list[Token]) -> int:
    return len(sig) - 1 if sig and sig[-1].kind is TokenKind.DOT else len(sig)


def _attribute(form: Form, sig: list[Token]) -> SynNode:
    walker = _Walker(sig)
    end = _body_end(sig)
    name = form.name
    kids = tuple([_atom(sig[1])] if sig[1].kind is TokenKind.ATOM else []) + tuple(walker.walk(2, end))
    line = sig[0].line
    kind = ATTRIBUTE_KINDS.get(name)
    # Argument range of `-name(...)`, when parenthesised.
    args: tuple[int, int] | None = None
    if end > 2 and sig[2].is_punct("("):
        inner, resume = walker.span(2, end)
        if resume == end:
            args = (3, inner)

    if kind is NodeKind.DEFINE_ATTR and args:
        lo, hi = args
        if lo < hi and sig[lo].kind in _NAME_KINDS:
            macro = _name_of(sig[lo])
            arity = None
            nxt = lo + 1
            if nxt < hi and sig[nxt].is_punct("("):
                inner, resume = walker.span(nxt, hi)
                arity = len(walker.groups(nxt + 1, inner))
                nxt = resume
            if nxt >= hi or sig[nxt].is_punct(","):
                return SynNode(kind, line, kids, macro, arity)
    elif kind is NodeKind.RECORD_ATTR and args:
        lo, hi = args
        if hi - lo >= 3 and sig[lo].kind is TokenKind.ATOM and sig[lo + 1].is_punct(",") \
                and sig[lo + 2].is_punct("{"):
            inner, _ = walker.span(lo + 2, hi)
            fields = tuple(
                (atom_value(sig[g].text), sig[g].line)
                for g, g_end in walker.groups(lo + 3, inner)
                if g < g_end and sig[g].kind is TokenKind.ATOM
            )
            return SynNode(kind, line, kids, atom_value(sig[lo].text), None, fields)
    elif kind in (NodeKind.INCLUDE_ATTR, NodeKind.INCLUDE_LIB_ATTR):
        path = None
        if args and args[0] < args[1] and all(
            sig[k].kind is TokenKind.STRING for k in range(*args)
        ):
            path = "".join(string_value(sig[k].text) for k in range(*args))
        return SynNode(kind, line, kids, name, None, path)
    elif kind is NodeKind.BEHAVIOR_ATTR:
        lo, hi = args if args else (2, end)
        target = atom_value(sig[lo].text) if hi - lo == 1 and sig[lo].kind is TokenKind.ATOM else None
        return SynNode(kind, line, kids, target)
    elif kind is NodeKind.CALLBACK_ATTR:
        lo, hi = (args if args and args[0] < args[1] and sig[args[0]].kind is TokenKind.ATOM
                  and args[0] + 1 < args[1] and sig[args[0] + 1].is_punct("(") else (2, end))
        if hi - lo >= 2 and sig[lo].kind is TokenKind.ATOM and sig[lo + 1].is_punct("("):
            inner, _ = walker.span(lo + 1, hi)
            return SynNode(kind, line, kids, atom_value(sig[lo].text),
                           len(walker.groups(lo + 2, inner)))
        return SynNode(kind, line, kids)
    elif kind is NodeKind.HANK_ATTR:
        lo, hi = args if args else (2, end)
        try:
            payload: Any = parse_term_tokens(sig[lo:hi])
        except TermError as exc:
            payload = exc
        return SynNode(kind, line, kids, name, None, payload)
    elif name in ("ifdef", "ifndef", "undef") and args and args[1] - args[0] == 1 \
            and sig[args[0]].kind in _NAME_KINDS:
        return SynNode(NodeKind.OTHER, line, kids, name, None, (_name_of(sig[args[0]]),))
    elif name in ("if", "elif"):
        tested = tuple(
            _name_of(sig[k + 2])
            for k in range(2, end - 3)
            if sig[k].kind is TokenKind.ATOM and sig[k].text == "defined"
            and sig[k + 1].is_punct("(") and sig[k + 2].kind in _NAME_KINDS
            and sig[k + 3].is_punct(")")
        )
        return SynNode(NodeKind.OTHER, line, kids, name, None, tested)
    return SynNode(NodeKind.OTHER, line, kids, name)


def _function(form: Form, sig: list[Token]) -> SynNode:
    walker = _Walker(sig)
    end = _body_end(sig)
    name_tok = sig[0]
    name = atom_value(name_tok.text)
    starts = [0]
    depth = 0
    for k in range(end):
        tok = sig[k]
        if tok.kind is not TokenKind.PUNCTUATION:
            continue
        if tok.text in _BRACKETS:
            depth += 1
        elif tok.text in _BRACKET_CLOSERS:
            depth = max(0, depth - 1)
        elif (tok.text == ";" and depth == 0 and k + 2 < end
              and sig[k + 1].kind is TokenKind.ATOM and atom_value(sig[k + 1].text) == name
              and sig[k + 2].is_punct("(")):
            starts.append(k + 1)
    bounds = list(zip(starts, [s - 1 for s in starts[1:]] + [end]))

    reliable = True
    arities: set[int] = set()
    clauses: list[SynNode] = []
    for lo, hi in bounds:
        patterns: list[SynNode] = []
        if lo + 1 < hi and sig[lo + 1].is_punct("("):
            inner, resume = walker.span(lo + 1, hi)
            for g, g_end in walker.groups(lo + 2, inner):
                if g_end - g == 1 and sig[g].kind is TokenKind.VARIABLE:
                    patterns.append(_variable(sig[g]))
                else:
                    patterns.append(SynNode(NodeKind.OTHER, sig[g].line if g < g_end else sig[lo].line,
                                            tuple(walker.walk(g, g_end))))
            after = sig[resume] if resume < hi else None
            if after is None or not (after.is_punct("->") or after.text == "when") or resume != inner + 1:
                reliable = False
        else:
            reliable = False
        arities.add(len(patterns))
        kids = (_atom(sig[lo]),) + tuple(walker.walk(lo + 1, hi))
        clauses.append(SynNode(NodeKind.CLAUSE, sig[lo].line, kids, name, len(patterns), tuple(patterns)))
    if len(arities) != 1:
        reliable = False
    arity = clauses[0].arity if clauses else 0
    return SynNode(NodeKind.FUNCTION_DEF, name_tok.line, tuple(clauses), name, arity, reliable)


def parse_form(form: Form) -> SynNode:
    sig = form.significant
    if not sig:
        return SynNode(NodeKind.OTHER, form.line)
    if form.kind is FormKind.ATTRIBUTE:
        return _attribute(form, sig)
    if form.kind is FormKind.FUNCTION:
        return _function(form, sig)
    return SynNode(NodeKind.OTHER, form.line, tuple(_Walker(sig).walk(0, _body_end(sig))))


def parse_forms(forms: Iterable[Form]) -> SynNode:
    """Parse a whole file's forms under a single ``other`` root node."""
    return SynNode(NodeKind.OTHER, 1, tuple(parse_form(f) for f in forms))


Predicate = NodeKind | Iterable[NodeKind] | Callable[[SynNode], bool]


def _as_test(predicate: Predicate) -> Callable[[SynNode], bool]:
    if isinstance(predicate, NodeKind):
        return lambda node: node.kind is predicate
    if callable(predicate):
        return predicate
    kinds = frozenset(predicate)
    return lambda node: node.kind in kinds


def iter_nodes(roots: SynNode | Iterable[SynNode], predicate: Predicate | None = None) -> Iterator[SynNode]:
    """Depth-first, pre-order traversal of one or more trees."""
    test = _as_test(predicate) if predicate is not None else None
    stack = [roots] if isinstance(roots, SynNode) else list(roots)[::-1]
    while stack:
        node = stack.pop()
        if test is None or test(node):
            yield node
        if node.children:
            stack.extend(reversed(node.children))


def query_nodes(root: SynNode | Iterable[SynNode], predicate: Predicate) -> list[SynNode]:
    return list(iter_nodes(root, predicate))
