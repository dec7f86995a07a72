"""Lexing, form splitting and tolerant parsing of un-preprocessed Erlang."""

from .forms import Form, FormKind, split_forms
from .lexer import atom_value, decode_source, string_value, tokenize
from .syntax import NodeKind, SynNode, iter_nodes, parse_form, parse_forms, query_nodes
from .terms import Atom, Binary, TermValue, parse_term_tokens, read_terms
from .tokens import Token, TokenKind

__all__ = [
    "Atom", "Binary", "Form", "FormKind", "NodeKind", "SynNode", "TermValue", "Token",
    "TokenKind", "atom_value", "decode_source", "iter_nodes", "parse_form", "parse_forms",
    "parse_term_tokens", "query_nodes", "read_terms", "split_forms", "string_value", "tokenize",
]
