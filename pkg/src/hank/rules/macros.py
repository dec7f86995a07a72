from __future__ import annotations

from typing import Any

from ..erl_source import Atom, NodeKind, iter_nodes
from ..scanner import ProjectContext
from .base import Rule, RuleResult, bad_detail, name_of

PREDEFINED = frozenset({
    "MODULE", "MODULE_STRING", "LINE", "FILE", "FUNCTION_NAME", "FUNCTION_ARITY",
    "MACHINE", "OTP_RELEASE",
})

_CONDITIONALS = frozenset({"ifdef", "ifndef", "if", "elif"})


def is_predefined(name: str) -> bool:
    return name in PREDEFINED or name.startswith("FEATURE_")


class UnusedMacros(Rule):
    name = "unused_macros"
    description = "Macros that are defined but never used."

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        defines = []
        used: set[tuple[str, int | None]] = set()
        tested: set[str] = set()
        kinds = (NodeKind.MACRO_USE, NodeKind.DEFINE_ATTR, NodeKind.OTHER)
        for entry in context.sources:
            for node in iter_nodes(entry.nodes, kinds):
                if node.kind is NodeKind.MACRO_USE:
                    used.add((node.name, node.arity))
                    # `?M(a)` may equally be a bare `?M` followed by a call.
                    used.add((node.name, None))
                elif node.kind is NodeKind.DEFINE_ATTR:
                    defines.append((entry.path, node))
                elif node.name in _CONDITIONALS and node.payload:
                    tested.update(node.payload)
        out = []
        for path, node in defines:
            key = (node.name, node.arity)
            if is_predefined(node.name) or node.name in tested or key in used:
                continue
            out.append(self.result(path, node.line, f"?{node.name} is unused", key))
        return out

    def check_detail(self, detail: Any) -> None:
        if name_of(detail) is not None:
            return
        if isinstance(detail, tuple) and len(detail) == 2 and name_of(detail[0]) is not None:
            arity = detail[1]
            if arity == Atom("none") or (isinstance(arity, int) and not isinstance(arity, bool) and arity >= 0):
                return
        raise bad_detail(self, detail)

    def ignored(self, pattern: Any, detail: Any) -> bool:
        name, arity = pattern
        if (text := name_of(detail)) is not None:
            return text == name
        want = None if detail[1] == Atom("none") else detail[1]
        return name_of(detail[0]) == name and want == arity
