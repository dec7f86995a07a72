from __future__ import annotations

from collections import defaultdict
from typing import Any

from ..behaviours import Behaviour, implicit_behaviours
from ..erl_source import NodeKind, SynNode, TokenKind, atom_value, iter_nodes
from ..scanner import FileEntry, FileKind, ProjectContext
from .base import Rule, RuleResult, bad_detail, name_of
from .headers import paths_match

FunKey = tuple[str, int]


def _is_ignored_pattern(node: SynNode) -> bool:
    return node.kind is NodeKind.UNDERSCORE or (
        node.kind is NodeKind.VARIABLE and node.name.startswith("_")
    )


def _is_nif_error(node: SynNode) -> bool:
    return (
        node.kind is NodeKind.CALL and node.name == "nif_error"
        and node.arity in (1, 2) and node.payload in (None, "erlang")
    )


def _listed_nifs(entry: FileEntry) -> set[FunKey]:
    """Functions named in ``-nifs([...])`` attributes."""
    found: set[FunKey] = set()
    for form in entry.forms:
        if form.name != "nifs":
            continue
        sig = form.significant
        for i in range(len(sig) - 2):
            if (sig[i].kind is TokenKind.ATOM and sig[i + 1].is_punct("/")
                    and sig[i + 2].kind is TokenKind.INTEGER and sig[i + 2].text.isdigit()):
                found.add((atom_value(sig[i].text), int(sig[i + 2].text)))
    return found


def _nif_macros(context: ProjectContext) -> set[str]:
    bodies: dict[str, list[SynNode]] = defaultdict(list)
    for entry in context.sources:
        for node in iter_nodes(entry.nodes, NodeKind.DEFINE_ATTR):
            bodies[node.name].append(node)
    direct = {
        name for name, nodes in bodies.items()
        if any(_is_nif_error(n) for n in iter_nodes(nodes, NodeKind.CALL))
    }
    uses = {
        name: {n.name for n in iter_nodes(nodes, NodeKind.MACRO_USE)}
        for name, nodes in bodies.items()
    }
    return _closure(direct, uses)


def _closure(seeds: set, edges: dict) -> set:
    marked = set(seeds)
    changed = True
    while changed:
        changed = False
        for key, targets in edges.items():
            if key not in marked and targets & marked:
                marked.add(key)
                changed = True
    return marked


class UnnecessaryFunctionArguments(Rule):
    name = "unnecessary_function_arguments"
    description = "Arguments that every clause of a function ignores."

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        remote_refs: set[tuple[str, str, int]] = set()
        header_behaviours: dict[str, list[str | None]] = {}
        for entry in context.sources:
            for node in iter_nodes(entry.nodes, NodeKind.FUN_REF):
                if node.payload is not None:
                    remote_refs.add((node.payload, node.name, node.arity))
            if entry.kind is FileKind.HRL_HEADER:
                found = [n.name for n in entry.nodes if n.kind is NodeKind.BEHAVIOR_ATTR]
                if found:
                    header_behaviours[entry.path] = found
        nif_macros = _nif_macros(context)
        out: list[RuleResult] = []
        for entry in context.of_kind(FileKind.ERL_MODULE):
            out.extend(self._module(context, entry, remote_refs, header_behaviours, nif_macros))
        return out

    def _behaviours(self, context, entry, header_behaviours) -> list[Behaviour] | None:
        names: list[str | None] = [n.name for n in entry.nodes if n.kind is NodeKind.BEHAVIOR_ATTR]
        for inc in iter_nodes(entry.nodes, (NodeKind.INCLUDE_ATTR, NodeKind.INCLUDE_LIB_ATTR)):
            for path, found in header_behaviours.items():
                if inc.payload is None or paths_match(inc.payload, path):
                    names.extend(found)
        names.extend(implicit_behaviours(entry.module or ""))
        known = []
        for name in names:
            info = context.known_behavior_callbacks.get(name) if name is not None else None
            if info is None or info.callbacks is None:
                return None
            known.append(info)
        return known

    def _module(self, context, entry, remote_refs, header_behaviours, nif_macros) -> list[RuleResult]:
        behaviours = self._behaviours(context, entry, header_behaviours)
        if behaviours is None:
            return []
        module = entry.module
        groups: dict[FunKey, list[SynNode]] = defaultdict(list)
        for node in entry.nodes:
            if node.kind is NodeKind.FUNCTION_DEF:
                groups[(node.name, node.arity)].append(node)

        referenced = {
            (n.name, n.arity) for n in iter_nodes(entry.nodes, NodeKind.FUN_REF)
            if n.payload is None or n.payload == module
        }
        referenced |= {(f, a) for m, f, a in remote_refs if m == module}

        calls: dict[FunKey, set[FunKey]] = {}
        stubs: set[FunKey] = set(_listed_nifs(entry))
        for key, defs in groups.items():
            body_calls = list(iter_nodes(defs, NodeKind.CALL))
            if any(_is_nif_error(c) for c in body_calls) or any(
                m.name in nif_macros for m in iter_nodes(defs, NodeKind.MACRO_USE)
            ):
                stubs.add(key)
            calls[key] = {
                (c.name, c.arity) for c in body_calls if c.payload in (None, module)
            }
        stubs = _closure(stubs, calls)

        out = []
        for key, defs in groups.items():
            name, arity = key
            if (
                not arity
                or key in stubs
                or key in referenced
                or not all(d.payload for d in defs)
                or any(b.covers(name, arity) for b in behaviours)
            ):
                continue
            clauses = [c for d in defs for c in d.children]
            for index in range(arity, 0, -1):
                if all(_is_ignored_pattern(c.payload[index - 1]) for c in clauses):
                    out.append(self.result(
                        entry.path, defs[0].line,
                        f"{name}/{arity} does not need its #{index} argument",
                        (name, arity, index),
                    ))
        return out

    def check_detail(self, detail: Any) -> None:
        if name_of(detail) is not None:
            return
        if isinstance(detail, tuple) and len(detail) in (2, 3) and name_of(detail[0]) is not None \
                and all(isinstance(d, int) and not isinstance(d, bool) and d >= 0 for d in detail[1:]):
            return
        raise bad_detail(self, detail)

    def sort_key(self, result: RuleResult) -> Any:
        name, arity, index = result.pattern
        return (name, arity, -index)

    def ignored(self, pattern: Any, detail: Any) -> bool:
        if (text := name_of(detail)) is not None:
            return text == pattern[0]
        return (name_of(detail[0]), *detail[1:]) == pattern[: len(detail)]
