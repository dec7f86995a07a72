from __future__ import annotations

from collections import defaultdict
from typing import Any

from ..erl_source import NodeKind, iter_nodes
from ..scanner import ProjectContext
from .base import Rule, RuleResult, bad_detail, name_of

_USAGE_KINDS = (
    NodeKind.RECORD_ATTR, NodeKind.RECORD_EXPR, NodeKind.RECORD_ACCESS,
    NodeKind.RECORD_INDEX, NodeKind.CALL,
)


class UnusedRecordFields(Rule):
    name = "unused_record_fields"
    description = "Record fields that are declared but never used."

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        declared = []
        used: defaultdict[str, set[str]] = defaultdict(set)
        whole_records: set[str] = set()
        any_record: set[str] = set()
        everything = False
        for entry in context.sources:
            for node in iter_nodes(entry.nodes, _USAGE_KINDS):
                kind = node.kind
                if kind is NodeKind.RECORD_ATTR:
                    if node.name is not None:
                        declared.append((entry.path, node))
                elif kind is NodeKind.RECORD_EXPR:
                    fields = node.payload
                    if node.name is None:
                        # Record name hidden behind a macro.
                        if None in fields or "_" in fields:
                            everything = True
                        any_record.update(f for f in fields if f is not None)
                    elif None in fields or "_" in fields:
                        whole_records.add(node.name)
                    else:
                        used[node.name].update(fields)
                elif kind in (NodeKind.RECORD_ACCESS, NodeKind.RECORD_INDEX):
                    field = node.payload
                    if node.name is None and field is None:
                        everything = True
                    elif node.name is None:
                        any_record.add(field)
                    elif field is None:
                        whole_records.add(node.name)
                    else:
                        used[node.name].add(field)
                elif node.name == "record_info" and node.arity == 2 and node.payload is None:
                    atoms = [n for n in iter_nodes(node.children[1:], NodeKind.ATOM)]
                    if len(atoms) == 2:
                        whole_records.add(atoms[1].name)
                    else:
                        everything = True
        if everything:
            return []
        out = []
        for path, node in declared:
            record = node.name
            if record in whole_records:
                continue
            for field, line in node.payload:
                if field in used[record] or field in any_record:
                    continue
                out.append(self.result(
                    path, line, f"field {field} in record #{record} is unused", (record, field)
                ))
        return out

    def check_detail(self, detail: Any) -> None:
        if name_of(detail) is not None:
            return
        if isinstance(detail, tuple) and len(detail) == 2 and all(name_of(d) is not None for d in detail):
            return
        raise bad_detail(self, detail)

    def ignored(self, pattern: Any, detail: Any) -> bool:
        record, field = pattern
        if (text := name_of(detail)) is not None:
            return text == record
        return (name_of(detail[0]), name_of(detail[1])) == (record, field)
