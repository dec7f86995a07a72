from __future__ import annotations

from typing import Any

from ..erl_source import NodeKind, iter_nodes
from ..scanner import FileKind, ProjectContext
from .base import Rule, RuleResult


def paths_match(include_path: str, hrl_path: str) -> bool:
    """Whether an include attribute's path may refer to the header at ``hrl_path``.

    Relative segments are dropped from the include path and a match is then a
    whole-segment suffix, which errs towards matching without ``-I`` info.
    """
    if include_path == hrl_path:
        return True
    stripped = "/".join(seg for seg in include_path.split("/") if seg not in ("", ".", ".."))
    if not stripped:
        return False
    longer, shorter = (stripped, hrl_path) if len(stripped) >= len(hrl_path) else (hrl_path, stripped)
    return longer == shorter or longer.endswith("/" + shorter)


class UnusedHrlFiles(Rule):
    name = "unused_hrl_files"
    description = "Header files that no module or header includes."

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        includes: set[str] = set()
        for entry in context.sources:
            for node in iter_nodes(entry.nodes, (NodeKind.INCLUDE_ATTR, NodeKind.INCLUDE_LIB_ATTR)):
                if node.payload is None:
                    # A computed include path could name any header.
                    return []
                includes.add(node.payload)
        headers = [e.path for e in context.of_kind(FileKind.HRL_HEADER)]
        # Each include counts for every header it could mean, which is also
        # how two same-named headers both stay unreported.
        return [
            self.result(path, 0, "this file is unused", path)
            for path in headers
            if not any(paths_match(inc, path) for inc in includes)
        ]

    def ignored(self, pattern: Any, detail: Any) -> bool:
        return False
