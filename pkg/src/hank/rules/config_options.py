from __future__ import annotations

import posixpath
from collections.abc import Iterable
from typing import Any

from ..erl_source import Atom
from ..scanner import FileKind, ProjectContext, atoms_in
from .base import Rule, RuleResult, bad_detail

KNOWN_NON_RUNTIME_CONFIGS = frozenset({"rebar.config", "elvis.config"})


def _env_keys(entries: Any) -> list[str]:
    keys = []
    if isinstance(entries, list):
        for item in entries:
            if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], Atom):
                keys.append(item[0].name)
    return keys


def app_src_keys(terms: Iterable[Any]) -> list[str]:
    keys: list[str] = []
    for term in terms:
        if (
            isinstance(term, tuple) and len(term) == 3
            and term[0] == Atom("application") and isinstance(term[2], list)
        ):
            for prop in term[2]:
                if isinstance(prop, tuple) and len(prop) == 2 and prop[0] == Atom("env"):
                    keys.extend(_env_keys(prop[1]))
    return keys


def config_keys(terms: Iterable[Any], apps: frozenset[str]) -> list[str]:
    keys: list[str] = []
    for term in terms:
        items = term if isinstance(term, list) else [term]
        for item in items:
            if (
                isinstance(item, tuple) and len(item) == 2
                and isinstance(item[0], Atom) and item[0].name in apps
            ):
                keys.extend(_env_keys(item[1]))
    return keys


class UnusedConfigurationOptions(Rule):
    name = "unused_configuration_options"
    description = "Application environment keys that no source file mentions."

    def __init__(self, extra_skips: Iterable[str] = ()) -> None:
        self.skips = KNOWN_NON_RUNTIME_CONFIGS | frozenset(extra_skips)

    def _skipped(self, path: str) -> bool:
        return posixpath.basename(path) in self.skips or path in self.skips

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        declared: list[tuple[str, str]] = []
        for entry in context.of_kind(FileKind.APP_SRC, FileKind.CONFIG_TERM):
            if entry.failure is not None or self._skipped(entry.path):
                continue
            if entry.kind is FileKind.APP_SRC:
                keys = app_src_keys(entry.terms)
            else:
                keys = config_keys(entry.terms, context.app_names)
            declared.extend((entry.path, key) for key in dict.fromkeys(keys))
        if not declared:
            return []
        mentioned = {node.name for entry in context.sources for node in atoms_in(entry)}
        return [
            self.result(path, 0, f"{key} is not used anywhere in the code", key)
            for path, key in declared
            if key not in mentioned
        ]

    def check_detail(self, detail: Any) -> None:
        if not isinstance(detail, Atom):
            raise bad_detail(self, detail)

    def ignored(self, pattern: Any, detail: Any) -> bool:
        return detail.name == pattern
