"""Tool configuration: the ``{hank, [...]}`` section plus CLI overrides."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, fields, replace
from typing import Any

from .erl_source import Atom, read_terms
from .erl_source.terms import to_text
from .errors import ConfigError, TermError
from .globs import glob_match
from .rules import BUILTIN_RULES

log = logging.getLogger(__name__)

CONFIG_FILES = ("rebar.config", "hank.config")
FORMATS = ("text", "json")


@dataclass(frozen=True, slots=True)
class IgnoreSpec:
    """Suppress results in files matching ``file_scope``.

    Without ``rule`` every rule is suppressed; without ``detail`` every
    result of ``rule`` is.
    """

    file_scope: str
    rule: str | None = None
    detail: Any = None

    @property
    def whole_file(self) -> bool:
        return self.rule is None and self.detail is None

    def matches_file(self, path: str) -> bool:
        return glob_match(self.file_scope, path)


@dataclass(frozen=True, slots=True)
class ToolConfig:
    ignore: tuple[IgnoreSpec, ...] = ()
    rules: tuple[str, ...] | None = None
    excludes: tuple[str, ...] = ()
    extra_known_config_skips: tuple[str, ...] = ()
    format: str = "text"


@dataclass(frozen=True, slots=True)
class Overrides:
    """Values given on the command line; ``None`` means not given."""

    ignore: tuple[IgnoreSpec, ...] | None = None
    rules: tuple[str, ...] | None = None
    excludes: tuple[str, ...] | None = None
    extra_known_config_skips: tuple[str, ...] | None = None
    format: str | None = None


def check_rule_names(names, where: str) -> tuple[str, ...]:
    unknown = [n for n in names if n not in BUILTIN_RULES]
    if unknown:
        raise ConfigError(f"{where}: unknown rule(s): {', '.join(unknown)}")
    return tuple(names)


def check_detail(rule: str, detail: Any, where: str) -> None:
    try:
        BUILTIN_RULES[rule]().check_detail(detail)
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _strings(value: Any, key: str, where: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{where}: {key} must be a list of strings, got {to_text(value)}")
    return tuple(value)


def _ignore_entry(item: Any, where: str) -> IgnoreSpec:
    if isinstance(item, str):
        return IgnoreSpec(str(item))
    if isinstance(item, tuple) and len(item) in (2, 3) and isinstance(item[0], str) \
            and isinstance(item[1], Atom):
        rule = item[1].name
        check_rule_names([rule], where)
        if len(item) == 2:
            return IgnoreSpec(str(item[0]), rule)
        check_detail(rule, item[2], where)
        return IgnoreSpec(str(item[0]), rule, item[2])
    raise ConfigError(f"{where}: invalid ignore entry {to_text(item)}")


def parse_section(options: Any, where: str) -> dict[str, Any]:
    if not isinstance(options, list):
        raise ConfigError(f"{where}: the hank section must be a list")
    found: dict[str, Any] = {}
    for option in options:
        if not (isinstance(option, tuple) and len(option) == 2 and isinstance(option[0], Atom)):
            raise ConfigError(f"{where}: invalid hank option {to_text(option)}")
        key, value = option[0].name, option[1]
        if key == "ignore":
            if not isinstance(value, list):
                raise ConfigError(f"{where}: ignore must be a list")
            found["ignore"] = tuple(_ignore_entry(v, where) for v in value)
        elif key == "rules":
            if not isinstance(value, list) or not all(isinstance(v, Atom) for v in value):
                raise ConfigError(f"{where}: rules must be a list of atoms")
            found["rules"] = check_rule_names([v.name for v in value], where)
        elif key == "exclude":
            found["excludes"] = _strings(value, key, where)
        elif key == "ignore_config_files":
            found["extra_known_config_skips"] = _strings(value, key, where)
        elif key == "format":
            if not (isinstance(value, Atom) and value.name in FORMATS):
                raise ConfigError(f"{where}: format must be one of {', '.join(FORMATS)}")
            found["format"] = value.name
        else:
            log.warning("%s: ignoring unknown hank option %s", where, key)
    return found


def find_config_file(root: str, config_file: str | None = None) -> str | None:
    if config_file is not None:
        return config_file
    for name in CONFIG_FILES:
        path = os.path.join(root, name)
        if os.path.isfile(path):
            return path
    return None


def load_config(root: str, overrides: Overrides | None = None, config_file: str | None = None) -> ToolConfig:
    config = ToolConfig()
    path = find_config_file(root, config_file)
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
        try:
            terms = read_terms(data)
        except TermError as exc:
            raise ConfigError(f"{path}:{exc.line}:{exc.column}: {exc.reason}") from None
        for term in terms:
            if isinstance(term, tuple) and len(term) == 2 and term[0] == Atom("hank"):
                config = replace(config, **parse_section(term[1], path))
    if overrides is not None:
        given = {f.name: getattr(overrides, f.name) for f in fields(overrides)}
        config = replace(config, **{k: v for k, v in given.items() if v is not None})
    if config.format not in FORMATS:
        raise ConfigError(f"unknown format {config.format!r}")
    if config.rules is not None:
        check_rule_names(config.rules, "rules")
    return config
