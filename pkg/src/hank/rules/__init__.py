"""Built-in detection rules and their registry."""

from __future__ import annotations

from collections.abc import Iterable

from ..errors import ConfigError
from .base import Rule, RuleResult
from .config_options import UnusedConfigurationOptions
from .function_args import UnnecessaryFunctionArguments
from .headers import UnusedHrlFiles, paths_match
from .macros import UnusedMacros
from .records import UnusedRecordFields

BUILTIN_RULES: dict[str, type[Rule]] = {
    cls.name: cls
    for cls in (
        UnusedMacros,
        UnusedRecordFields,
        UnusedHrlFiles,
        UnusedConfigurationOptions,
        UnnecessaryFunctionArguments,
    )
}


def make_rules(names: Iterable[str] | None = None, extra_config_skips: Iterable[str] = ()) -> list[Rule]:
    """Instantiate built-in rules, all of them when ``names`` is None, in registry order."""
    wanted = list(BUILTIN_RULES) if names is None else list(dict.fromkeys(names))
    unknown = [n for n in wanted if n not in BUILTIN_RULES]
    if unknown:
        raise ConfigError(f"unknown rule(s): {', '.join(unknown)}")
    rules: list[Rule] = []
    for name in wanted:
        cls = BUILTIN_RULES[name]
        rules.append(cls(extra_config_skips) if cls is UnusedConfigurationOptions else cls())
    return rules


__all__ = [
    "BUILTIN_RULES", "Rule", "RuleResult", "UnnecessaryFunctionArguments", "UnusedConfigurationOptions",
    "UnusedHrlFiles", "UnusedMacros", "UnusedRecordFields", "make_rules", "paths_match",
]
