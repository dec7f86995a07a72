"""Run rules over a project context and filter ignored results."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .config import IgnoreSpec, check_detail, check_rule_names
from .erl_source import Atom, NodeKind
from .erl_source.terms import to_text
from .errors import ConfigError, HankError, RuleCrash
from .rules import BUILTIN_RULES, Rule, RuleResult
from .scanner import ProjectContext


def _hank_specs(path: str, line: int, payload, known: dict[str, Rule]) -> list[IgnoreSpec]:
    where = f"{path}:{line}"
    if isinstance(payload, HankError):
        raise ConfigError(f"{where}: malformed -hank attribute: {payload}")
    if payload == Atom("ignore"):
        return [IgnoreSpec(path)]
    if not isinstance(payload, list):
        raise ConfigError(f"{where}: malformed -hank attribute: {to_text(payload)}")

    def rule_name(value) -> str:
        if not isinstance(value, Atom):
            raise ConfigError(f"{where}: malformed -hank entry: {to_text(value)}")
        if value.name not in known:
            check_rule_names([value.name], where)
        return value.name

    def validate(rule: str, detail) -> None:
        if rule in known:
            try:
                known[rule].check_detail(detail)
            except ConfigError as exc:
                raise ConfigError(f"{where}: {exc}") from None
        else:
            check_detail(rule, detail, where)

    specs = []
    for item in payload:
        if isinstance(item, Atom):
            specs.append(IgnoreSpec(path, rule_name(item)))
        elif isinstance(item, tuple) and len(item) == 2:
            rule = rule_name(item[0])
            details = item[1] if isinstance(item[1], list) else [item[1]]
            for detail in details:
                validate(rule, detail)
                specs.append(IgnoreSpec(path, rule, detail))
        else:
            raise ConfigError(f"{where}: malformed -hank entry: {to_text(item)}")
    return specs


def gather_ignores(
    context: ProjectContext,
    config_ignores: Iterable[IgnoreSpec] = (),
    rules: Sequence[Rule] = (),
) -> list[IgnoreSpec]:
    """Config ignores followed by those declared with ``-hank`` in each file."""
    known = {r.name: r for r in rules}
    specs = list(config_ignores)
    for entry in context.sources:
        for node in entry.nodes:
            if node.kind is NodeKind.HANK_ATTR:
                specs.extend(_hank_specs(entry.path, node.line, node.payload, known))
    return specs


def is_ignored(rule: Rule, result: RuleResult, specs: Iterable[IgnoreSpec]) -> bool:
    for spec in specs:
        if not spec.matches_file(result.file):
            continue
        if spec.rule is None:
            return True
        if spec.rule == rule.name and (spec.detail is None or rule.ignored(result.pattern, spec.detail)):
            return True
    return False


def run(context: ProjectContext, rules: Sequence[Rule], ignores: Iterable[IgnoreSpec] = ()) -> list[RuleResult]:
    if not rules:
        raise HankError("at least one rule is required")
    names = [r.name for r in rules]
    if len(set(names)) != len(names):
        raise HankError(f"duplicate rule names in {names}")
    specs = list(ignores)
    results: list[RuleResult] = []
    for rule in rules:
        try:
            found = rule.analyze(context)
        except Exception as exc:
            raise RuleCrash(rule.name, exc) from exc
        results.extend(r for r in found if not is_ignored(rule, r, specs))
    by_name = {r.name: r for r in rules}
    results.sort(key=lambda r: (r.file, r.line, r.rule, by_name[r.rule].sort_key(r)))
    return results


def default_rules() -> list[Rule]:
    return [cls() for cls in BUILTIN_RULES.values()]
