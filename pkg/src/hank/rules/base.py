"""Rule interface and result record."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, ClassVar

from ..erl_source import Atom
from ..errors import ConfigError
from ..scanner import ProjectContext


@dataclass(frozen=True, slots=True)
class RuleResult:
    rule: str
    file: str
    line: int
    text: str
    pattern: Any


class Rule:
    """A detection rule.

    Subclasses set ``name`` and implement :meth:`analyze`. ``ignored`` decides
    whether a ``-hank``/config detail suppresses a result; it receives the
    result's ``pattern`` and a detail already validated by ``check_detail``.
    """

    name: ClassVar[str] = ""
    description: ClassVar[str] = ""

    def analyze(self, context: ProjectContext) -> list[RuleResult]:
        raise NotImplementedError

    def ignored(self, pattern: Any, detail: Any) -> bool:
        return False

    def check_detail(self, detail: Any) -> None:
        """Raise ``ConfigError`` unless ``detail`` is a shape this rule understands."""
        raise ConfigError(f"rule {self.name} does not accept ignore details")

    def sort_key(self, result: RuleResult) -> Any:
        """Orders this rule's results that share a file and line."""
        return result.text

    def result(self, file: str, line: int, text: str, pattern: Any) -> RuleResult:
        return RuleResult(self.name, file, line, text, pattern)

    def __repr__(self) -> str:
        return f"<rule {self.name}>"


def name_of(value: Any) -> str | None:
    """Text of an atom or string detail, else ``None``."""
    if isinstance(value, Atom):
        return value.name
    if isinstance(value, str):
        return str(value)
    return None


def bad_detail(rule: Rule, detail: Any) -> ConfigError:
    from ..erl_source.terms import to_text

    return ConfigError(f"invalid ignore detail for {rule.name}: {to_text(detail)}")
