"""Callback tables for behaviours the analyzer knows about."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


@dataclass(frozen=True, slots=True)
class Behaviour:
    """What a behaviour demands from its implementing modules.

    ``callbacks`` is ``None`` when the callbacks cannot be enumerated, in
    which case every function of an implementing module is left alone.
    """

    name: str
    callbacks: frozenset[tuple[str, int]] | None
    any_name_arities: frozenset[int] = frozenset()

    def covers(self, name: str, arity: int) -> bool:
        if self.callbacks is None:
            return True
        return (name, arity) in self.callbacks or arity in self.any_name_arities

    def merge(self, other: Behaviour) -> Behaviour:
        if self.callbacks is None or other.callbacks is None:
            return Behaviour(self.name, None)
        return Behaviour(
            self.name,
            self.callbacks | other.callbacks,
            self.any_name_arities | other.any_name_arities,
        )


@lru_cache(maxsize=1)
def _table() -> dict:
    data = resources.files("hank").joinpath("data/behaviours.json").read_text("utf-8")
    return json.loads(data)


def builtin_behaviours() -> dict[str, Behaviour]:
    out: dict[str, Behaviour] = {}
    for name, entry in _table()["behaviours"].items():
        if entry.get("skip_all"):
            out[name] = Behaviour(name, None)
        else:
            out[name] = Behaviour(
                name,
                frozenset((cb, arity) for cb, arity in entry["callbacks"]),
                frozenset(entry.get("any_name_arities", ())),
            )
    return out


def implicit_behaviours(module: str) -> list[str]:
    """Behaviours a module follows by naming convention alone (``*_SUITE``)."""
    return [
        name
        for name, entry in _table()["behaviours"].items()
        if (suffix := entry.get("module_suffix")) and module.endswith(suffix)
    ]
