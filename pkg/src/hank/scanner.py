"""Project discovery and the parsed, immutable project context."""

from __future__ import annotations

import os
import posixpath
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .behaviours import Behaviour, builtin_behaviours
from .errors import HankIOError, LexError, TermError
from .erl_source import (
    Atom,
    Form,
    NodeKind,
    SynNode,
    TermValue,
    decode_source,
    iter_nodes,
    parse_form,
    read_terms,
    split_forms,
    tokenize,
)
from .globs import glob_match

DEFAULT_EXCLUDED_DIRS = frozenset({"_build", ".git", "deps", "node_modules"})


class FileKind(str, Enum):
    ERL_MODULE = "erl_module"
    HRL_HEADER = "hrl_header"
    APP_SRC = "app_src"
    CONFIG_TERM = "config_term"
    OTHER_TERM = "other_term"


def classify(path: str) -> FileKind:
    name = posixpath.basename(path)
    if name.endswith(".app.src"):
        return FileKind.APP_SRC
    if name.endswith(".erl"):
        return FileKind.ERL_MODULE
    if name.endswith(".hrl"):
        return FileKind.HRL_HEADER
    if name.endswith(".config"):
        return FileKind.CONFIG_TERM
    return FileKind.OTHER_TERM


@dataclass(frozen=True, slots=True)
class FileEntry:
    path: str
    kind: FileKind
    forms: tuple[Form, ...] = ()
    nodes: tuple[SynNode, ...] = ()
    terms: tuple[TermValue, ...] = ()
    failure: str | None = None
    module: str | None = None

    @property
    def is_source(self) -> bool:
        return self.kind in (FileKind.ERL_MODULE, FileKind.HRL_HEADER)


@dataclass(frozen=True)
class ProjectContext:
    root: str
    files: tuple[FileEntry, ...]
    app_names: frozenset[str]
    known_behavior_callbacks: Mapping[str, Behaviour]
    parse_failures: tuple[tuple[str, str], ...] = ()
    _by_path: Mapping[str, FileEntry] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_path", MappingProxyType({f.path: f for f in self.files}))

    def file(self, path: str) -> FileEntry | None:
        return self._by_path.get(path)

    def of_kind(self, *kinds: FileKind) -> list[FileEntry]:
        return [f for f in self.files if f.kind in kinds]

    @property
    def sources(self) -> list[FileEntry]:
        return [f for f in self.files if f.is_source]


def _excluded(path: str, excludes: Iterable[str]) -> bool:
    return any(glob_match(pattern, path) for pattern in excludes)


def discover(
    root: str,
    excludes: Iterable[str] = (),
    failures: list[tuple[str, str]] | None = None,
) -> list[str]:
    """Project-relative ``/`` paths of every analyzable file under ``root``."""
    excludes = list(excludes)
    if not os.path.isdir(root) or not os.access(root, os.R_OK | os.X_OK):
        raise HankIOError(f"cannot read project directory {root!r}")

    def on_error(exc: OSError) -> None:
        if failures is not None and exc.filename:
            rel = os.path.relpath(exc.filename, root).replace(os.sep, "/")
            failures.append((rel, exc.strerror or str(exc)))

    found: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root, onerror=on_error, followlinks=False):
        rel_dir = os.path.relpath(dirpath, root).replace(os.sep, "/")
        rel_dir = "" if rel_dir == "." else rel_dir
        dirnames[:] = [
            d for d in dirnames
            if d not in DEFAULT_EXCLUDED_DIRS
            and not d.startswith(".")
            and not os.path.islink(os.path.join(dirpath, d))
        ]
        for name in filenames:
            rel = f"{rel_dir}/{name}" if rel_dir else name
            if classify(rel) is FileKind.OTHER_TERM:
                continue
            full = os.path.join(dirpath, name)
            if os.path.islink(full) or not os.path.isfile(full):
                continue
            if _excluded(rel, excludes):
                continue
            found.append(rel)
    return sorted(found)


def _module_name(path: str, nodes: tuple[SynNode, ...]) -> str:
    for node in nodes:
        if node.kind is NodeKind.OTHER and node.name == "module":
            atoms = list(iter_nodes(node, NodeKind.ATOM))
            if len(atoms) >= 2:
                return atoms[1].name
    base = posixpath.basename(path)
    return base.rsplit(".", 1)[0]


def parse_file(root: str, path: str) -> FileEntry:
    kind = classify(path)
    try:
        with open(os.path.join(root, path), "rb") as fh:
            data = fh.read()
    except OSError as exc:
        return FileEntry(path, kind, failure=exc.strerror or str(exc))
    if kind in (FileKind.ERL_MODULE, FileKind.HRL_HEADER):
        text, _ = decode_source(data)
        failure = None
        try:
            tokens = tokenize(text, path)
        except LexError as exc:
            # Keep the recovered tokens: dropping the file's usages could
            # turn into false positives elsewhere.
            tokens, failure = exc.tokens, str(exc)
        forms = tuple(split_forms(tokens))
        nodes = tuple(parse_form(f) for f in forms)
        module = _module_name(path, nodes) if kind is FileKind.ERL_MODULE else None
        return FileEntry(path, kind, forms, nodes, failure=failure, module=module)
    try:
        terms = tuple(read_terms(decode_source(data)[0]))
    except TermError as exc:
        return FileEntry(path, kind, failure=str(exc))
    return FileEntry(path, kind, terms=terms)


def _parse_star(args: tuple[str, str]) -> FileEntry:
    return parse_file(*args)


def _app_names(files: Iterable[FileEntry]) -> frozenset[str]:
    names: set[str] = set()
    for entry in files:
        if entry.kind is not FileKind.APP_SRC:
            continue
        names.add(posixpath.basename(entry.path)[: -len(".app.src")])
        for term in entry.terms:
            if (
                isinstance(term, tuple) and len(term) == 3
                and term[0] == Atom("application") and isinstance(term[1], Atom)
            ):
                names.add(term[1].name)
    return frozenset(names)


def _project_behaviours(files: Iterable[FileEntry]) -> dict[str, Behaviour]:
    found: dict[str, Behaviour] = {}
    for entry in files:
        if entry.kind is not FileKind.ERL_MODULE or entry.module is None:
            continue
        callbacks = [n for n in entry.nodes if n.kind is NodeKind.CALLBACK_ATTR]
        if not callbacks:
            continue
        if any(n.name is None or n.arity is None for n in callbacks):
            found[entry.module] = Behaviour(entry.module, None)
        else:
            found[entry.module] = Behaviour(
                entry.module, frozenset((n.name, n.arity) for n in callbacks)
            )
    return found


def resolve_jobs(jobs: int) -> int:
    if jobs < 0:
        raise ValueError("jobs must be >= 0")
    return jobs or os.cpu_count() or 1


def build_context(
    root: str,
    paths: list[str],
    jobs: int = 1,
    discovery_failures: Iterable[tuple[str, str]] = (),
) -> ProjectContext:
    workers = min(resolve_jobs(jobs), max(1, len(paths)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(paths) // (workers * 4))
            entries = list(pool.map(_parse_star, [(root, p) for p in paths], chunksize=chunk))
    else:
        entries = [parse_file(root, p) for p in paths]
    entries.sort(key=lambda e: e.path)

    behaviours = builtin_behaviours()
    for name, found in _project_behaviours(entries).items():
        behaviours[name] = behaviours[name].merge(found) if name in behaviours else found

    failures = sorted(
        list(discovery_failures) + [(e.path, e.failure) for e in entries if e.failure]
    )
    return ProjectContext(
        root=root,
        files=tuple(entries),
        app_names=_app_names(entries),
        known_behavior_callbacks=MappingProxyType(behaviours),
        parse_failures=tuple(failures),
    )


def scan(root: str, excludes: Iterable[str] = (), jobs: int = 1) -> ProjectContext:
    failures: list[tuple[str, str]] = []
    paths = discover(root, excludes, failures)
    return build_context(root, paths, jobs, failures)


def atoms_in(entry: FileEntry) -> Iterable[SynNode]:
    return iter_nodes(entry.nodes, NodeKind.ATOM)
