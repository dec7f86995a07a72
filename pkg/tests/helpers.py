"""Shared helpers for running the analyzer in tests."""

from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout

from hank.cli import main, render
from hank.config import load_config
from hank.engine import gather_ignores, run
from hank.rules import make_rules
from hank.scanner import scan


def analyze(root: str, rules=None, jobs: int = 1, excludes=()):
    config = load_config(root)
    selected = make_rules(rules if rules is not None else config.rules)
    context = scan(root, tuple(excludes) or config.excludes, jobs)
    return run(context, selected, gather_ignores(context, config.ignore, selected))


def lines(root: str, **kwargs) -> list[str]:
    return render(analyze(root, **kwargs)).splitlines()


def cli(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()
