"""Command-line entry point.

Exit status is 0 when nothing is reported, 1 when at least one warning is
printed, and 2 when the run could not be completed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence

from . import __version__
from .config import FORMATS, Overrides, load_config
from .engine import gather_ignores, run
from .errors import HankError
from .rules import BUILTIN_RULES, RuleResult, make_rules
from .scanner import scan

EXIT_CLEAN, EXIT_WARNINGS, EXIT_ERROR = 0, 1, 2


def render(results: Sequence[RuleResult], fmt: str = "text") -> str:
    if fmt == "json":
        payload = [{"file": r.file, "line": r.line, "rule": r.rule, "text": r.text} for r in results]
        return json.dumps(payload, indent=2) + "\n"
    return "".join(f"{r.file}:{r.line}: {r.text}\n" for r in results)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _jobs(value: str) -> int:
    try:
        jobs = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid job count {value!r}") from None
    if jobs < 0:
        raise argparse.ArgumentTypeError("job count must be >= 0")
    return jobs


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hank", description="Find oxbow code in an Erlang project.")
    parser.add_argument("root", nargs="?", default=".", help="project directory (default: .)")
    parser.add_argument("--format", choices=FORMATS, help="output format (default: text)")
    parser.add_argument("--rule", action="append", dest="rules", metavar="NAME",
                        help="run only this rule; repeatable")
    parser.add_argument("--exclude", action="append", dest="excludes", metavar="GLOB",
                        help="skip matching files; repeatable")
    parser.add_argument("--jobs", type=_jobs, default=0, metavar="N",
                        help="parse workers, 0 for one per CPU (default: 0)")
    parser.add_argument("--config", metavar="FILE", help="read the hank section from FILE")
    actions = parser.add_mutually_exclusive_group()
    actions.add_argument("--list-rules", action="store_true", help="list the rules and exit")
    actions.add_argument("--version", action="store_true", help="print the version and exit")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.version:
        print(f"hank {__version__}")
        return EXIT_CLEAN
    if args.list_rules:
        for name, cls in BUILTIN_RULES.items():
            print(f"{name}: {cls.description}")
        return EXIT_CLEAN
    logging.basicConfig(format="hank: %(message)s", level=logging.WARNING)
    try:
        overrides = Overrides(
            rules=tuple(args.rules) if args.rules else None,
            excludes=tuple(args.excludes) if args.excludes else None,
            format=args.format,
        )
        config = load_config(args.root, overrides, args.config)
        rules = make_rules(config.rules, config.extra_known_config_skips)
        context = scan(args.root, config.excludes, args.jobs)
        for path, reason in context.parse_failures:
            print(f"hank: {path}: {reason}", file=sys.stderr)
        ignores = gather_ignores(context, config.ignore, rules)
        results = run(context, rules, ignores)
    except HankError as exc:
        print(f"hank: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(render(results, config.format) if results or config.format == "json" else "")
    return EXIT_WARNINGS if results else EXIT_CLEAN


if __name__ == "__main__":
    sys.exit(main())
