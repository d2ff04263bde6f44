"""Command line entry point: ``orehom run <scenario.json> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenario import SUITES, ScenarioError, data_text, parse_scenario
from .suites import emit_report, run

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orehom", description="Exact verification suites for Ore extensions.")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the verification suites of a scenario")
    r.add_argument("scenario", help="scenario JSON file, or 'catalogue' for the bundled one")
    r.add_argument("--suite", action="append", choices=SUITES, help="restrict to this suite (repeatable)")
    r.add_argument("--max-degree", type=int, help="degree bound for random Ore elements")
    r.add_argument("--max-k", type=int, help="highest Ext degree computed")
    r.add_argument("--trials", type=int, help="base number of random samples per check")
    r.add_argument("--seed", type=int, help="seed for all random sampling")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--out", help="write the report here instead of stdout")
    return parser


def _load(arg: str) -> str:
    if arg == "catalogue" and not Path(arg).exists():
        return data_text("catalogue.json")
    return Path(arg).read_text(encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _load(args.scenario)
        sc = parse_scenario(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScenarioError as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    overrides = {"max_degree": args.max_degree, "max_k": args.max_k, "trials": args.trials, "seed": args.seed}
    for key, value in overrides.items():
        if value is not None:
            if value < (1 if key in ("max_k", "trials") else 0):
                print(f"error: --{key.replace('_', '-')} out of range: {value}", file=sys.stderr)
                return EXIT_INPUT
            sc.parameters[key] = value
    report = run(sc, text, args.suite)
    out = emit_report(report, args.format)
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
