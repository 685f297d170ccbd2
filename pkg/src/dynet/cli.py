"""Command line front end.

Three subcommands: ``run`` executes a scenario config and writes a CSV of
trial rows plus a versioned JSON report, ``validate`` lists schema
violations without running anything, and ``list`` prints the scenario
catalog.  All randomness flows from the config seed, so rerunning the same
config produces byte-identical outputs.

Exit codes: 0 on success, 1 when ``--check`` is set and a theory check
failed (or ``validate`` found violations), 2 for usage and resource
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .scenarios import (
    ConfigError,
    load_config,
    run_scenario,
    scenario_catalog,
    validate_config,
)
from .simulator import ResourceCapError

_RUN_USAGE = "dynet run <config.json> [--check] [--jobs N] [--seed S] [--out DIR]"


def _fmt_value(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _print_report(report, stream) -> None:
    for chk in report.checks:
        status = "PASS" if chk.passed else "FAIL"
        line = (f"{status}  {chk.name}: observed={_fmt_value(chk.observed)}"
                f" expected={chk.expected}")
        if chk.note:
            line += f"  ({chk.note})"
        print(line, file=stream)
    n_pass = sum(1 for c in report.checks if c.passed)
    print(f"{n_pass}/{len(report.checks)} checks passed", file=stream)


def _output_paths(config_path: str, cfg, out_dir: str | None):
    """CSV/JSON destinations: base name from the config's ``out`` field or
    the config file stem, directory from --out when given."""
    if cfg.out:
        base = Path(cfg.out)
        if base.suffix in (".csv", ".json"):
            base = base.with_suffix("")
    else:
        base = Path(Path(config_path).stem)
    directory = Path(out_dir) if out_dir else (
        base.parent if base.parent != Path(".") else Path.cwd())
    stem = base.name
    return directory / f"{stem}.csv", directory / f"{stem}.report.json"


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: invalid config {args.config}", file=sys.stderr)
        for diag in exc.diagnostics:
            print(f"  - {diag}", file=sys.stderr)
        print(f"usage: {_RUN_USAGE}", file=sys.stderr)
        return 2

    if args.seed is not None:
        cfg.seed = args.seed

    try:
        report = run_scenario(cfg, jobs=args.jobs)
    except ResourceCapError as exc:
        print(f"refusing to run: {exc}", file=sys.stderr)
        print("set the DYNET_MAX_N environment variable to raise the "
              "node-count cap if this size is intended", file=sys.stderr)
        return 2

    csv_path, json_path = _output_paths(args.config, cfg, args.out)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(report.csv_text(), encoding="utf-8")
    json_path.write_text(report.json_text(), encoding="utf-8")

    print(f"scenario: {report.kind}")
    _print_report(report, sys.stdout)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    if args.check and not report.all_passed:
        return 1
    return 0


def _cmd_validate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: not valid JSON: {exc}", file=sys.stderr)
        return 2
    if not isinstance(raw, dict):
        print("config: top level must be a JSON object", file=sys.stdout)
        return 1
    diags = validate_config(raw)
    for diag in diags:
        print(diag)
    return 1 if diags else 0


def _cmd_list(_args) -> int:
    for kind, params, claim in scenario_catalog():
        print(kind)
        print(f"  params: {params}")
        print(f"  checks: {claim}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynet",
        description="Run, validate, and list dynamic-network scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser(
        "run", help="execute a scenario config; write CSV and JSON report")
    p_run.add_argument("config", help="path to a scenario config (JSON)")
    p_run.add_argument("--check", action="store_true",
                       help="exit 1 if any theory check fails")
    p_run.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="worker processes for trial dispatch (default 1)")
    p_run.add_argument("--seed", type=int, default=None, metavar="S",
                       help="override the config's seed")
    p_run.add_argument("--out", default=None, metavar="DIR",
                       help="directory for the CSV and report files")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser(
        "validate", help="list schema violations without running")
    p_val.add_argument("config", help="path to a scenario config (JSON)")
    p_val.set_defaults(func=_cmd_validate)

    p_list = sub.add_parser("list", help="print the scenario catalog")
    p_list.set_defaults(func=_cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run" and args.jobs < 1:
        parser.error("--jobs must be >= 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
