"""Command line entry point.

Subcommands: run (execute scenario files), list-builtins (catalog of
named groups, rings, modules, spaces, presentations), and four
shortcuts that run a scenario file under a fixed task: localcoh,
emss-e2, emss-target, postnikov-ss.

Exit codes: 0 success, 1 malformed input, 2 a theorem-backed comparison
failed, 3 no computation strategy applies.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .catalog import list_builtins
from .errors import KcellError, NoStrategyApplies, ScenarioError
from .scenarios import SCHEMA_VERSION, STRATEGIES, run_scenario

EXIT_INPUT = 1
EXIT_MISMATCH = 2
EXIT_NO_STRATEGY = 3


def _load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{path} must hold a JSON object")
    return data


def _apply_overrides(data: dict, args) -> dict:
    if getattr(args, "range", None) is not None:
        data["range"] = args.range
    if getattr(args, "strategy", None) is not None:
        data["strategy"] = args.strategy
    if getattr(args, "seed", None) is not None:
        data["seed"] = args.seed
    if getattr(args, "format", None) is not None:
        data["format"] = args.format
    return data


def _parse_range(text: str) -> list[int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("range must look like a:b")
    try:
        return [int(lo), int(hi)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def _flatten(prefix: str, value, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(value)))


def _emit(report: dict, fmt: str) -> None:
    if fmt == "tsv":
        lines: list[tuple[str, str]] = []
        _flatten("", report, lines)
        for key, val in lines:
            print(f"{key}\t{val}")
    else:
        print(json.dumps(report, indent=2, sort_keys=True))


def _run_files(paths, args, forced_task: str | None = None) -> int:
    jobs = max(1, getattr(args, "jobs", 1) or 1)
    fmt_flag = getattr(args, "format", None)
    loaded = []
    for path in paths:
        data = _load_scenario(path)
        if forced_task is not None:
            data.setdefault("task", forced_task)
            if data["task"] != forced_task:
                raise ScenarioError(
                    f"{path} carries task {data['task']!r}, expected "
                    f"{forced_task!r}")
        loaded.append(_apply_overrides(data, args))

    def job(data):
        return run_scenario(data)

    if jobs == 1 or len(loaded) == 1:
        outcomes = [job(d) for d in loaded]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(job, loaded))
    worst = 0
    for (report, code), path in zip(outcomes, paths):
        report["source"] = path
        _emit(report, fmt_flag or report["scenario"].get("format", "json"))
        worst = max(worst, code)
    return worst


def _cmd_list_builtins(args) -> int:
    catalog = list_builtins()
    _emit(catalog, args.format or "json")
    return 0


def _add_common(sub) -> None:
    sub.add_argument("--range", type=_parse_range, default=None,
                     help="verification window a:b")
    sub.add_argument("--strategy", choices=STRATEGIES, default=None)
    sub.add_argument("--format", choices=["json", "tsv"], default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcell",
        description="cellular approximations of equivariant complexes "
                    "at desk scale, with exact verification")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s schema {SCHEMA_VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="execute scenario files")
    run.add_argument("scenarios", nargs="+", metavar="SCENARIO.json")
    _add_common(run)
    run.set_defaults(func=lambda a: _run_files(a.scenarios, a))

    lb = subs.add_parser("list-builtins",
                         help="named groups, rings, modules, spaces and "
                              "validated presentations")
    lb.add_argument("--format", choices=["json", "tsv"], default=None)
    lb.set_defaults(func=_cmd_list_builtins)

    for name, task, blurb in (
            ("localcoh", "localcoh",
             "local cohomology of a group algebra at its augmentation ideal"),
            ("emss-e2", "emss-e2",
             "bigraded second page against the cellular target"),
            ("emss-target", "emss-target",
             "graded homotopy of the cellular target of a space"),
            ("postnikov-ss", "postnikov-ss",
             "window-filtration spectral sequence of a bounded complex")):
        sub = subs.add_parser(name, help=blurb)
        sub.add_argument("scenario", metavar="SCENARIO.json")
        _add_common(sub)
        sub.set_defaults(func=lambda a, t=task: _run_files([a.scenario], a, t))

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoStrategyApplies as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_STRATEGY
    except KcellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
