"""Command-line interface tying model generation, checking, simulation
and SMV export together.

Exit codes: 0 all selected obligations met, 1 some obligation violated,
2 usage or input errors.
"""
from __future__ import annotations

import argparse
import sys

from . import kripke, ltl, sim, smv
from . import specs as specs_mod
from .check import check as check_formula
from .nm_model import (
    NMParams,
    build_transition_system,
    count_valid_encodings,
    enumerate_valid_encodings,
)

USAGE_ERROR = 2


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sections", type=_positive_int, required=True,
                        help="number of workplace sections N")
    parser.add_argument("--levels", type=_positive_int, required=True,
                        help="number of regulator levels M")


def _spec_list(text: str) -> tuple[str, ...]:
    if text == "all":
        return specs_mod.SPEC_IDS
    ids = tuple(part.strip() for part in text.split(",") if part.strip())
    unknown = [x for x in ids if x not in specs_mod.SPEC_IDS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown spec id {unknown[0]!r}")
    return ids


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmcheck",
        description="Generate, verify and simulate the N-M switching control system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="generate the model in the text format")
    _add_params(p)
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("check", help="verify requirement schemata on the model")
    _add_params(p)
    p.add_argument("--spec", type=_spec_list, default=specs_mod.SPEC_IDS,
                   metavar="LIST|all", help="comma-separated spec ids (default: all)")
    p.add_argument("--strict", action="store_true",
                   help="pin exact section counts and boundary atoms")
    p.add_argument("--literal-paper", action="store_true",
                   help="use the swapped D1/D2 level anchors (expected to fail)")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check-file", help="check one formula against a model file")
    p.add_argument("--model", required=True, help="model in the text format")
    p.add_argument("--formula", required=True, help="LTL formula")

    p = sub.add_parser("simulate", help="replay a voltage trace and monitor it")
    _add_params(p)
    p.add_argument("--trace", required=True, help="trace file, one reading per line")
    p.add_argument("--monitor", type=_spec_list, default=specs_mod.SPEC_IDS,
                   metavar="LIST|all", help="spec ids to monitor (default: all)")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("export-smv", help="emit the model as SMV text")
    _add_params(p)
    p.add_argument("--spec", type=_spec_list, default=specs_mod.SPEC_IDS,
                   metavar="LIST|all")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--literal-paper", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("encodings", help="count (and list) the valid bit strings")
    _add_params(p)
    p.add_argument("--list", action="store_true", dest="list_all",
                   help="also print every valid encoding")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (kripke.ModelError, ltl.ParseError, sim.BadReading, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "build":
        return _cmd_build(args)
    if args.command == "check":
        return _cmd_check(args)
    if args.command == "check-file":
        return _cmd_check_file(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "export-smv":
        return _cmd_export(args)
    if args.command == "encodings":
        return _cmd_encodings(args)
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_build(args) -> int:
    system = build_transition_system(NMParams(args.sections, args.levels))
    text = kripke.serialize_model(system.ts)
    count = len(kripke.reachable(system.ts))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"reachable states: {count}")
    else:
        sys.stdout.write(text)
        print(f"reachable states: {count}", file=sys.stderr)
    return 0


def _cmd_check(args) -> int:
    report = specs_mod.run_suite(
        NMParams(args.sections, args.levels),
        which=args.spec,
        strict=args.strict,
        literal_paper=args.literal_paper,
    )
    if args.format == "json":
        print(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return 0 if report.all_passed else 1


def _cmd_check_file(args) -> int:
    with open(args.model, encoding="utf-8") as fh:
        ts = kripke.parse_model(fh.read())
    formula = ltl.parse(args.formula)
    verdict = check_formula(ts, formula)
    if verdict.holds:
        print(f"holds: {formula}")
        return 0
    print(f"FAILED: {formula}")
    cx = verdict.counterexample
    for part, ids in (("stem", cx.stem), ("cycle", cx.cycle)):
        for sid in ids:
            labels = ",".join(ts.label_names(sid)) or "-"
            print(f"  {part} {sid}: {{{labels}}}")
    return 1


def _cmd_simulate(args) -> int:
    params = NMParams(args.sections, args.levels)
    with open(args.trace, encoding="utf-8") as fh:
        readings = sim.parse_trace(fh.read())
    run_ = sim.run(params, readings)
    result = sim.monitor(params, run_, which=args.monitor, strict=args.strict)
    run_.violations = list(result.violations)
    sys.stdout.write(run_.render())
    if result.goal_reached_at is not None:
        print(f"D8 goal: all sections powered at position {result.goal_reached_at}")
    if not result.violations:
        print("no violations")
        return 0
    for v in result.violations:
        idx = ",".join(map(str, v.indices))
        name = f"{v.spec_id}[{idx}]" if idx else v.spec_id
        print(f"VIOLATION {name} at position {v.position}")
    return 1


def _cmd_export(args) -> int:
    text = smv.export_smv(
        NMParams(args.sections, args.levels),
        which=args.spec,
        strict=args.strict,
        literal_paper=args.literal_paper,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    return 0


def _cmd_encodings(args) -> int:
    params = NMParams(args.sections, args.levels)
    print(count_valid_encodings(params))
    if args.list_all:
        for bits in enumerate_valid_encodings(params):
            print(bits)
    return 0


if __name__ == "__main__":
    sys.exit(main())
