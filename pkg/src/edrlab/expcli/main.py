"""``edrlab`` command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 verification
violations found, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..bounds import bound_report
from ..errors import EdrError
from ..model import ScenarioParams, scenario_model
from .config import load_config
from .csvio import emit_csv
from .frontier import frontier
from .sweep import fraction_tighter, sweep, with_seed
from .verify import verify

EXIT_OK, EXIT_USAGE, EXIT_VIOLATIONS, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("edrlab")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edrlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("report", help="evaluate every relation for one model")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("sweep", help="theta sweep over a qubit scenario, written as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("frontier", help="boundary curves in the (eps, eta) plane, written as CSV")
    p.add_argument("--cab", type=float, required=True)
    p.add_argument("--da", type=float, required=True)
    p.add_argument("--db", type=float, required=True)
    p.add_argument("--new-rhs", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="randomized soundness suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write violations as JSON to this path")
    return parser


def _report(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = with_seed(config, args.seed)
    if config.scenario == "custom":
        model = config.custom_model
    else:
        model = scenario_model(config.scenario, ScenarioParams(config.theta, config.phi, config.lam))
    print(json.dumps(bound_report(model, config.witness).to_dict(), indent=2))
    return EXIT_OK


def _sweep(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = with_seed(config, args.seed)
    out = args.out or config.output_path
    if not out:
        raise _UsageError("sweep needs --out or output_path in the config")
    records = sweep(config, workers=args.workers)
    emit_csv(records, out)
    failed = sum(r.error is not None for r in records)
    if failed:
        log.warning("%d rows failed to evaluate", failed)
    print(f"{len(records)} rows -> {out}; fraction_tighter = {fraction_tighter(records):.6f}")
    return EXIT_OK


def _frontier(args) -> int:
    curves = frontier(args.cab, args.da, args.db, args.new_rhs, args.grid)
    emit_csv(curves, args.out)
    print(", ".join(f"{c.name}: {len(c.points)} points" for c in curves) + f" -> {args.out}")
    return EXIT_OK


def _verify(args) -> int:
    if args.trials < 1:
        raise _UsageError("--trials must be >= 1")
    result = verify(args.seed, args.trials)
    for name, count in result.evaluated.items():
        bad = sum(v["check"] == name for v in result.violations)
        print(f"{name:20s} evaluated {count:6d}  violations {bad}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump({"seed": result.seed, "trials": result.trials, "violations": result.violations}, fh)
    elif result.violations:
        json.dump(result.violations, sys.stdout)
        print()
    return result.exit_code


_COMMANDS = {"report": _report, "sweep": _sweep, "frontier": _frontier, "verify": _verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except EdrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
