"""Command line entry point: ``leasegame {solve,sweep,benchmark,verify}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import oracles
from .errors import IoFailure, ModelError
from .market import validate_params
from .spne import solve_spne
from .sweep import (
    DEFAULT_S_RANGE,
    FIGURE_SCENARIOS,
    SweepSpec,
    emit,
    parse_range,
    run_benchmark_sweep,
    run_sweep,
    s_grid,
)

log = logging.getLogger("leasegame")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _write_text(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(out, exc.strerror or str(exc)) from exc


def _s_values(args) -> list[float]:
    if args.s is not None:
        return [args.s]
    if args.s_range is not None:
        return parse_range(args.s_range)
    return s_grid(*DEFAULT_S_RANGE)


def _scenarios(args):
    if args.tl is None and args.tf is None:
        return FIGURE_SCENARIOS
    if args.tl is None or args.tf is None:
        raise ModelError("--tl and --tf must be given together")
    return ((args.tl, args.tf),)


def cmd_solve(args) -> int:
    if args.s is None:
        raise ModelError("solve needs --s")
    params = validate_params(args.s, args.gamma, args.c)
    outcome = solve_spne(params, args.paper_literal_foc)
    _write_text(json.dumps(outcome.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(tuple(_s_values(args)), args.gamma, args.c, paper_literal_foc=args.paper_literal_foc)
    emit(run_sweep(spec), args.format, args.out)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    spec = SweepSpec(
        tuple(_s_values(args)),
        args.gamma,
        args.c,
        benchmark_scenarios=_scenarios(args),
        paper_literal_foc=args.paper_literal_foc,
    )
    emit(run_benchmark_sweep(spec), args.format, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    names = list(oracles.SUITES) if args.suite == "all" else [args.suite]
    lines, failed = [], 0
    for name in names:
        reports = oracles.SUITES[name](rng, args.cases)
        bad = sum(not r.passed for r in reports)
        failed += bad
        log.info("%s: %d/%d passed", name, len(reports) - bad, len(reports))
        lines.extend(json.dumps(r.to_dict()) for r in reports)
    _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--s", type=float, help="single per-resource fee")
    common.add_argument(
        "--s-range",
        help="fee grid lo:hi:step (default %g:%g:%g, the visible range of the published curves)" % DEFAULT_S_RANGE,
    )
    common.add_argument("--gamma", type=float, default=0.1, help="marginal investment cost (default 0.1)")
    common.add_argument("--c", type=float, default=1.0, help="marginal cost per end-user (default 1)")
    common.add_argument("--tl", type=float, help="benchmark transport cost of the leader")
    common.add_argument("--tf", type=float, help="benchmark transport cost of the follower")
    common.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument(
        "--paper-literal-foc",
        action="store_true",
        help="use the fee term s*I_L/(9 s I_L^2 - 1) as printed instead of s*I_F^2",
    )
    common.add_argument("--seed", type=int, default=0, help="RNG seed for verify sampling")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="leasegame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("solve", parents=[common], help="equilibrium at one (s, gamma, c) as JSON").set_defaults(
        func=cmd_solve
    )
    sub.add_parser("sweep", parents=[common], help="equilibrium rows over a fee grid").set_defaults(func=cmd_sweep)
    sub.add_parser(
        "benchmark", parents=[common], help="no-investment benchmark joined with the equilibrium"
    ).set_defaults(func=cmd_benchmark)
    verify = sub.add_parser("verify", parents=[common], help="run brute-force oracle suites")
    verify.add_argument("--suite", choices=["all", *oracles.SUITES], default="all")
    verify.add_argument("--cases", type=int, default=50, help="random cases per suite (default 50)")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except IoFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ModelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
