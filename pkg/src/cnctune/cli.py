"""Command-line front end.

Subcommands: solve (self-tuning run), cnc (untuned baseline), cube (emit an
iCNF partition), gen (benchmark generator), tune-report (re-render a run log
as CSV scatter tables). Exit codes follow the SAT-competition convention:
10 satisfiable, 20 unsatisfiable, 2 usage error, 1 anything else.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from .backend import Backend, ExternalBackend, ExternalSolverConfig, MiniCdclBackend
from .bench import gen_benchmark
from .cubers import CUBERS
from .formula import TOP, Formula, parse_dimacs, write_dimacs, write_icnf
from .minicdcl import SAT, UNSAT
from .orchestrate import RunConfig, plain_cnc, sdac
from .runlog import RunLog, render_csv_panels
from .strategy import StrategySpace, mini_solver_space

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1
EXIT_USAGE = 2


def load_config(path: str) -> dict:
    """Read a JSON or TOML run-config file."""
    text = Path(path).read_bytes()
    if path.endswith(".toml"):
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        return tomllib.loads(text.decode())
    return json.loads(text)


def build_space(config: dict) -> StrategySpace:
    decl = config.get("space")
    return StrategySpace.from_config(decl) if decl else mini_solver_space()


def build_backend(config: dict, space: StrategySpace) -> Backend:
    decl = config.get("backend", {})
    cuber = CUBERS[decl.get("cuber", "lookahead")]
    kind = decl.get("kind", "minicdcl")
    if kind == "minicdcl":
        return MiniCdclBackend(space, cuber)
    if kind == "external":
        fields = {
            f.name: decl[f.name]
            for f in dataclasses.fields(ExternalSolverConfig)
            if f.name in decl
        }
        if "ok_exit_codes" in fields:
            fields["ok_exit_codes"] = tuple(fields["ok_exit_codes"])
        return ExternalBackend(ExternalSolverConfig(**fields), space, cuber)
    raise ValueError(f"unknown backend kind {kind!r}")


def build_run_config(config: dict, args) -> RunConfig:
    decl = dict(config.get("run", {}))
    for key in ("tuning_band", "validation_band"):
        if key in decl:
            decl[key] = tuple(decl[key])
    if args.seed is not None:
        decl["seed"] = args.seed
    if args.workers is not None:
        decl["workers"] = args.workers
    return RunConfig(**decl)


def read_formula(args) -> Formula:
    if args.stdin:
        return parse_dimacs(sys.stdin.read())
    if not args.formula:
        raise SystemExit2("a formula file or --stdin is required")
    return parse_dimacs(Path(args.formula).read_text())


class SystemExit2(Exception):
    """Usage error carrying a diagnostic for stderr."""


def _cmd_solve(args, baseline: bool) -> int:
    config = load_config(args.config) if args.config else {}
    space = build_space(config)
    backend = build_backend(config, space)
    run_cfg = build_run_config(config, args)
    formula = read_formula(args)
    log = RunLog(args.log) if args.log else None
    runner = plain_cnc if baseline else sdac
    try:
        report = runner(formula, space, backend, run_cfg, log=log)
    finally:
        if log:
            log.close()
    if args.report:
        Path(args.report).write_text(
            json.dumps(dataclasses.asdict(report), indent=2, sort_keys=True) + "\n"
        )
    print(f"s {'SATISFIABLE' if report.answer == SAT else 'UNSATISFIABLE'}")
    if report.answer == SAT and report.model:
        print("v " + " ".join(str(l) for l in report.model) + " 0")
    return EXIT_SAT if report.answer == SAT else EXIT_UNSAT


def _cmd_cube(args) -> int:
    formula = read_formula(args)
    k = args.cubes if args.cubes else 2**args.depth
    cuber = CUBERS[args.cuber]
    result = cuber(formula, TOP, max(2, k), seed=args.seed or 0)
    if result.decided is not None:
        print(f"c decided during cubing: {result.decided.status}", file=sys.stderr)
        text = write_icnf(formula, [])
    else:
        text = write_icnf(formula, list(result.cubes))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args) -> int:
    formula = gen_benchmark(args.family, *args.params, seed=args.seed or 0)
    sys.stdout.write(write_dimacs(formula))
    return 0


def _cmd_tune_report(args) -> int:
    entries = RunLog.load(args.log)
    paths = render_csv_panels(entries, args.out)
    for path in paths:
        print(path)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnctune",
        description="cube-and-conquer SAT solving with online strategy learning",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_args(p):
        p.add_argument("formula", nargs="?", help="DIMACS CNF file")
        p.add_argument("--stdin", action="store_true", help="read the formula from stdin")
        p.add_argument("--config", help="run-config file (JSON or TOML)")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--report", help="write the run report as JSON")
        p.add_argument("--log", help="append run-log records (JSONL)")

    add_solver_args(sub.add_parser("solve", help="self-tuning cube-and-conquer run"))
    add_solver_args(sub.add_parser("cnc", help="plain cube-and-conquer baseline"))

    p_cube = sub.add_parser("cube", help="partition a formula and emit iCNF")
    p_cube.add_argument("formula", nargs="?")
    p_cube.add_argument("--stdin", action="store_true")
    p_cube.add_argument("--depth", type=int, default=3)
    p_cube.add_argument("--cubes", type=int, help="target cube count (overrides --depth)")
    p_cube.add_argument("--cuber", choices=sorted(CUBERS), default="lookahead")
    p_cube.add_argument("--seed", type=int)
    p_cube.add_argument("-o", "--output")

    p_gen = sub.add_parser("gen", help="generate a benchmark formula as DIMACS")
    p_gen.add_argument("family", choices=["php", "xor-miter", "random3"])
    p_gen.add_argument("params", type=int, nargs="+")
    p_gen.add_argument("--seed", type=int)

    p_rep = sub.add_parser("tune-report", help="render a run log as CSV tables")
    p_rep.add_argument("--log", required=True)
    p_rep.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if args.command == "solve":
            return _cmd_solve(args, baseline=False)
        if args.command == "cnc":
            return _cmd_solve(args, baseline=True)
        if args.command == "cube":
            return _cmd_cube(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "tune-report":
            return _cmd_tune_report(args)
        return EXIT_USAGE
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # surface anything else as a solver error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
