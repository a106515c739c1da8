"""Command-line entry point.

Exit codes: 10 satisfiable, 20 unsatisfiable (solve/trim/interpolate/core),
0 proof verified, 1 usage or input error, 2 proof not verified,
3 interpolant failed self-validation.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import List, Optional

from . import bench as bench_mod
from .dimacs import (ParseError, parse_colored_dimacs, parse_drup, write_core_cnf,
                     write_drup, write_interpolant, write_model)
from .interpolation import ItpReport, interpolate, validate_sequence
from .minimizer import SoundnessError, extract_unsat_core, minimize_and_interpolate
from .model import ColoredCnf
from .solver import SAT, Solver
from .trimmer import ProofTracer, validate_forward

EXIT_SAT = 10
EXIT_UNSAT = 20


class CliError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot open {path}: {e.strerror}") from None


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _load(path: str) -> ColoredCnf:
    try:
        return parse_colored_dimacs(_read(path))
    except ParseError as e:
        raise CliError(f"{path}: {e}") from None


def _solve(cnf: ColoredCnf, seed: int, simplify: bool = False):
    solver = Solver(seed=seed, simplify=simplify)
    tracer = ProofTracer()
    solver.connect(tracer)
    for lits, color in cnf.clauses:
        solver.set_current_color(color)
        solver.add_clause(lits)
    return solver, tracer, solver.solve()


def _learned_events(tracer: ProofTracer):
    return [ev for ev in tracer.events() if not ev.original]


def _print_stats(rows: List[tuple], fmt: str) -> None:
    if fmt == "csv":
        print(",".join(k for k, _ in rows), file=sys.stderr)
        print(",".join(str(v) for _, v in rows), file=sys.stderr)
    else:
        for k, v in rows:
            print(f"c {k}: {v}", file=sys.stderr)


# ---------------------------------------------------------------- commands
def cmd_solve(args) -> int:
    cnf = _load(args.cnf)
    _, tracer, result = _solve(cnf, args.seed)
    if result.status == SAT:
        model = {v: result.model.get(v, False) for v in range(1, cnf.num_vars + 1)}
        sys.stdout.write(write_model(model))
        code = EXIT_SAT
    else:
        sys.stdout.write("s UNSATISFIABLE\n")
        code = EXIT_UNSAT
    if args.proof:
        _emit(write_drup(_learned_events(tracer)), args.proof)
    return code


def cmd_check(args) -> int:
    cnf = _load(args.cnf)
    try:
        events = parse_drup(_read(args.proof))
    except ParseError as e:
        raise CliError(f"{args.proof}: {e}") from None
    verdict = validate_forward(cnf, events)
    if verdict:
        print("VERIFIED")
        return 0
    if verdict.step is None:
        print(f"NOT VERIFIED ({verdict.reason})")
    else:
        print(f"NOT VERIFIED at step {verdict.step + 1}")
    return 2


def cmd_trim(args) -> int:
    cnf = _load(args.cnf)
    _, tracer, result = _solve(cnf, args.seed)
    if result.status == SAT:
        print("s SATISFIABLE")
        return EXIT_SAT
    trim = tracer.trim()
    _emit(write_drup(tracer.core_events()), args.output)
    if args.core:
        _emit(write_core_cnf(trim.core_originals, cnf.num_vars), args.core)
    _print_stats([("core_originals", trim.core_original_count),
                  ("proof_len_before", trim.proof_len_before),
                  ("proof_len_after", trim.proof_len_after)], args.stats)
    return EXIT_UNSAT


def cmd_interpolate(args) -> int:
    cnf = _load(args.cnf)
    if cnf.num_colors >= 2:
        bad = cnf.is_striped()
        if bad is not None:
            r = cnf.var_range[bad]
            raise CliError(f"input is not striped: variable {bad} spans colors {r.kmin}..{r.kmax}")
    _, tracer, result = _solve(cnf, args.seed)
    if result.status == SAT:
        print("s SATISFIABLE")
        return EXIT_SAT
    n = cnf.num_colors
    if args.minimize:
        report: ItpReport = minimize_and_interpolate(
            tracer, args.minimize, args.inner_simplify, args.seed, args.color_ordered,
            num_colors=n, post_simplify=not args.no_simplify)
    else:
        report = interpolate(tracer, args.color_ordered, num_colors=n,
                             post_simplify=not args.no_simplify)
    verdict = validate_sequence(cnf, report.sequence)
    if not verdict:
        print(f"interpolant failed validation at index {verdict.step}: {verdict.reason}",
              file=sys.stderr)
        return 3
    _emit(write_interpolant(report.sequence), args.output)
    rows = [("mode", f"minimize{args.minimize}" if args.minimize else "plain"),
            ("core_originals", report.core_originals),
            ("proof_len_before", report.proof_len_before),
            ("proof_len_after", report.proof_len_after),
            ("replay_steps", report.replay.steps),
            ("itp_nodes_before", report.nodes_before),
            ("itp_nodes_after", report.nodes_after),
            ("t_trim", f"{report.trim_seconds:.6f}"),
            ("t_itp", f"{report.seconds:.6f}")]
    for i, r in enumerate(report.rounds, 1):
        rows.append((f"round{i}_core", r["core_size"]))
    _print_stats(rows, args.stats)
    return EXIT_UNSAT


def cmd_core(args) -> int:
    cnf = _load(args.cnf)
    _, tracer, result = _solve(cnf, args.seed)
    if result.status == SAT:
        print("s SATISFIABLE")
        return EXIT_SAT
    report = extract_unsat_core(tracer, args.rounds, args.seed)
    _emit(write_core_cnf(report.clauses, cnf.num_vars), args.output)
    _print_stats([(f"round{i}_core", s) for i, s in enumerate(report.sizes, 1)], args.stats)
    return EXIT_UNSAT


def cmd_bench(args) -> int:
    rows = bench_mod.run_bench(args.workloads, args.bounds, args.seed, rounds=args.rounds,
                               color_ordered=args.color_ordered, validate=args.validate)
    _emit(bench_mod.to_csv(rows, timing=not args.no_timing), args.output)
    for line in bench_mod.summarize(rows).lines():
        print(f"c {line}", file=sys.stderr)
    return 0


# ------------------------------------------------------------------ parser
def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _default_seed() -> int:
    env = os.environ.get("DRUPFORGE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"DRUPFORGE_SEED is not an integer: {env!r}") from None


def build_parser(seed_default: int = 0) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drupforge")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True, stats=True):
        p.add_argument("--seed", type=int, default=seed_default,
                       help="decision heuristic seed (default: $DRUPFORGE_SEED or 0)")
        if output:
            p.add_argument("-o", "--output", help="output path (default: stdout)")
        if stats:
            p.add_argument("--stats", choices=["human", "csv"], default="human")

    p = sub.add_parser("solve", help="solve a CNF")
    p.add_argument("cnf")
    p.add_argument("--proof", help="write the DRUP proof here")
    common(p, output=False, stats=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="validate a DRUP proof against a CNF")
    p.add_argument("cnf")
    p.add_argument("proof")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trim", help="solve and emit the trimmed proof")
    p.add_argument("cnf")
    p.add_argument("--core", help="also write the core CNF here")
    common(p)
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("interpolate", help="solve and emit a sequence interpolant")
    p.add_argument("cnf")
    p.add_argument("--minimize", type=_positive, metavar="N", default=0,
                   help="re-solve the core N times before replay")
    p.add_argument("--color-ordered", action="store_true")
    p.add_argument("--no-simplify", action="store_true",
                   help="skip the structural interpolant post-pass")
    p.add_argument("--inner-simplify", action="store_true",
                   help="enable subsumption in the minimizer's inner solver")
    common(p)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("core", help="extract an UNSAT core")
    p.add_argument("cnf")
    p.add_argument("--rounds", type=_positive, default=1)
    common(p)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("bench", help="incremental counter workload, plain vs minimizer")
    p.add_argument("--workloads", type=_positive, default=20)
    p.add_argument("--bounds", type=_positive, default=20)
    p.add_argument("--rounds", type=_positive, default=1)
    p.add_argument("--color-ordered", action="store_true")
    p.add_argument("--validate", action="store_true", help="validate every interpolant")
    p.add_argument("--no-timing", action="store_true",
                   help="write NA in the time columns (byte-stable output)")
    common(p, stats=False)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser(_default_seed()).parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="c %(levelname)s %(message)s")
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SoundnessError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
