"""Proof-logging CDCL solving, DRUP trimming and replay, and sequence
interpolation over colored CNF."""
from .dimacs import (ParseError, parse_colored_dimacs, parse_drup, parse_interpolant,
                     write_colored_dimacs, write_core_cnf, write_drup, write_interpolant,
                     write_model)
from .formula import FALSE, TRUE, Formula, eval_formula, mk_and, mk_lit, mk_or, simplify
from .interpolation import (ItpReport, SequenceInterpolator, interpolate,
                            interpolate_trimmed, validate_sequence)
from .minimizer import CoreReport, MinimizerSession, extract_unsat_core, minimize_and_interpolate
from .model import Clause, ColoredCnf, ProofEvent, Range
from .propagate import NoRupError, Propagator, ResolutionChain, UnitRef, resolve_chain
from .replayer import ReplayStats, ResolutionSink, WitnessRecorder, replay
from .solver import SAT, UNSAT, UNSAT_ASSUMPTIONS, Solver, SolveResult
from .trimmer import ProofTracer, TrimResult, Verdict, validate_forward

__all__ = [
    "Clause", "ColoredCnf", "CoreReport", "FALSE", "Formula", "ItpReport",
    "MinimizerSession", "NoRupError", "ParseError", "ProofEvent", "ProofTracer",
    "Propagator", "Range", "ReplayStats", "ResolutionChain", "ResolutionSink", "SAT",
    "SequenceInterpolator", "SolveResult", "Solver", "TRUE", "TrimResult", "UNSAT",
    "UNSAT_ASSUMPTIONS", "UnitRef", "Verdict", "WitnessRecorder", "eval_formula",
    "extract_unsat_core", "interpolate", "interpolate_trimmed", "minimize_and_interpolate",
    "mk_and", "mk_lit", "mk_or", "parse_colored_dimacs", "parse_drup", "parse_interpolant",
    "replay", "resolve_chain", "simplify", "validate_forward", "validate_sequence",
    "write_colored_dimacs", "write_core_cnf", "write_drup", "write_interpolant", "write_model",
]
