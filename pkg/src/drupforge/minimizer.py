"""Proof minimization by re-solving the trimmed core in a fresh solver."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .interpolation import ItpReport, interpolate_trimmed
from .model import Clause
from .solver import Solver
from .trimmer import ProofTracer


class SoundnessError(AssertionError):
    """An inner solve over a trimmed core came back satisfiable."""


@dataclass
class RoundStats:
    core_size: int
    proof_len_before: int
    proof_len_after: int
    solve_seconds: float
    trim_seconds: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CoreReport:
    clauses: List[Tuple[Tuple[int, ...], int]]
    rounds: List[RoundStats] = field(default_factory=list)

    @property
    def sizes(self) -> List[int]:
        return [r.core_size for r in self.rounds]


class MinimizerSession:
    """Runs the trim -> feed -> solve loop; ``tracer`` is the current
    innermost session after :meth:`run`."""

    def __init__(self, outer: ProofTracer, rounds: int = 1, simplify: bool = False,
                 seed: int = 0):
        if rounds < 1:
            raise ValueError("rounds must be at least 1")
        self.outer = outer
        self.rounds = rounds
        self.simplify = simplify
        self.seed = seed
        self.tracer = outer
        self.solver: Optional[Solver] = None
        self.stats: List[RoundStats] = []

    def _round(self) -> None:
        solver = Solver(seed=self.seed, simplify=self.simplify)
        inner = ProofTracer(self.tracer.core_prioritized)
        solver.connect(inner)
        fed: List[Clause] = []

        def feed(c: Clause) -> None:
            # receives core originals during the backward walk
            fed.append(c)
            solver.set_current_color(c.range.kmin)
            solver.add_clause(c.lits)

        t0 = time.perf_counter()
        trim = self.tracer.trim(core_sink=feed)
        t1 = time.perf_counter()
        result = solver.solve()
        t2 = time.perf_counter()
        if not result.unsat:
            raise SoundnessError("inner solve over the trimmed core is satisfiable")
        self.stats.append(RoundStats(len(fed), trim.proof_len_before,
                                     trim.proof_len_after, t2 - t1, t1 - t0))
        self.tracer = inner
        self.solver = solver

    def run(self) -> ProofTracer:
        for _ in range(self.rounds):
            self._round()
        return self.tracer


def minimize_and_interpolate(outer: ProofTracer, rounds: int = 1, simplify: bool = False,
                             seed: int = 0, color_ordered: bool = False,
                             num_colors: Optional[int] = None,
                             post_simplify: bool = True) -> ItpReport:
    if num_colors is None:
        num_colors = outer.colored_cnf().num_colors
    session = MinimizerSession(outer, rounds, simplify, seed)
    inner = session.run()
    t0 = time.perf_counter()
    trim = inner.trim()
    trim_s = time.perf_counter() - t0
    report = interpolate_trimmed(inner, color_ordered, num_colors=num_colors,
                                 post_simplify=post_simplify)
    report.trim_seconds = trim_s
    report.core_originals = trim.core_original_count
    report.proof_len_before = trim.proof_len_before
    report.proof_len_after = trim.proof_len_after
    report.rounds = [r.as_dict() for r in session.stats]
    return report


def extract_unsat_core(outer: ProofTracer, rounds: int = 1, seed: int = 0) -> CoreReport:
    """Final-round core originals with their colors, in input order."""
    position = {}
    for i, c in enumerate(outer.originals()):
        position.setdefault((c.lits, c.range.kmin), i)
    session = MinimizerSession(outer, rounds, seed=seed)
    inner = session.run()
    clauses = sorted(((c.lits, c.range.kmin) for c in inner.originals()),
                     key=lambda lc: position[lc])
    return CoreReport(clauses, session.stats)
