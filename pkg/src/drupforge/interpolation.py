"""Sequence interpolants from replayed chain resolutions (McMillan system),
plus solver-backed validity checks."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .formula import (FALSE, TRUE, AND_KIND, FALSE_KIND, LIT_KIND, TRUE_KIND,
                      Formula, mk_and, mk_lit, mk_or, node_count, postorder, simplify,
                      variables)
from .model import ColoredCnf, Range, Tautology, normalize_clause
from .propagate import ResolutionChain, UnitRef
from .replayer import ResolutionSink, ReplayStats, replay
from .solver import Solver
from .trimmer import ProofTracer, Verdict


class UnhousedVariableError(KeyError):
    pass


class ContractViolationError(RuntimeError):
    pass


def initial_partial_itp(lits: Sequence[int], color: int, cut: int,
                        var_range: Mapping[int, Range]) -> Formula:
    """Partial interpolant of an original clause for cut ``cut`` (A = colors
    1..cut, B = the rest)."""
    if color > cut:
        return TRUE
    return mk_or([mk_lit(l) for l in lits if var_range[abs(l)].kmax > cut])


def combine(pivot: int, left: Formula, right: Formula, cut: int,
            var_range: Mapping[int, Range]) -> Formula:
    r = var_range.get(pivot)
    if r is None:
        raise UnhousedVariableError(f"pivot {pivot} has no color range")
    if r.kmax <= cut:
        return mk_or([left, right])
    return mk_and([left, right])


class SequenceInterpolator(ResolutionSink):
    """Computes all N-1 cut interpolants in one pass over the witness."""

    def __init__(self, var_range: Mapping[int, Range], num_colors: int):
        self.var_range = var_range
        self.num_colors = num_colors
        self.cuts = range(1, num_colors)
        self._clause_itp: Dict[int, Tuple[Formula, ...]] = {}
        self._unit_itp: Dict[int, Tuple[Formula, ...]] = {}
        self.result: Optional[List[Formula]] = None

    def _partial(self, m) -> Tuple[Formula, ...]:
        if isinstance(m, UnitRef):
            vec = self._unit_itp.get(m.lit)
            if vec is None:
                raise ContractViolationError(f"unit {m.lit} used before delivery")
            return vec
        vec = self._clause_itp.get(m.id)
        if vec is None:
            if not m.original:
                raise ContractViolationError(f"clause {m.id} used before delivery")
            color = m.range.kmin
            vec = tuple(initial_partial_itp(m.lits, color, i, self.var_range)
                        for i in self.cuts)
            self._clause_itp[m.id] = vec
        return vec

    def _fold(self, chain: ResolutionChain) -> Tuple[Formula, ...]:
        acc = list(self._partial(chain.clauses[0]))
        vr = self.var_range
        for m, pivot in zip(chain.clauses[1:], chain.pivots):
            other = self._partial(m)
            r = vr.get(pivot)
            if r is None:
                raise UnhousedVariableError(f"pivot {pivot} has no color range")
            for i in range(len(acc)):
                if r.kmax <= i + 1:
                    acc[i] = mk_or([acc[i], other[i]])
                else:
                    acc[i] = mk_and([acc[i], other[i]])
        return tuple(acc)

    def chain_resolution_clause(self, resolvent, chain):
        self._clause_itp[resolvent.id] = self._fold(chain)

    def chain_resolution_unit(self, lit, chain):
        self._unit_itp[lit] = self._fold(chain)

    def conclude_empty(self, chain):
        self.result = list(self._fold(chain))

    def get_interpolant(self) -> List[Formula]:
        if self.result is None:
            raise ContractViolationError("conclude_empty was never delivered")
        return self.result


@dataclass
class ItpReport:
    sequence: List[Formula]
    nodes_before: int
    nodes_after: int
    seconds: float
    replay: ReplayStats = field(default_factory=ReplayStats)
    trim_seconds: float = 0.0
    core_originals: int = 0
    proof_len_before: int = 0
    proof_len_after: int = 0
    rounds: List[dict] = field(default_factory=list)

    @property
    def proof_size(self) -> int:
        """Resolution steps in the replayed proof."""
        return self.replay.steps


def interpolate_trimmed(tracer: ProofTracer, color_ordered: bool = False,
                        var_range: Optional[Mapping[int, Range]] = None,
                        num_colors: Optional[int] = None,
                        post_simplify: bool = True) -> ItpReport:
    """Replay an already trimmed tracer into a fresh interpolator."""
    cnf = tracer.colored_cnf()
    if var_range is None:
        var_range = cnf.var_range
    if num_colors is None:
        num_colors = cnf.num_colors
    t0 = time.perf_counter()
    itp = SequenceInterpolator(var_range, num_colors)
    stats = replay(tracer, itp, color_ordered)
    raw = itp.get_interpolant()
    seq = simplify(raw) if post_simplify else list(raw)
    seconds = time.perf_counter() - t0
    return ItpReport(seq, node_count(raw), node_count(seq), seconds, stats)


def interpolate(tracer: ProofTracer, color_ordered: bool = False,
                num_colors: Optional[int] = None, post_simplify: bool = True) -> ItpReport:
    """Trim then replay (the plain path)."""
    t0 = time.perf_counter()
    trim = tracer.trim()
    trim_s = time.perf_counter() - t0
    report = interpolate_trimmed(tracer, color_ordered, num_colors=num_colors,
                                 post_simplify=post_simplify)
    report.trim_seconds = trim_s
    report.core_originals = trim.core_original_count
    report.proof_len_before = trim.proof_len_before
    report.proof_len_after = trim.proof_len_after
    return report


# ------------------------------------------------------------------ checks
def tseitin(f: Formula, solver: Solver, next_var: List[int]) -> int:
    """Add biconditional definitions for ``f``; return the literal naming it.

    ``next_var`` is a one-element list holding the next fresh variable.
    """
    names: Dict[int, int] = {}
    for node in postorder([f]):
        kind = node.kind
        if kind == LIT_KIND:
            names[id(node)] = node.lit
            continue
        v = next_var[0]
        next_var[0] += 1
        if kind == TRUE_KIND:
            solver.add_clause([v])
        elif kind == FALSE_KIND:
            solver.add_clause([-v])
        else:
            kids = [names[id(c)] for c in node.children]
            if kind == AND_KIND:
                for k in kids:
                    solver.add_clause([-v, k])
                long = [v] + [-k for k in kids]
            else:
                for k in kids:
                    solver.add_clause([v, -k])
                long = [-v] + kids
            if normalize_clause(long) is not Tautology:
                solver.add_clause(long)
        names[id(node)] = v
    return names[id(f)]


def _satisfiable(clauses, pos: Sequence[Formula], neg: Sequence[Formula], num_vars: int) -> bool:
    solver = Solver()
    for lits in clauses:
        solver.add_clause(lits)
    fresh = [num_vars + 1]
    for f in pos:
        if f is TRUE:
            continue
        solver.add_clause([tseitin(f, solver, fresh)])
    for f in neg:
        if f is FALSE:
            continue
        solver.add_clause([-tseitin(f, solver, fresh)])
    return solver.solve().sat


def _max_var(formulas) -> int:
    m = 0
    for f in formulas:
        for v in variables(f):
            m = max(m, v)
    return m


def validate_sequence(cnf: ColoredCnf, seq: Sequence[Formula]) -> Verdict:
    """Check I_{i-1} & G_i |= I_i for i = 1..N (I_0 = TRUE, I_N = FALSE)
    with solver calls, and that every variable of I_i spans colors i, i+1."""
    n = cnf.num_colors
    if len(seq) != n - 1:
        return Verdict(False, None, f"expected {n - 1} formulas, got {len(seq)}")
    full = [TRUE] + list(seq) + [FALSE]
    ranges = cnf.var_range
    nv = max(cnf.num_vars, _max_var(seq))
    for i in range(1, n):
        for v in sorted(variables(full[i])):
            r = ranges.get(v)
            if r is None or r.kmin != i or r.kmax != i + 1:
                return Verdict(False, i, f"variable {v} violates the color condition")
    for i in range(1, n + 1):
        if _satisfiable(cnf.partition(i), [full[i - 1]], [full[i]], nv):
            return Verdict(False, i, "implication fails")
    return Verdict(True)


def check_craig(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], itp: Formula) -> Verdict:
    """The three Craig conditions for a 2-way split, checked separately."""
    nv = max([abs(l) for c in list(a) + list(b) for l in c] + [_max_var([itp])])
    if _satisfiable(a, [], [itp], nv):
        return Verdict(False, 1, "A does not imply I")
    if _satisfiable(b, [itp], [], nv):
        return Verdict(False, 2, "I and B are satisfiable")
    shared = {abs(l) for c in a for l in c} & {abs(l) for c in b for l in c}
    extra = variables(itp) - shared
    if extra:
        return Verdict(False, 3, f"non-shared variables {sorted(extra)}")
    return Verdict(True)
