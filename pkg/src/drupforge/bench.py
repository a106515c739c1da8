"""Incremental BMC workload comparing the plain and minimizer pipelines."""
from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

from .generators import CounterCircuit
from .interpolation import ItpReport, interpolate, validate_sequence
from .minimizer import minimize_and_interpolate
from .solver import SAT, Solver
from .trimmer import ProofTracer

COLUMNS = ["workload", "bound", "proof_len_plain", "proof_len_min", "itp_nodes_plain",
           "itp_nodes_min", "t_itp_plain", "t_itp_min", "steps_plain", "steps_min"]


def _row(workload: int, bound: int, plain: ItpReport, mini: ItpReport) -> Dict[str, object]:
    # proof length = trimmed DRUP lemmas replayed (the empty clause included)
    return {
        "workload": workload,
        "bound": bound,
        "proof_len_plain": plain.proof_len_after,
        "proof_len_min": mini.proof_len_after,
        "itp_nodes_plain": plain.nodes_after,
        "itp_nodes_min": mini.nodes_after,
        "t_itp_plain": plain.seconds,
        "t_itp_min": mini.seconds,
        "steps_plain": plain.replay.steps,
        "steps_min": mini.replay.steps,
    }


def run_workload(seed: int, bounds: int = 20, rounds: int = 1, simplify: bool = False,
                 color_ordered: bool = False, validate: bool = False,
                 workload: Optional[int] = None) -> List[Dict[str, object]]:
    """One incremental session: bound k adds step k (color k) and a bad
    check guarded by a fresh activation literal, solves under it, and
    interpolates both ways on the same tracer before moving on."""
    circ = CounterCircuit.seeded(seed)
    solver = Solver(seed=seed, simplify=simplify)
    tracer = ProofTracer()
    solver.connect(tracer)
    solver.set_current_color(1)
    for cl in circ.init():
        solver.add_clause(cl)
    rows = []
    for k in range(1, bounds + 1):
        solver.set_current_color(k)
        for cl in circ.transition():
            solver.add_clause(cl)
        act = circ.fresh(1)[0]
        for cl in circ.bad(k, act):
            solver.add_clause(cl)
        result = solver.solve([act])
        if result.status == SAT:
            raise RuntimeError(f"bad state reachable at bound {k}")
        mark = tracer.conclude_with_units([act], k, solver.fresh_id)
        try:
            plain = interpolate(tracer, color_ordered, num_colors=k)
            mini = minimize_and_interpolate(tracer, rounds, simplify, seed, color_ordered,
                                            num_colors=k)
            if validate:
                cnf = tracer.colored_cnf()
                cnf.num_colors = k
                for rep in (plain, mini):
                    verdict = validate_sequence(cnf, rep.sequence)
                    if not verdict:
                        raise AssertionError(f"bound {k}: {verdict.reason} at {verdict.step}")
        finally:
            tracer.retract_to(mark)
        solver.add_clause([-act])
        rows.append(_row(seed if workload is None else workload, k, plain, mini))
    return rows


def run_bench(workloads: int = 20, bounds: int = 20, seed: int = 0, **kw) -> List[Dict[str, object]]:
    rows = []
    for w in range(workloads):
        rows.extend(run_workload(seed + w, bounds, workload=w, **kw))
    return rows


def to_csv(rows: Iterable[Dict[str, object]], timing: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        row = dict(row)
        for col in ("t_itp_plain", "t_itp_min"):
            row[col] = f"{row[col]:.6f}" if timing else "NA"
        writer.writerow(row)
    return buf.getvalue()


@dataclass
class BenchSummary:
    workloads: int
    min_le_plain: int
    median_reduction: float
    spearman: float

    @property
    def fraction_le(self) -> float:
        return self.min_le_plain / self.workloads if self.workloads else 0.0

    def lines(self) -> List[str]:
        return [
            f"workloads: {self.workloads}",
            f"minimizer total proof_len <= plain: {self.min_le_plain}/{self.workloads}",
            f"median reduction of total proof_len: {self.median_reduction:.1%}",
            f"spearman(proof_len, t_itp): {self.spearman:.3f}",
        ]


def summarize(rows: List[Dict[str, object]]) -> BenchSummary:
    from scipy.stats import spearmanr

    totals: Dict[object, List[int]] = {}
    for r in rows:
        t = totals.setdefault(r["workload"], [0, 0])
        t[0] += r["proof_len_plain"]
        t[1] += r["proof_len_min"]
    le = sum(1 for p, m in totals.values() if m <= p)
    reductions = [1 - m / p for p, m in totals.values() if p]
    sizes = [r["proof_len_plain"] for r in rows] + [r["proof_len_min"] for r in rows]
    times = [r["t_itp_plain"] for r in rows] + [r["t_itp_min"] for r in rows]
    rho = float(spearmanr(sizes, times)[0]) if len(rows) > 1 else float("nan")
    return BenchSummary(len(totals), le,
                        statistics.median(reductions) if reductions else 0.0, rho)
