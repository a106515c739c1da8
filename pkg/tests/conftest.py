import logging

import pytest

from drupforge.solver import Solver
from drupforge.trimmer import ProofTracer


def solve_traced(clauses, colors=None, assumptions=(), **kw):
    """Solve with a connected tracer; ``colors`` parallels ``clauses``."""
    solver = Solver(**kw)
    tracer = ProofTracer()
    solver.connect(tracer)
    for i, lits in enumerate(clauses):
        solver.set_current_color(colors[i] if colors else 1)
        solver.add_clause(lits)
    return solver, tracer, solver.solve(assumptions)


def solve_cnf(cnf, **kw):
    return solve_traced([l for l, _ in cnf.clauses], [c for _, c in cnf.clauses], **kw)


@pytest.fixture(autouse=True)
def _quiet_warnings():
    logging.getLogger("drupforge").setLevel(logging.ERROR)
    yield
    logging.getLogger("drupforge").setLevel(logging.NOTSET)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    """Record one acceptance line; printed now and again in the summary."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
