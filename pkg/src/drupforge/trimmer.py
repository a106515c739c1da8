"""Proof-side clause database fed by solver events, with backward trimming
and forward DRUP validation."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .model import (ADD, DELETE, Clause, ColoredCnf, ProofEvent, Tautology,
                    normalize_clause, singleton_range)
from .propagate import NoRupError, Propagator
from .solver import TracerSink

log = logging.getLogger(__name__)


class DesyncError(RuntimeError):
    """The event stream does not match the tracked clause database."""


class InvalidProofError(RuntimeError):
    def __init__(self, clause_id, lits):
        self.clause_id = clause_id
        self.lits = tuple(lits)
        super().__init__(f"proof step for clause {clause_id} {list(lits)} is not RUP")


class NoRefutationError(RuntimeError):
    pass


@dataclass
class TrimResult:
    core_originals: List[Clause]
    core_learned: int
    proof_len_before: int
    proof_len_after: int

    @property
    def core_original_count(self) -> int:
        return len(self.core_originals)


@dataclass
class Verdict:
    valid: bool
    step: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.valid


class ProofTracer(TracerSink):
    """Mirrors the solver's clause database by id and logs the DRUP stack.

    Unit clauses are appended to the trail as they arrive but nothing is
    propagated until :meth:`trim`.
    """

    def __init__(self, core_prioritized: bool = False):
        self.clauses: Dict[int, Clause] = {}
        self.stack: List[Tuple[Clause, bool]] = []
        self.prop = Propagator()
        self.core_prioritized = core_prioritized
        self.concluded = False
        self.max_id = 0
        self.last_trim: Optional[TrimResult] = None

    # ------------------------------------------------------------- events
    def on_add(self, clause_id, lits, original, color=1):
        if clause_id in self.clauses:
            raise DesyncError(f"clause id {clause_id} added twice")
        c = Clause(clause_id, lits, original,
                   singleton_range(color) if original else None)
        self.clauses[clause_id] = c
        self.max_id = max(self.max_id, clause_id)
        self.stack.append((c, False))
        self.prop.attach(c)

    def on_delete(self, clause_id):
        c = self.clauses.get(clause_id)
        if c is None:
            raise DesyncError(f"delete of unknown clause id {clause_id}")
        if c.garbage:
            raise DesyncError(f"clause id {clause_id} deleted twice")
        c.garbage = True
        self.stack.append((c, True))
        self.prop.detach(c)

    def on_unsat_concluded(self):
        self.concluded = True

    # ------------------------------------------------------------ queries
    @property
    def trail(self) -> List[int]:
        return self.prop.trail

    def originals(self) -> List[Clause]:
        return [c for c, deleted in self.stack if not deleted and c.original]

    def colored_cnf(self) -> ColoredCnf:
        return ColoredCnf([(c.lits, c.range.kmin) for c in self.originals()])

    def empty_index(self) -> Optional[int]:
        for idx, (c, deleted) in enumerate(self.stack):
            if not deleted and not c.lits:
                return idx
        return None

    def learned_count(self) -> int:
        return sum(1 for c, deleted in self.stack if not deleted and not c.original)

    def core_events(self) -> List[ProofEvent]:
        """The trimmed proof: core learned additions plus deletions of core
        clauses, in stack order, up to the empty clause."""
        events = []
        for c, deleted in self.stack:
            if not c.core:
                continue
            if deleted:
                events.append(ProofEvent(DELETE, c.id, c.lits))
            elif not c.original:
                events.append(ProofEvent(ADD, c.id, c.lits))
                if not c.lits:
                    break
        return events

    def events(self) -> List[ProofEvent]:
        return [ProofEvent(DELETE if d else ADD, c.id, c.lits, c.original and not d)
                for c, d in self.stack]

    # ------------------------------------------------ assumption conclusion
    def conclude_with_units(self, lits: Sequence[int], color: int,
                            next_id: Callable[[], int]) -> int:
        """Append ``lits`` as temporary original units of ``color`` and an
        empty clause, turning an unsat-under-assumptions result into a
        refutation. Returns a mark for :meth:`retract_to`."""
        mark = len(self.stack)
        for lit in lits:
            self.on_add(next_id(), (lit,), True, color)
        self.on_add(next_id(), (), False)
        return mark

    def retract_to(self, mark: int) -> None:
        """Undo every stack entry past ``mark`` (temporary clauses only)."""
        for c, deleted in self.stack[mark:]:
            if deleted:
                raise DesyncError("cannot retract past a deletion")
            del self.clauses[c.id]
        del self.stack[mark:]
        self._rebuild_live()

    # --------------------------------------------------------------- trim
    def _rebuild_live(self) -> None:
        self.prop = Propagator(self.prop.cap)
        for c, deleted in self.stack:
            if deleted:
                self.prop.detach(c)
            else:
                self.prop.attach(c)

    def trim(self, core_sink: Optional[Callable[[Clause], None]] = None) -> TrimResult:
        """Mark the clauses the empty clause depends on as core.

        Walks the stack backwards: deleted entries are revived, added ones
        deactivated, and every core learned clause is re-derived by RUP on
        the clauses active before it, marking its chain core. ``core_sink``
        gets each core original clause as the walk passes it.
        """
        for c in self.clauses.values():
            c.core = False
        prop = self.prop
        # rebuild the trail in the solver's unit order before the walk
        prop.dirty = True
        if self.empty_index() is None:
            if prop.settle() is None:
                raise NoRefutationError("no empty clause and no top-level conflict")
            self.on_add(self.max_id + 1, (), False)
            prop = self.prop
        end = self.empty_index()
        garbage_before = {cid: c.garbage for cid, c in self.clauses.items()}
        stack = self.stack

        def reason_core_rule(dropped):
            # a core reason leaving the trail pulls in the reasons of its
            # other literals (one level, not transitively)
            reasons = {abs(lit): r for lit, r in dropped}
            for lit, d in dropped:
                if d is None or not d.core:
                    continue
                for other in d.lits:
                    if other == lit:
                        continue
                    v = abs(other)
                    r = reasons.get(v) or prop.reason[v]
                    if r is not None:
                        r.core = True

        prop.on_shrink = reason_core_rule
        stack[end][0].core = True
        try:
            for idx in range(len(stack) - 1, -1, -1):
                c, deleted = stack[idx]
                if deleted:
                    c.garbage = False
                    prop.attach(c)
                    continue
                prop.detach(c)
                c.garbage = True
                if idx > end or not c.core:
                    continue
                if c.original:
                    if core_sink is not None:
                        core_sink(c)
                    continue
                if self.core_prioritized:
                    prop.prioritize_core()
                try:
                    prop.rup_check(c.lits, mark_core=True, clause_id=c.id)
                except NoRupError:
                    raise InvalidProofError(c.id, c.lits) from None
        finally:
            prop.on_shrink = None
            for cid, g in garbage_before.items():
                self.clauses[cid].garbage = g
            self._rebuild_live()
        core_orig = [c for c, d in stack[:end + 1] if not d and c.original and c.core]
        learned = [c for c, d in stack[:end + 1] if not d and not c.original]
        result = TrimResult(
            core_originals=core_orig,
            core_learned=sum(1 for c in learned if c.core),
            proof_len_before=len(learned),
            proof_len_after=sum(1 for c in learned if c.core),
        )
        self.last_trim = result
        return result


def _lits_key(lits) -> tuple:
    return tuple(sorted(lits))


def validate_forward(cnf: Optional[ColoredCnf], events: Iterable[ProofEvent]) -> Verdict:
    """Replay a DRUP proof forward, RUP-checking every learned addition.

    ``cnf`` clauses are active from the start; original additions inside
    ``events`` are accepted unchecked. Deletions match by id when the id is
    known, otherwise by literal set.
    """
    prop = Propagator()
    by_id: Dict[int, Clause] = {}
    by_lits: Dict[tuple, List[Clause]] = {}
    next_id = -1

    def add(c: Clause) -> None:
        if c.id in by_id:
            raise DesyncError(f"duplicate clause id {c.id}")
        by_id[c.id] = c
        by_lits.setdefault(_lits_key(c.lits), []).append(c)
        prop.attach(c)

    if cnf is not None:
        for lits, color in cnf.clauses:
            lits = normalize_clause(lits)
            if lits is Tautology:
                continue
            add(Clause(next_id, lits, True, singleton_range(color)))
            next_id -= 1
    for step, ev in enumerate(events):
        if ev.kind == ADD:
            lits = normalize_clause(ev.lits) if ev.lits else ()
            if lits is Tautology:
                continue  # trivially RUP, never useful for propagation
            cid = ev.clause_id if ev.clause_id is not None and ev.clause_id not in by_id else next_id
            if cid == next_id:
                next_id -= 1
            if not ev.original:
                try:
                    prop.rup_check(lits)
                except NoRupError:
                    return Verdict(False, step, "clause is not RUP")
            add(Clause(cid, lits, ev.original))
            if not lits and not ev.original:
                return Verdict(True)
        else:
            c = by_id.get(ev.clause_id) if ev.clause_id is not None else None
            if c is None or c.garbage or _lits_key(c.lits) != _lits_key(ev.lits):
                candidates = [x for x in by_lits.get(_lits_key(ev.lits), ()) if not x.garbage]
                if not candidates:
                    log.warning("ignoring deletion of unknown clause %s", list(ev.lits))
                    continue
                c = candidates[-1]
            c.garbage = True
            prop.detach(c)
    return Verdict(False, None, "no empty clause")
