"""A small incremental CDCL solver that reports clause additions and
deletions to attached tracer sinks.

The solver is the proof producer: every learned clause it reports is RUP
with respect to the clauses active at that moment, and an unsatisfiable
run ends with an empty-clause addition. Search heuristics are deliberately
plain (VSIDS, Luby restarts, activity-based clause deletion) and fully
deterministic for a given seed.
"""
from __future__ import annotations

import heapq
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from .model import ADD, DELETE, ProofEvent, Tautology, normalize_clause

log = logging.getLogger(__name__)

SAT = "SAT"
UNSAT = "UNSAT"
UNSAT_ASSUMPTIONS = "UNSAT_ASSUMPTIONS"


class TracerSink:
    """Receives proof events in the order the solver performs them."""

    def on_add(self, clause_id: int, lits, original: bool, color: int) -> None:
        pass

    def on_delete(self, clause_id: int) -> None:
        pass

    def on_unsat_concluded(self) -> None:
        pass


class RecordingSink(TracerSink):
    """Keeps every event and checks id discipline as it goes."""

    def __init__(self):
        self.events: list = []
        self.live: Dict[int, tuple] = {}
        self.last_id = 0
        self.concluded = 0

    def on_add(self, clause_id, lits, original, color):
        if clause_id <= self.last_id:
            raise AssertionError(f"id {clause_id} not increasing")
        self.last_id = clause_id
        self.live[clause_id] = tuple(lits)
        self.events.append(ProofEvent(ADD, clause_id, tuple(lits), original))

    def on_delete(self, clause_id):
        if clause_id not in self.live:
            raise AssertionError(f"delete of unknown or deleted id {clause_id}")
        lits = self.live.pop(clause_id)
        self.events.append(ProofEvent(DELETE, clause_id, lits))

    def on_unsat_concluded(self):
        self.concluded += 1


@dataclass
class SolveResult:
    status: str
    model: Dict[int, bool] = field(default_factory=dict)
    failed: List[int] = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.status == SAT

    @property
    def unsat(self) -> bool:
        return self.status == UNSAT


class _SClause:
    __slots__ = ("lits", "id", "learnt", "lbd", "activity", "deleted")

    def __init__(self, lits, cid, learnt, lbd=0):
        self.lits = lits
        self.id = cid
        self.learnt = learnt
        self.lbd = lbd
        self.activity = 0.0
        self.deleted = False


def luby(y: float, x: int) -> float:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


class Solver:
    def __init__(self, seed: int = 0, simplify: bool = False,
                 reduce_interval: int = 2000, restart_unit: int = 64,
                 var_decay: float = 0.95, keep_lbd: int = 3):
        self.seed = seed
        self.simplify = simplify
        self.reduce_interval = reduce_interval
        self.restart_unit = restart_unit
        self.var_decay = var_decay
        self.keep_lbd = keep_lbd
        self._rng = random.Random(seed) if seed else None

        self.sinks: List[TracerSink] = []
        self.color = 1
        self.next_id = 1
        self.num_vars = 0
        self.cap = 0
        self.val: List[int] = [0]
        self.watches: List[list] = [[]]
        self.level: List[int] = [0]
        self.reason: List[Optional[_SClause]] = [None]
        self.activity: List[float] = [0.0]
        self.phase: List[bool] = [False]
        self.heap: list = []
        self.var_inc = 1.0
        self.cla_inc = 1.0

        self.trail: List[int] = []
        self.trail_lim: List[int] = []
        self.head = 0
        self.originals: List[_SClause] = []
        self.learnts: List[_SClause] = []
        self.units: List[_SClause] = []
        self.inconsistent = False
        self.concluded = False
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # --------------------------------------------------------------- tracing
    def connect(self, sink: TracerSink) -> None:
        self.sinks.append(sink)

    def disconnect(self, sink: TracerSink) -> None:
        self.sinks.remove(sink)

    def set_current_color(self, k: int) -> None:
        if k < 1:
            raise ValueError("color must be >= 1")
        self.color = k

    def fresh_id(self) -> int:
        """Reserve a clause id the solver will never use itself."""
        cid = self.next_id
        self.next_id += 1
        return cid

    def _emit_add(self, c: _SClause, original: bool) -> None:
        if self.sinks:
            lits = tuple(sorted(c.lits, key=lambda l: (abs(l), l < 0)))
            for s in self.sinks:
                s.on_add(c.id, lits, original, self.color)

    def _emit_delete(self, c: _SClause) -> None:
        for s in self.sinks:
            s.on_delete(c.id)

    # ------------------------------------------------------------- variables
    def _ensure_vars(self, n: int) -> None:
        if n <= self.cap:
            return
        old = self.cap
        extra = n - old
        self.val = [0] + self.val[1:old + 1] + [0] * (2 * extra) + self.val[old + 1:]
        self.watches = [[]] + self.watches[1:old + 1] + \
            [[] for _ in range(2 * extra)] + self.watches[old + 1:]
        self.level.extend([0] * extra)
        self.reason.extend([None] * extra)
        self.phase.extend([False] * extra)
        for v in range(old + 1, n + 1):
            act = self._rng.random() * 1e-5 if self._rng else 0.0
            self.activity.append(act)
            heapq.heappush(self.heap, (-act, v))
        self.cap = n
        self.num_vars = max(self.num_vars, n)

    def value(self, lit: int) -> int:
        return self.val[lit] if abs(lit) <= self.cap else 0

    # --------------------------------------------------------------- clauses
    def add_clause(self, lits: Iterable[int]) -> Optional[int]:
        """Add an original clause; returns its id, or None for a tautology."""
        norm = normalize_clause(lits)
        if norm is Tautology:
            log.warning("dropping tautological clause %s", list(lits))
            return None
        if norm:
            self._ensure_vars(max(abs(l) for l in norm))
        self._backtrack(0)
        c = _SClause(list(norm), self.fresh_id(), False)
        self.originals.append(c)
        self._emit_add(c, True)
        self._attach(c)
        return c.id

    def _attach(self, c: _SClause) -> None:
        lits = c.lits
        if not lits:
            self.inconsistent = True
            return
        if len(lits) == 1:
            self.units.append(c)
            v = self.val[lits[0]]
            if v == 0:
                self._enqueue(lits[0], c)
            elif v == -1:
                self.inconsistent = True
            return
        val = self.val
        # level-0 state: put non-false literals first
        lits.sort(key=lambda l: val[l] == -1)
        self.watches[lits[0]].append(c)
        self.watches[lits[1]].append(c)
        if val[lits[1]] == -1 and val[lits[0]] != 1:
            if val[lits[0]] == 0:
                self._enqueue(lits[0], c)
            else:
                self.inconsistent = True

    def _detach(self, c: _SClause) -> None:
        if len(c.lits) == 1:
            self.units.remove(c)
        elif len(c.lits) > 1:
            self.watches[c.lits[0]].remove(c)
            self.watches[c.lits[1]].remove(c)

    def _locked(self, c: _SClause) -> bool:
        if not c.lits:
            return False
        lit = c.lits[0]
        return self.val[lit] == 1 and self.reason[abs(lit)] is c

    def _delete(self, c: _SClause) -> None:
        self._detach(c)
        c.deleted = True
        self._emit_delete(c)

    # ----------------------------------------------------------- propagation
    def _enqueue(self, lit: int, reason) -> None:
        v = abs(lit)
        self.val[lit] = 1
        self.val[-lit] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> Optional[_SClause]:
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        start = self.head
        while self.head < len(trail):
            lit = trail[self.head]
            self.head += 1
            false_lit = -lit
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                w = c.lits
                if w[0] == false_lit:
                    w[0] = w[1]
                    w[1] = false_lit
                first = w[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(w)):
                    other = w[k]
                    if val[other] != -1:
                        w[1] = other
                        w[k] = false_lit
                        watches[other].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.propagations += self.head - start
                        return c
                    v = first if first > 0 else -first
                    val[first] = 1
                    val[-first] = -1
                    level[v] = lvl
                    reason[v] = c
                    trail.append(first)
            del ws[j:]
        self.propagations += self.head - start
        return None

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        val = self.val
        phase = self.phase
        reason = self.reason
        activity = self.activity
        heap = self.heap
        for idx in range(len(self.trail) - 1, stop - 1, -1):
            lit = self.trail[idx]
            v = abs(lit)
            val[lit] = 0
            val[-lit] = 0
            reason[v] = None
            phase[v] = lit > 0
            heapq.heappush(heap, (-activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.head = stop

    # -------------------------------------------------------------- analysis
    def _bump_var(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > 1e100:
            for i in range(1, self.cap + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.cap + 1)
                         if self.val[u] == 0]
            heapq.heapify(self.heap)
        elif self.val[v] == 0:
            heapq.heappush(self.heap, (-act, v))

    def _analyze(self, confl: _SClause):
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        level = self.level
        trail = self.trail
        c = confl
        while True:
            if c.learnt:
                c.activity += self.cla_inc
            for q in c.lits:
                if q == p:
                    continue
                v = abs(q)
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    self._bump_var(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(trail[idx]) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            c = self.reason[abs(p)]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            bt = 0
        else:
            best = max(range(1, len(learnt)), key=lambda i: level[abs(learnt[i])])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[abs(learnt[1])]
        lbd = len({level[abs(l)] for l in learnt})
        return learnt, bt, lbd

    def _analyze_final(self, lit: int) -> List[int]:
        """Assumptions responsible for ``lit`` being false."""
        failed = [-lit]
        if not self.trail_lim:
            return failed
        seen = {abs(lit)}
        for idx in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            q = self.trail[idx]
            v = abs(q)
            if v not in seen:
                continue
            r = self.reason[v]
            if r is None:
                if self.level[v] > 0:
                    failed.append(q)
            else:
                for other in r.lits:
                    if self.level[abs(other)] > 0:
                        seen.add(abs(other))
            seen.discard(v)
        return failed

    def _reduce_db(self) -> None:
        candidates = [c for c in self.learnts
                      if not c.deleted and c.lbd > self.keep_lbd and len(c.lits) > 2
                      and not self._locked(c)]
        candidates.sort(key=lambda c: (c.activity, -c.id))
        for c in candidates[:len(candidates) // 2]:
            self._delete(c)
        self.learnts = [c for c in self.learnts if not c.deleted]

    def _decide(self) -> int:
        heap = self.heap
        val = self.val
        activity = self.activity
        while heap:
            neg, v = heapq.heappop(heap)
            if val[v] == 0 and -neg == activity[v]:
                return v
        for v in range(1, self.cap + 1):
            if val[v] == 0:
                return v
        return 0

    # ---------------------------------------------------------- subsumption
    def simplify_subsumption(self) -> int:
        """Delete clauses strictly subsumed by another active clause.

        Returns the number of deleted clauses.
        """
        self._backtrack(0)
        active = [c for c in self.originals + self.learnts if not c.deleted]
        occurs: Dict[int, List[_SClause]] = {}
        for c in active:
            for lit in c.lits:
                occurs.setdefault(lit, []).append(c)
        removed = 0
        for d in sorted(active, key=lambda c: (len(c.lits), c.id)):
            if d.deleted or not d.lits:
                continue
            dset = set(d.lits)
            pivot = min(d.lits, key=lambda l: len(occurs.get(l, ())))
            for c in occurs.get(pivot, ()):
                if c is d or c.deleted or len(c.lits) <= len(d.lits):
                    continue
                if dset.issubset(c.lits) and not self._locked(c):
                    self._delete(c)
                    removed += 1
        if removed:
            self.originals = [c for c in self.originals if not c.deleted]
            self.learnts = [c for c in self.learnts if not c.deleted]
        return removed

    # ----------------------------------------------------------------- solve
    def _conclude_unsat(self) -> SolveResult:
        if not self.concluded:
            self.concluded = True
            empty = _SClause([], self.fresh_id(), True)
            self._emit_add(empty, False)
            for s in self.sinks:
                s.on_unsat_concluded()
        return SolveResult(UNSAT)

    def _learn(self, learnt: List[int], lbd: int) -> _SClause:
        c = _SClause(learnt, self.fresh_id(), True, lbd)
        self._emit_add(c, False)
        if len(learnt) == 1:
            self.units.append(c)
        else:
            self.watches[learnt[0]].append(c)
            self.watches[learnt[1]].append(c)
            c.activity = self.cla_inc
            self.learnts.append(c)
        return c

    def solve(self, assumptions: Sequence[int] = ()) -> SolveResult:
        if self.inconsistent:
            return self._conclude_unsat()
        self._backtrack(0)
        if assumptions:
            self._ensure_vars(max(abs(a) for a in assumptions))
        if self._propagate() is not None:
            self.inconsistent = True
            return self._conclude_unsat()
        if self.simplify:
            self.simplify_subsumption()
        restarts = 0
        budget = luby(2, restarts) * self.restart_unit
        since_restart = 0
        since_reduce = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                since_reduce += 1
                if not self.trail_lim:
                    self.inconsistent = True
                    return self._conclude_unsat()
                learnt, bt, lbd = self._analyze(confl)
                self._backtrack(bt)
                c = self._learn(learnt, lbd)
                self._enqueue(learnt[0], c)
                self.var_inc /= self.var_decay
                self.cla_inc /= 0.999
                continue
            if since_restart >= budget:
                restarts += 1
                budget = luby(2, restarts) * self.restart_unit
                since_restart = 0
                self._backtrack(0)
                continue
            if since_reduce >= self.reduce_interval:
                since_reduce = 0
                self._reduce_db()
            lit = 0
            while len(self.trail_lim) < len(assumptions):
                a = assumptions[len(self.trail_lim)]
                v = self.value(a)
                if v == 1:
                    self.trail_lim.append(len(self.trail))
                elif v == -1:
                    failed = self._analyze_final(-a)
                    self._backtrack(0)
                    return SolveResult(UNSAT_ASSUMPTIONS, failed=sorted(set(failed), key=abs))
                else:
                    lit = a
                    break
            if not lit:
                v = self._decide()
                if v == 0:
                    model = {u: self.val[u] == 1 for u in range(1, self.cap + 1)}
                    self._backtrack(0)
                    return SolveResult(SAT, model=model)
                self.decisions += 1
                lit = v if self.phase[v] else -v
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    # ---------------------------------------------------------------- stats
    @property
    def num_clauses(self) -> int:
        return len(self.originals)
