"""Unit propagation, conflict analysis and RUP checking on a proof-side
clause set.

A :class:`Propagator` keeps a *top-level* trail that is the unit-propagation
fixpoint of the currently attached clauses. RUP checks push assumptions on
top of it and backtrack afterwards, so the top-level part survives between
checks. Detaching a clause that is the reason for a top-level literal
invalidates the fixpoint; it is recomputed lazily on the next check.
"""
from __future__ import annotations

from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .model import Clause, Range, range_join


class NoRupError(Exception):
    """Unit propagation reached a fixpoint without a conflict."""

    def __init__(self, lits, clause_id=None):
        self.lits = tuple(lits)
        self.clause_id = clause_id
        where = f" (clause id {clause_id})" if clause_id is not None else ""
        super().__init__(f"clause {list(self.lits)}{where} is not RUP")


class InvariantViolation(RuntimeError):
    pass


class UnitRef(NamedTuple):
    """A derived top-level unit used as a chain member."""

    lit: int

    @property
    def lits(self) -> Tuple[int, ...]:
        return (self.lit,)


ChainMember = Union[Clause, UnitRef]


class ResolutionChain(NamedTuple):
    clauses: List[ChainMember]
    pivots: List[int]


def resolve_chain(chain: ResolutionChain) -> Tuple[int, ...]:
    """Apply the resolution rule left to right and return the resolvent.

    Raises ``ValueError`` when the chain is not a well-formed trivial
    resolution (missing/repeated pivot, tautological resolvent).
    """
    if len(chain.pivots) != len(chain.clauses) - 1:
        raise ValueError("need exactly one pivot per resolution step")
    if len(set(chain.pivots)) != len(chain.pivots):
        raise ValueError("pivots are not distinct")
    current = set(chain.clauses[0].lits)
    for member, pivot in zip(chain.clauses[1:], chain.pivots):
        other = set(member.lits)
        if pivot in current and -pivot in other:
            current.discard(pivot)
            other.discard(-pivot)
        elif -pivot in current and pivot in other:
            current.discard(-pivot)
            other.discard(pivot)
        else:
            raise ValueError(f"pivot {pivot} does not clash")
        current |= other
        for lit in current:
            if -lit in current:
                raise ValueError(f"tautological resolvent on {abs(lit)}")
    return tuple(sorted(current, key=lambda l: (abs(l), l < 0)))


class Propagator:
    """Trail, reasons and two-watched-literal index over attached clauses.

    Literal-indexed arrays use Python's negative indexing: for capacity
    ``n`` the list has ``2n + 1`` slots, ``arr[v]`` for positive and
    ``arr[-v]`` for negative literals.
    """

    def __init__(self, num_vars: int = 0, num_colors: int = 1):
        self.cap = 0
        self.val: List[int] = [0]
        self.watches: List[List[Clause]] = [[]]
        self.reason: List[Optional[ChainMember]] = [None]
        self.pos: List[int] = [-1]
        self.trail: List[int] = []
        self.head = 0
        self.units: List[Clause] = []
        self.empties: List[Clause] = []
        self.num_colors = num_colors
        self.top_conflict: Optional[Clause] = None
        self.dirty = False
        self.color_ordered = False
        self._settled_mode = False
        # called with (literal, reason) pairs dropped from the top-level trail
        self.on_shrink: Optional[Callable[[list], None]] = None
        self.ensure_vars(num_vars)

    # ------------------------------------------------------------------ setup
    def ensure_vars(self, n: int) -> None:
        if n <= self.cap:
            return
        old = self.cap
        extra = n - old

        def regrow(arr, make):
            pos = arr[1:old + 1]
            neg = arr[old + 1:]
            return [arr[0]] + pos + [make() for _ in range(extra)] + \
                [make() for _ in range(extra)] + neg

        self.val = regrow(self.val, int)
        self.watches = regrow(self.watches, list)
        self.reason.extend([None] * extra)
        self.pos.extend([-1] * extra)
        self.cap = n

    def value(self, lit: int) -> int:
        """1 true, -1 false, 0 unassigned."""
        if abs(lit) > self.cap:
            return 0
        return self.val[lit]

    # ------------------------------------------------------------ assignment
    def _assign(self, lit: int, reason) -> None:
        v = lit if lit > 0 else -lit
        self.val[lit] = 1
        self.val[-lit] = -1
        self.reason[v] = reason
        self.pos[v] = len(self.trail)
        self.trail.append(lit)

    def _backtrack(self, size: int) -> List[int]:
        trail = self.trail
        val = self.val
        removed = trail[size:]
        for lit in removed:
            v = lit if lit > 0 else -lit
            val[lit] = 0
            val[-lit] = 0
            self.reason[v] = None
            self.pos[v] = -1
        del trail[size:]
        if self.head > size:
            self.head = size
        return removed

    # ------------------------------------------------------- attach / detach
    def attach(self, c: Clause) -> None:
        n = len(c.lits)
        if n:
            self.ensure_vars(max(abs(l) for l in c.lits))
        if n == 0:
            self.empties.append(c)
            if self.top_conflict is None:
                self.top_conflict = c
            return
        if n == 1:
            self.units.append(c)
            if self.color_ordered:
                self.dirty = True
                return
            lit = c.lits[0]
            v = self.val[lit]
            if v == 0:
                self._assign(lit, c)
            elif v == -1 and self.top_conflict is None:
                self.top_conflict = c
            return
        # start from the clause's own order so attach is history-free
        c.w = w = list(c.lits)
        val = self.val
        # prefer non-false watches, then false ones assigned latest
        w.sort(key=lambda l: (val[l] == -1,
                              -self.pos[abs(l)] if val[l] == -1 else 0))
        self.watches[w[0]].append(c)
        self.watches[w[1]].append(c)
        if self.color_ordered:
            if val[w[1]] == -1 and val[w[0]] != 1:
                self.dirty = True
            return
        if val[w[1]] == -1 and val[w[0]] != 1 and self.top_conflict is None:
            # unit or conflicting under the current top-level trail
            self._settle_new(c)

    def _settle_new(self, c: Clause) -> None:
        w = c.w
        if self.val[w[0]] == 0:
            self._assign(w[0], c)
        else:
            self.top_conflict = c

    def detach(self, c: Clause) -> None:
        n = len(c.lits)
        if n == 0:
            self.empties.remove(c)
            if self.top_conflict is c:
                self.top_conflict = None
                self.dirty = True
            return
        if n == 1:
            self.units.remove(c)
        else:
            self.watches[c.w[0]].remove(c)
            self.watches[c.w[1]].remove(c)
        if self.top_conflict is c:
            self.top_conflict = None
            self.dirty = True
        lit = self.reason_lit(c)
        if lit is not None:
            self.shrink_from(self.pos[abs(lit)])

    def reason_lit(self, c: Clause) -> Optional[int]:
        for lit in c.lits:
            if self.val[lit] == 1 and self.reason[abs(lit)] is c:
                return lit
        return None

    def shrink_from(self, position: int) -> List[int]:
        if self.on_shrink is not None:
            dropped = [(lit, self.reason[abs(lit)]) for lit in self.trail[position:]]
        removed = self._backtrack(position)
        self.dirty = True
        self.top_conflict = None
        if removed and self.on_shrink is not None:
            self.on_shrink(dropped)
        return removed

    def reset_trail(self) -> None:
        self._backtrack(0)
        self.head = 0
        self.top_conflict = None
        self.dirty = True

    # ------------------------------------------------------------ propagation
    def _propagate(self, max_color: int = 0) -> Optional[Clause]:
        val = self.val
        watches = self.watches
        trail = self.trail
        reason = self.reason
        pos = self.pos
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
                if max_color and c.range.kmax > max_color:
                    ws[j] = c
                    j += 1
                    continue
                w = c.w
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
                        return c
                    v = first if first > 0 else -first
                    val[first] = 1
                    val[-first] = -1
                    reason[v] = c
                    pos[v] = len(trail)
                    trail.append(first)
            del ws[j:]
        return None

    def propagate(self) -> Optional[Clause]:
        """Propagate to fixpoint; return a falsified clause or ``None``."""
        if self.empties:
            return self.empties[0]
        return self._propagate()

    def propagate_color_ordered(self, base: Optional[int] = None) -> Optional[Clause]:
        """Propagate in color iterations: iteration ``i`` only uses clauses
        whose range ends at or below ``i``. The last iteration is
        unrestricted, so the fixpoint and verdict equal :meth:`propagate`.

        With ``base`` omitted the whole trail is rebuilt from the unit
        clauses, so units obey the color order too.
        """
        if self.empties:
            return self.empties[0]
        if base is None:
            self._backtrack(0)
            base = 0
            rebuild = True
        else:
            rebuild = False
        for i in range(1, self.num_colors + 1):
            if rebuild:
                for u in self.units:
                    if u.range.kmax <= i:
                        lit = u.lits[0]
                        v = self.val[lit]
                        if v == 0:
                            self._assign(lit, u)
                        elif v == -1:
                            return u
            self.head = base
            conflict = self._propagate(0 if i == self.num_colors else i)
            if conflict is not None:
                return conflict
        return None

    def settle(self) -> Optional[Clause]:
        """Bring the top-level trail to fixpoint; return a top-level
        conflict if the attached clauses are refuted by propagation."""
        if self.empties:
            return self.empties[0]
        if self._settled_mode != self.color_ordered:
            self.dirty = True
            self._settled_mode = self.color_ordered
        if self.dirty:
            self.dirty = False
            self.top_conflict = None
            self._backtrack(0)
            if self.color_ordered:
                self.top_conflict = self.propagate_color_ordered()
                return self.top_conflict
            # units in attach order, each propagated before the next
            self.head = 0
            for u in self.units:
                lit = u.lits[0]
                v = self.val[lit]
                if v == 0:
                    self._assign(lit, u)
                elif v == -1:
                    self.top_conflict = u
                    return u
                conflict = self._propagate()
                if conflict is not None:
                    self.top_conflict = conflict
                    return conflict
        if self.top_conflict is not None:
            return self.top_conflict
        self.top_conflict = self._propagate()
        return self.top_conflict

    # --------------------------------------------------------------- analysis
    def assume_negation(self, lits: Sequence[int]) -> Optional[int]:
        """Push ``-l`` as an assumption for each unassigned ``l`` in ``lits``.

        Returns a literal of ``lits`` that is already true (the clause is
        subsumed by the trail), else ``None``.
        """
        for lit in lits:
            if abs(lit) > self.cap:
                self.ensure_vars(abs(lit))
        for lit in lits:
            if self.val[lit] == 1:
                return lit
        for lit in lits:
            if self.val[lit] == 0:
                self._assign(-lit, None)
        return None

    def analyze(self, conflict: ChainMember, mark_core: bool = False,
                units_from: Optional[int] = None, skip_lit: int = 0,
                unit_member: Optional[Callable[[int], ChainMember]] = None
                ) -> ResolutionChain:
        """Resolve the conflict backwards along the trail.

        Every implied literal in the current resolvent is resolved away with
        its reason; assumption literals stay. With ``units_from`` set, trail
        literals below that position are resolved with a derived unit
        (``unit_member(lit)``) instead of being expanded. ``skip_lit`` is a
        true literal of the starting clause that is kept in the resolvent.
        """
        reason = self.reason
        pos = self.pos
        trail = self.trail
        members: List[ChainMember] = [conflict]
        pivots: List[int] = []
        seen = set()
        pending = 0
        for lit in conflict.lits:
            if lit == skip_lit:
                continue
            v = abs(lit)
            if self.val[lit] != -1:
                raise InvariantViolation(f"conflict literal {lit} is not false")
            seen.add(v)
            if reason[v] is not None:
                pending += 1
        idx = len(trail) - 1
        while pending and idx >= 0:
            lit = trail[idx]
            idx -= 1
            v = lit if lit > 0 else -lit
            if v not in seen:
                continue
            r = reason[v]
            if r is None:
                continue
            pending -= 1
            pivots.append(v)
            if units_from is not None and pos[v] < units_from and len(r.lits) > 1:
                members.append(unit_member(lit))
                continue
            members.append(r)
            for other in r.lits:
                ov = abs(other)
                if ov == v or ov in seen:
                    continue
                if self.val[other] != -1:
                    raise InvariantViolation(f"reason literal {other} is not false")
                seen.add(ov)
                if reason[ov] is not None:
                    pending += 1
        if pending:
            raise InvariantViolation("implied literal without reason on trail")
        if mark_core:
            for m in members:
                if isinstance(m, Clause):
                    m.core = True
        return ResolutionChain(members, pivots)

    def rup_check(self, lits: Sequence[int], mark_core: bool = False,
                  clause_id: Optional[int] = None, use_units: bool = False,
                  unit_member: Optional[Callable[[int], ChainMember]] = None
                  ) -> ResolutionChain:
        """Check that propagation on the attached clauses and the negation
        of ``lits`` conflicts; return the chain deriving a subset of
        ``lits``. The top-level trail is left as it was."""
        conflict = self.settle()
        size = len(self.trail)
        units_from = size if use_units else None
        if conflict is not None:
            return self.analyze(conflict, mark_core, units_from, 0, unit_member)
        sat = self.assume_negation(lits)
        if sat is not None:
            v = abs(sat)
            r = self.reason[v]
            try:
                if use_units and len(r.lits) > 1:
                    chain = ResolutionChain([unit_member(sat)], [])
                else:
                    chain = self.analyze(r, mark_core, units_from, sat, unit_member)
            finally:
                self._backtrack(size)
            return chain
        try:
            if self.color_ordered:
                conflict = self.propagate_color_ordered(base=size)
            else:
                conflict = self._propagate()
            if conflict is None:
                raise NoRupError(lits, clause_id)
            return self.analyze(conflict, mark_core, units_from, 0, unit_member)
        finally:
            self._backtrack(size)
            self.head = size

    def unit_chain(self, lit: int) -> ResolutionChain:
        """Chain deriving the top-level unit ``lit`` from its reason and the
        units of the reason's other literals."""
        v = abs(lit)
        r = self.reason[v]
        members: List[ChainMember] = [r]
        pivots = []
        others = [l for l in r.lits if abs(l) != v]
        others.sort(key=lambda l: -self.pos[abs(l)])
        for other in others:
            ov = abs(other)
            rr = self.reason[ov]
            members.append(rr if len(rr.lits) == 1 else UnitRef(-other))
            pivots.append(ov)
        return ResolutionChain(members, pivots)

    # ------------------------------------------------------------- utilities
    def watch_snapshot(self) -> dict:
        """Mapping clause id -> set of watched literals (for invariants)."""
        snap = {}
        for lit_list in self.watches:
            for c in lit_list:
                snap[c.id] = frozenset(c.w[:2])
        return snap

    def prioritize_core(self) -> None:
        """Move core clauses to the front of every watch list."""
        for ws in self.watches:
            if ws:
                ws.sort(key=lambda c: not c.core)


def chain_range(chain: ResolutionChain, range_of: Callable[[ChainMember], Range]) -> Range:
    result = range_of(chain.clauses[0])
    for m in chain.clauses[1:]:
        result = range_join(result, range_of(m))
    return result

