"""Forward replay of a trimmed proof as chain resolutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .model import Clause, Range, range_join
from .propagate import (ChainMember, NoRupError, Propagator, ResolutionChain, UnitRef,
                        chain_range, resolve_chain)
from .trimmer import InvalidProofError, ProofTracer


class ResolutionSink:
    """Consumer of chain-resolution steps, delivered in dependency order."""

    def chain_resolution_clause(self, resolvent: Clause, chain: ResolutionChain) -> None:
        pass

    def chain_resolution_unit(self, lit: int, chain: ResolutionChain) -> None:
        pass

    def conclude_empty(self, chain: ResolutionChain) -> None:
        pass


@dataclass
class ReplayStats:
    clauses: int = 0
    units: int = 0
    steps: int = 0

    @property
    def resolvents(self) -> int:
        return self.clauses + self.units + 1


class ContractViolation(RuntimeError):
    pass


class WitnessRecorder(ResolutionSink):
    """Records every delivery and checks ordering and chain soundness."""

    def __init__(self, check: bool = True):
        self.check = check
        self.entries: List[Tuple[object, ResolutionChain]] = []
        self._clauses = set()
        self._units = set()
        self.empty_chain: Optional[ResolutionChain] = None

    def _verify(self, chain: ResolutionChain, target) -> None:
        for m in chain.clauses:
            if isinstance(m, UnitRef):
                if m.lit not in self._units:
                    raise ContractViolation(f"unit {m.lit} used before delivery")
            elif not m.original and m.id not in self._clauses:
                raise ContractViolation(f"clause {m.id} used before delivery")
        resolvent = set(resolve_chain(chain))
        if not resolvent <= set(target):
            raise ContractViolation(f"chain derives {sorted(resolvent)}, "
                                    f"which does not subsume {list(target)}")

    def chain_resolution_clause(self, resolvent, chain):
        if self.check:
            self._verify(chain, resolvent.lits)
        self._clauses.add(resolvent.id)
        self.entries.append((resolvent, chain))

    def chain_resolution_unit(self, lit, chain):
        if self.check:
            self._verify(chain, (lit,))
        self._units.add(lit)
        self.entries.append((UnitRef(lit), chain))

    def conclude_empty(self, chain):
        if self.check:
            self._verify(chain, ())
        self.empty_chain = chain
        self.entries.append((None, chain))

    def signature(self) -> list:
        """Id/literal-level rendering, for determinism comparisons."""
        def ref(m):
            return ("u", m.lit) if isinstance(m, UnitRef) else ("c", m.id)
        out = []
        for res, chain in self.entries:
            key = None if res is None else ref(res)
            out.append((key, [ref(m) for m in chain.clauses], list(chain.pivots)))
        return out


class _Tee(ResolutionSink):
    def __init__(self, sinks):
        self.sinks = sinks

    def chain_resolution_clause(self, resolvent, chain):
        for s in self.sinks:
            s.chain_resolution_clause(resolvent, chain)

    def chain_resolution_unit(self, lit, chain):
        for s in self.sinks:
            s.chain_resolution_unit(lit, chain)

    def conclude_empty(self, chain):
        for s in self.sinks:
            s.conclude_empty(chain)


def tee(*sinks: ResolutionSink) -> ResolutionSink:
    return _Tee(list(sinks))


def replay(tracer: ProofTracer, sink: ResolutionSink, color_ordered: bool = False) -> ReplayStats:
    """Walk the core forward, re-deriving each core learned clause by RUP
    and streaming its chain to ``sink``; ends with ``conclude_empty``.

    Learned clause ranges are set to the join of their chain's ranges.
    Top-level units are delivered once, just before their first use.
    """
    end = tracer.empty_index()
    if end is None or not tracer.stack[end][0].core:
        raise RuntimeError("replay requires a trimmed refutation")
    num_colors = max((c.range.kmax for c in tracer.originals()), default=1)
    prop = Propagator(tracer.prop.cap, num_colors)
    prop.color_ordered = color_ordered
    unit_range: Dict[int, Range] = {}
    stats = ReplayStats()

    def range_of(m: ChainMember) -> Range:
        if isinstance(m, UnitRef):
            return unit_range[m.lit]
        return m.range

    def ensure_unit(lit: int) -> ChainMember:
        todo = [lit]
        while todo:
            top = todo[-1]
            if top in unit_range:
                todo.pop()
                continue
            chain = prop.unit_chain(top)
            missing = [m.lit for m in chain.clauses
                       if isinstance(m, UnitRef) and m.lit not in unit_range]
            if missing:
                todo.extend(missing)
                continue
            todo.pop()
            unit_range[top] = chain_range(chain, range_of)
            stats.units += 1
            stats.steps += len(chain.pivots)
            sink.chain_resolution_unit(top, chain)
        return UnitRef(lit)

    try:
        return _replay_walk(tracer, end, prop, sink, stats, range_of, ensure_unit)
    finally:
        # the walk reorders the shared watch lists of the clauses
        tracer._rebuild_live()


def _replay_walk(tracer, end, prop, sink, stats, range_of, ensure_unit) -> ReplayStats:
    for c, deleted in tracer.stack[:end + 1]:
        if not c.core:
            continue
        if deleted:
            prop.detach(c)
            continue
        if c.original:
            prop.attach(c)
            continue
        try:
            chain = prop.rup_check(c.lits, clause_id=c.id, use_units=True,
                                   unit_member=ensure_unit)
        except NoRupError:
            raise InvalidProofError(c.id, c.lits) from None
        c.range = chain_range(chain, range_of)
        stats.steps += len(chain.pivots)
        if not c.lits:
            sink.conclude_empty(chain)
            return stats
        stats.clauses += 1
        sink.chain_resolution_clause(c, chain)
        prop.attach(c)
    raise RuntimeError("unreachable: empty clause not replayed")


def record_witness(tracer: ProofTracer, color_ordered: bool = False) -> WitnessRecorder:
    rec = WitnessRecorder()
    replay(tracer, rec, color_ordered)
    return rec
