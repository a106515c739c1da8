import random

import pytest
from hypothesis import given, settings, strategies as st

from drupforge.generators import random_kcnf, random_striped
from drupforge.model import Clause, Range
from drupforge.propagate import ResolutionChain, UnitRef
from drupforge.replayer import (ContractViolation, ReplayStats, WitnessRecorder,
                                record_witness, replay, tee)
from drupforge.trimmer import ProofTracer
from conftest import solve_cnf, solve_traced

FAMILY = [(1, 2), (1, -2), (-1, 2), (-1, -2)]


def family(learned, colors=(1, 1, 1, 1)):
    t = ProofTracer()
    for i, (c, k) in enumerate(zip(FAMILY, colors), 1):
        t.on_add(i, c, True, k)
    for j, c in enumerate(learned, 5):
        t.on_add(j, c, False)
    return t


def test_family_delivery_order():
    t = family([(1,), (2,), ()])
    t.trim()
    rec = record_witness(t)
    kinds = [res for res, _ in rec.entries]
    assert kinds[-1] is None
    assert isinstance(kinds[0], Clause) and kinds[0].lits == (1,)
    final = rec.empty_chain
    lits = {m.lits for m in final.clauses}
    assert (1,) in lits or UnitRef(-1) not in final.clauses
    assert all(isinstance(m, UnitRef) or m.original or m.lits == (1,) for m in final.clauses)


def test_minimal_proof_single_conclude():
    t = ProofTracer()
    t.on_add(1, (1, 2), True, 1)
    t.on_add(2, (-1,), True, 1)
    t.on_add(3, (-2,), True, 2)
    t.on_add(4, (), False)
    t.trim()
    rec = record_witness(t)
    assert len(rec.entries) == 1 and rec.entries[0][0] is None


def test_learned_range_is_chain_join():
    t = ProofTracer()
    t.on_add(1, (1, 2), True, 1)
    t.on_add(2, (-1, 2), True, 2)
    t.on_add(3, (2,), False)
    t.on_add(4, (-2,), True, 2)
    t.on_add(5, (), False)
    t.trim()
    replay(t, WitnessRecorder())
    assert t.clauses[3].range == Range(1, 2)


def test_requires_trim():
    t = family([(1,), ()])
    with pytest.raises(RuntimeError):
        replay(t, WitnessRecorder())


def test_contract_violation_detected():
    rec = WitnessRecorder()
    learned = Clause(9, (2,), False)
    orig = Clause(1, (-2,), True)
    with pytest.raises(ContractViolation):
        rec.conclude_empty(ResolutionChain([learned, orig], [2]))
    with pytest.raises(ContractViolation):
        rec.conclude_empty(ResolutionChain([UnitRef(2), orig], [2]))
    with pytest.raises(ContractViolation):
        rec.chain_resolution_unit(3, ResolutionChain([Clause(2, (3, 4), True)], []))


def test_tee_fans_out():
    t = family([(1,), ()])
    t.trim()
    a, b = WitnessRecorder(), WitnessRecorder()
    replay(t, tee(a, b))
    assert a.signature() == b.signature()


def _instances(seed, count):
    rng = random.Random(seed)
    while count:
        clauses = random_kcnf(30, 135, rng)
        s, t, r = solve_traced(clauses, reduce_interval=15)
        if r.unsat:
            count -= 1
            yield t


@pytest.mark.parametrize("color_ordered", [False, True])
def test_witness_sound_and_counted(color_ordered):
    for t in _instances(4, 15):
        res = t.trim()
        rec = record_witness(t, color_ordered)
        stats = replay(t, WitnessRecorder(), color_ordered)
        assert len(rec.entries) == stats.resolvents
        assert stats.clauses == res.proof_len_after - 1
        assert record_witness(t, color_ordered).signature() == rec.signature()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 3, 5]), st.booleans())
def test_witness_on_striped_instances(seed, n_colors, color_ordered):
    rng = random.Random(seed)
    cnf = random_striped(rng.randint(8, 25), rng.randint(30, 120), n_colors, rng)
    s, t, r = solve_cnf(cnf, seed=seed % 3)
    if not r.unsat:
        return
    t.trim()
    rec = record_witness(t, color_ordered)
    for res, chain in rec.entries:
        if isinstance(res, Clause):
            assert res.range is not None
