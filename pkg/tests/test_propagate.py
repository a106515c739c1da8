import pytest
from hypothesis import given, settings, strategies as st

from drupforge.model import Clause, Range, singleton_range
from drupforge.propagate import (NoRupError, Propagator, ResolutionChain, UnitRef,
                                 chain_range, resolve_chain)
from oracles import up_all_orders


def make(clauses, colors=None, num_colors=1):
    p = Propagator(num_colors=num_colors)
    out = []
    for i, lits in enumerate(clauses, 1):
        c = Clause(i, lits, True, singleton_range(colors[i - 1] if colors else 1))
        p.attach(c)
        out.append(c)
    return p, out


def check_invariants(p):
    seen = set()
    for i, lit in enumerate(p.trail):
        v = abs(lit)
        assert v not in seen
        seen.add(v)
        assert p.pos[v] == i
        r = p.reason[v]
        if r is not None:
            assert lit in r.lits
            for other in r.lits:
                if other != lit:
                    assert p.val[other] == -1 and p.pos[abs(other)] < i
    counts = {}
    for lit in range(-p.cap, p.cap + 1):
        for c in p.watches[lit]:
            assert lit in c.w[:2]
            counts[c.id] = counts.get(c.id, 0) + 1
    assert all(n == 2 for n in counts.values())


# ------------------------------------------------------------ attach/propagate
def test_attach_unit_binary_empty():
    p, (u,) = make([(1,)])
    assert p.trail == [1] and p.reason[1] is u
    p, (b,) = make([(1, 2)])
    assert p.trail == [] and set(b.w[:2]) == {1, 2}
    p, (e,) = make([()])
    assert p.top_conflict is e and p.propagate() is e


def test_propagate_examples():
    p, cs = make([(1, 2), (-1, 2), (-2,)])
    assert p.propagate() is not None
    assert "conflict" in up_all_orders([(1, 2), (-1, 2), (-2,)])
    assert up_all_orders([(1, 2), (-1, 2), (-2,)]) == {"conflict"}
    p, _ = make([(1, 2)])
    assert p.propagate() is None and p.trail == []
    p, _ = make([(1,), (-1, 2)])
    assert p.propagate() is None and p.trail == [1, 2]


def test_color_ordered_examples():
    cl, col = [(1,), (-1, 2), (-2,)], [1, 2, 2]
    p, _ = make(cl, col, 2)
    p.color_ordered = True
    assert p.settle() is not None
    # iteration 1 sees only the color-1 unit
    p2, _ = make(cl, col, 2)
    p2.reset_trail()
    for u in p2.units:
        if u.range.kmax <= 1:
            p2._assign(u.lits[0], u)
    p2.head = 0
    assert p2._propagate(1) is None and p2.trail == [1]

    p, _ = make([(1,), (-1,)], [2, 1], 2)
    p.color_ordered = True
    conflict = p.settle()
    assert conflict is not None and conflict.lits == (1,)
    assert p.trail == [-1]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=3,
                         unique_by=abs), max_size=9),
       st.booleans())
def test_propagation_matches_all_orders_oracle(clauses, color_ordered):
    colors = [1 + (i % 3) for i in range(len(clauses))]
    p, _ = make(clauses, colors, 3)
    p.color_ordered = color_ordered
    conflict = p.settle()
    outcomes = up_all_orders([tuple(c) for c in clauses])
    if conflict is None:
        check_invariants(p)
        assert outcomes == {frozenset(p.trail)}
    else:
        assert "conflict" in outcomes
        assert len(outcomes) == 1


# ---------------------------------------------------------------- analysis
def test_rup_empty_chain_example():
    p, (c1, c2, c3) = make([(1, 2), (-1, 2), (-2,)])
    chain = p.rup_check(())
    assert resolve_chain(chain) == ()
    assert set(map(abs, chain.pivots)) == {1, 2}
    assert set(chain.clauses) == {c1, c2, c3}


def test_rup_unit_over_g_prime():
    p, (c1, c2) = make([(1, 2), (-1, 2)])
    chain = p.rup_check((2,))
    assert len(chain.clauses) == 2 and chain.pivots == [1]
    assert resolve_chain(chain) == (2,)
    assert p.trail == []


def test_rup_subsumed_by_trail():
    p, (u,) = make([(1,)])
    chain = p.rup_check((1, 2))
    assert chain.clauses == [u] and chain.pivots == []


def test_rup_conflict_of_assumptions_only():
    p, (c,) = make([(1, 2)])
    chain = p.rup_check((1, 2))
    assert chain.clauses == [c] and chain.pivots == []


def test_no_rup():
    p, _ = make([(1, 2)])
    with pytest.raises(NoRupError) as e:
        p.rup_check((1,), clause_id=7)
    assert e.value.clause_id == 7


def test_mark_core():
    p, (c1, c2, c3) = make([(1, 2), (-1, 3), (-3,)])
    p.rup_check((2,), mark_core=True)
    assert c1.core and c2.core and c3.core


@settings(max_examples=300, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=3,
                         unique_by=abs), max_size=10),
       st.lists(st.integers(-5, 5).filter(bool), max_size=3, unique_by=abs),
       st.booleans())
def test_rup_check_restores_state_and_chain_is_sound(clauses, cand, color_ordered):
    p, _ = make(clauses, [1 + i % 2 for i in range(len(clauses))], 2)
    p.color_ordered = color_ordered
    p.settle()
    trail, reasons = list(p.trail), [p.reason[abs(l)] for l in p.trail]
    watched = p.watch_snapshot()
    outcomes = up_all_orders([tuple(c) for c in clauses] + [(-l,) for l in cand])
    try:
        chain = p.rup_check(cand)
    except NoRupError:
        assert "conflict" not in outcomes
    else:
        assert outcomes == {"conflict"}
        assert set(resolve_chain(chain)) <= set(cand)
    assert p.trail == trail
    assert [p.reason[abs(l)] for l in p.trail] == reasons
    assert set(p.watch_snapshot()) == set(watched)
    check_invariants(p)


def test_detach_reason_shrinks_trail():
    p, (u, b) = make([(1,), (-1, 2)])
    p.settle()
    assert p.trail == [1, 2]
    dropped = []
    p.on_shrink = dropped.extend
    p.detach(u)
    assert p.trail == [] and [l for l, _ in dropped] == [1, 2]
    p.on_shrink = None
    p.attach(u)
    assert p.settle() is None and p.trail == [1, 2]


def test_unit_chain_uses_unit_refs():
    p, (u, b, c) = make([(1,), (-1, 2), (-2, 3)])
    p.settle()
    chain = p.unit_chain(3)
    assert chain.clauses == [c, UnitRef(2)] and chain.pivots == [2]
    assert resolve_chain(chain) == (3,)


# ------------------------------------------------------------ resolve_chain
def test_resolve_chain_rejects_malformed():
    a, b = Clause(1, (1, 2)), Clause(2, (-1, 2))
    with pytest.raises(ValueError):
        resolve_chain(ResolutionChain([a, b], []))
    with pytest.raises(ValueError):
        resolve_chain(ResolutionChain([a, b], [2]))
    with pytest.raises(ValueError):
        resolve_chain(ResolutionChain([Clause(1, (1, 2)), Clause(2, (-1, -2))], [1]))
    with pytest.raises(ValueError):
        resolve_chain(ResolutionChain([a, b, Clause(3, (1, 3))], [1, 1]))


def test_chain_range_join():
    a = Clause(1, (1, 2), True, Range(1, 1))
    b = Clause(2, (-1, 2), True, Range(2, 2))
    assert chain_range(ResolutionChain([a, b], [1]), lambda m: m.range) == Range(1, 2)
