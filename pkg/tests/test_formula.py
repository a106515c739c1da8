import itertools

from hypothesis import given, strategies as st

from drupforge.formula import (FALSE, TRUE, AND_KIND, IncompleteAssignmentError, eval_formula,
                               mk_and, mk_lit, mk_or, node_count, postorder, simplify,
                               variables)

x1, x2, x3 = mk_lit(1), mk_lit(2), mk_lit(3)


def test_constructor_examples():
    assert mk_and([TRUE, x1]) is x1
    assert mk_or([x1, FALSE, x1]) is x1
    f = mk_and([x1, mk_lit(-1)])
    assert f.kind == AND_KIND and f.children == (x1, mk_lit(-1))
    assert mk_and([]) is TRUE and mk_or([]) is FALSE
    assert mk_and([x1, FALSE]) is FALSE and mk_or([TRUE, x2]) is TRUE


def test_hash_consing():
    assert mk_and([x1, x2]) is mk_and([mk_lit(1), mk_lit(2)])
    assert mk_and([x1, x2]) is not mk_and([x2, x1])
    assert mk_or([mk_and([x1, x2]), x3]).children[0] is mk_and([x1, x2])


def test_eval_examples():
    f = mk_and([x1, mk_or([x2, mk_lit(-3)])])
    assert eval_formula(f, {1: True, 2: False, 3: False})
    assert eval_formula(TRUE, {})
    assert not eval_formula(mk_lit(-2), {2: True})


def test_eval_incomplete():
    import pytest
    with pytest.raises(IncompleteAssignmentError):
        eval_formula(x1, {})


def test_shared_nodes_counted_once():
    a = mk_and([x1, x2])
    roots = [a, mk_or([a, x3])]
    assert node_count(roots) == 5
    order = postorder(roots)
    index = {id(n): i for i, n in enumerate(order)}
    for n in order:
        assert all(index[id(c)] < index[id(n)] for c in n.children)


def test_simplify_flattens():
    f = mk_and([mk_and([x1, x2]), x3])
    (g,) = simplify([f])
    assert g is mk_and([x1, x2, x3])


def formulas(depth=3):
    leaf = st.one_of(st.sampled_from([TRUE, FALSE]),
                     st.integers(-3, 3).filter(bool).map(mk_lit))
    return st.recursive(leaf, lambda ch: st.one_of(
        st.lists(ch, max_size=3).map(mk_and), st.lists(ch, max_size=3).map(mk_or)),
        max_leaves=12)


@given(formulas())
def test_simplify_preserves_semantics(f):
    (g,) = simplify([f])
    for bits in itertools.product((False, True), repeat=3):
        a = {1: bits[0], 2: bits[1], 3: bits[2]}
        assert eval_formula(f, a) == eval_formula(g, a)
    assert variables(g) <= variables(f)


def test_deep_chain_is_iterative():
    f = x1
    for i in range(5000):
        f = mk_and([f, mk_lit(2 + i % 3)]) if i % 2 else mk_or([f, mk_lit(-(2 + i % 3))])
    assert eval_formula(f, {1: True, 2: True, 3: True, 4: True}) in (True, False)
    assert len(postorder([f])) > 1000
