import pytest
from hypothesis import given, strategies as st

from drupforge.model import (ColoredCnf, MalformedLiteralError, Range, Tautology,
                             compute_var_ranges, normalize_clause, range_join)

lits = st.integers(-6, 6).filter(bool)


def test_normalize_examples():
    assert normalize_clause([2, 1, 2]) == (1, 2)
    assert normalize_clause([1, -1]) is Tautology
    assert normalize_clause([-3]) == (-3,)
    assert normalize_clause([]) == ()


@pytest.mark.parametrize("bad", [[0], [1, "2"], [1.0]])
def test_normalize_rejects_malformed(bad):
    with pytest.raises(MalformedLiteralError):
        normalize_clause(bad)


@given(st.lists(lits, max_size=8))
def test_normalize_is_set_semantics(xs):
    out = normalize_clause(xs)
    if any(-x in xs for x in xs):
        assert out is Tautology
    else:
        assert set(out) == set(xs)
        assert len(out) == len(set(xs))
        assert normalize_clause(out) == out


def test_range_join_examples():
    assert range_join(Range(1, 1), Range(2, 3)) == Range(1, 3)
    assert range_join(Range(2, 2), Range(2, 2)) == Range(2, 2)
    assert range_join(Range(1, 2), Range(3, 3)) == Range(1, 3)


def test_range_validation():
    with pytest.raises(ValueError):
        Range(2, 1)
    with pytest.raises(ValueError):
        Range(0, 1)


@given(st.integers(1, 9), st.integers(0, 4), st.integers(1, 9), st.integers(0, 4))
def test_range_join_lattice(a, da, b, db):
    r, s = Range(a, a + da), Range(b, b + db)
    j = range_join(r, s)
    assert j == range_join(s, r)
    assert j.kmin <= min(r.kmin, s.kmin) and j.kmax >= max(r.kmax, s.kmax)
    assert range_join(j, r) == j


def test_colored_cnf_ranges_and_stripes():
    cnf = ColoredCnf([((1, 2), 1), ((-2, 3), 2), ((-3,), 3)])
    assert cnf.num_colors == 3 and cnf.num_vars == 3
    assert cnf.var_range == {1: Range(1, 1), 2: Range(1, 2), 3: Range(2, 3)}
    assert cnf.is_striped() is None
    cnf.add((1, -3), 3)
    assert cnf.is_striped() == 1
    assert cnf.partition(3) == [(-3,), (1, -3)]


def test_compute_var_ranges_matches_manual():
    clauses = [((1,), 2), ((-1, 2), 5), ((2,), 3)]
    assert compute_var_ranges(clauses) == {1: Range(2, 5), 2: Range(3, 5)}


def test_colors_must_be_positive():
    with pytest.raises(ValueError):
        ColoredCnf([((1,), 0)])
