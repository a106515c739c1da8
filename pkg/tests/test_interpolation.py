import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from drupforge.formula import FALSE, TRUE, eval_formula, mk_and, mk_lit, mk_or, variables
from drupforge.generators import counter_bmc, random_striped
from drupforge.interpolation import (ContractViolationError, SequenceInterpolator,
                                     UnhousedVariableError, check_craig, combine,
                                     initial_partial_itp, interpolate, validate_sequence)
from drupforge.model import Clause, ColoredCnf, Range
from drupforge.propagate import ResolutionChain
from conftest import solve_cnf

x1, x2 = mk_lit(1), mk_lit(2)


def run(cnf, **kw):
    s, t, r = solve_cnf(cnf)
    assert r.unsat
    return interpolate(t, num_colors=cnf.num_colors, **kw).sequence


def test_initial_partial_examples():
    vr = {1: Range(1, 2)}
    assert initial_partial_itp((1,), 1, 1, vr) is x1
    assert initial_partial_itp((-1,), 2, 1, vr) is TRUE
    assert initial_partial_itp((3,), 1, 1, {3: Range(1, 1)}) is FALSE


def test_combine_examples():
    vr = {1: Range(1, 1), 2: Range(1, 2)}
    assert combine(1, x2, x2, 1, vr) is x2
    assert combine(2, x2, TRUE, 1, vr) is x2
    assert combine(2, TRUE, TRUE, 1, vr) is TRUE
    assert combine(1, FALSE, FALSE, 1, vr) is FALSE
    with pytest.raises(UnhousedVariableError):
        combine(5, TRUE, TRUE, 1, vr)


def test_two_partition_example():
    cnf = ColoredCnf([((1, 2), 1), ((-1, 2), 1), ((-2,), 2)])
    assert run(cnf) == [x2]


def test_three_partition_example():
    cnf = ColoredCnf([((1,), 1), ((-1, 2), 2), ((-2,), 3)])
    seq = run(cnf)
    assert seq == [x1, x2]
    assert validate_sequence(cnf, seq)


def test_single_partition():
    assert run(ColoredCnf([((1,), 1), ((-1,), 1)])) == []


def test_validate_sequence_failures():
    cnf = ColoredCnf([((1,), 1), ((-1,), 2)])
    v = validate_sequence(cnf, [TRUE])
    assert not v and v.step == 2
    cnf = ColoredCnf([((1, 3), 1), ((-1,), 1), ((-3, 2), 1), ((-2,), 2)])
    v = validate_sequence(cnf, [mk_or([mk_lit(3), x2])])
    assert not v and v.step == 1 and "variable 3" in v.reason
    assert not validate_sequence(cnf, [])


def test_contract_violation_on_undelivered():
    itp = SequenceInterpolator({1: Range(1, 2)}, 2)
    learned = Clause(3, (1,), False)
    orig = Clause(1, (-1,), True, Range(2, 2))
    with pytest.raises(ContractViolationError):
        itp.conclude_empty(ResolutionChain([learned, orig], [1]))
    with pytest.raises(ContractViolationError):
        itp.get_interpolant()


def brute_valid(cnf, seq, n):
    """Independent check of the implication conditions by enumeration."""
    full = [TRUE] + list(seq) + [FALSE]
    for bits in itertools.product((False, True), repeat=n):
        a = {v + 1: b for v, b in enumerate(bits)}
        for i in range(1, cnf.num_colors + 1):
            part = cnf.partition(i)
            if all(any(a[abs(l)] == (l > 0) for l in c) for c in part):
                if eval_formula(full[i - 1], a) and not eval_formula(full[i], a):
                    return False
    return True


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from([2, 3, 5]), st.booleans(), st.booleans())
def test_random_striped_interpolants(seed, n_colors, color_ordered, post):
    rng = random.Random(seed)
    n = rng.randint(5, 12)
    cnf = random_striped(n, rng.randint(n * 3, n * 7), n_colors, rng)
    s, t, r = solve_cnf(cnf)
    if not r.unsat:
        return
    seq = interpolate(t, color_ordered, num_colors=n_colors, post_simplify=post).sequence
    assert validate_sequence(cnf, seq)
    assert brute_valid(cnf, seq, n)
    for i, f in enumerate(seq, 1):
        for v in variables(f):
            assert cnf.var_range[v] == Range(i, i + 1)


def test_counter_bmc_interpolants():
    for seed in range(6):
        for n_colors in (2, 3, 5):
            cnf = counter_bmc(6, n_colors, seed)
            assert validate_sequence(cnf, run(cnf))


def test_broken_sequence_rejected():
    cnf = ColoredCnf([((1,), 1), ((-1, 2), 2), ((-2,), 3)])
    assert not validate_sequence(cnf, [x2, x1])
    assert not validate_sequence(cnf, [mk_lit(-1), x2])


def test_check_craig():
    a = [(1, 3), (-3,)]
    b = [(-1,)]
    assert check_craig(a, b, x1)
    assert check_craig(a, b, TRUE).step == 2
    assert check_craig(a, b, mk_and([x1, mk_lit(3)])).step == 1
    assert check_craig(a, b, mk_or([x1, mk_and([mk_lit(3), mk_lit(-3)])])).step == 3
