import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinterp.generators import local_order_problem, generate, random_boolean
from multinterp.logic import FALSE, TRUE, LogicError, Not, Or, Var, evaluate
from multinterp.synthesis import (SynthesisConfig, Unrealizable, expand_and_negate, synthesize,
                                  verify_witnesses)

from bool_oracle import realizable, witnesses_hold


def test_partition_symbols_and_renaming():
    ps = expand_and_negate(generate("illu", 2))
    assert ps.num_partitions == 4
    assert ps.local_symbols_are_private()
    names = {s.name for s in ps.global_symbols()}
    assert {"i1", "i2", "pos", "neg"} <= names
    assert not any("@" in n for n in names)
    assert {s.name for s in ps.symbols[0b10]} >= {"o1@TF", "o2@TF"}


def test_control_cap():
    with pytest.raises(LogicError):
        expand_and_negate(generate("illu", 3), max_n=2)


def test_warning_above_eight_controls():
    from multinterp.generators import const
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        expand_and_negate(const(9))
    assert any(issubclass(x.category, RuntimeWarning) for x in w)


def test_local_order_pipeline_result():
    p = local_order_problem()
    res = synthesize(p)
    a, b = (Var(p.store.bool_atom(p.store.symbol(x))) for x in "ab")
    from multinterp.interpolation import equivalent
    assert equivalent(p.store, res.witnesses[0], b)
    assert equivalent(p.store, res.witnesses[1], Or(Not(b), a))
    assert res.verified


@pytest.mark.parametrize("fam,n", [("illu", 2), ("illu", 3), ("const", 2), ("chain", 2)])
def test_generated_problems_verify(fam, n):
    p = generate(fam, n)
    res = synthesize(p)
    assert res.verified
    assert verify_witnesses(p, res.witnesses).ok
    assert res.report["pruned_size"] <= res.report["proof_size"]


def test_const_witnesses_are_constants():
    res = synthesize(generate("const", 3))
    assert all(w in (TRUE, FALSE) for w in res.witnesses)


def test_verify_rejects_wrong_witnesses():
    p = generate("illu", 2)
    v = verify_witnesses(p, (TRUE, TRUE))
    assert not v.ok and v.counterexample


def test_circuit_agrees_with_witness_formulas():
    p = generate("illu", 3)
    res = synthesize(p)
    sels = sorted(res.circuit.selectors())
    for k in range(1 << len(sels)):
        val = {a: bool(k >> j & 1) for j, a in enumerate(sels)}
        expect = tuple(evaluate(w, lambda a: val.get(a, False)) for w in res.witnesses)
        assert res.circuit.evaluate(lambda a: val.get(a, False)) == expect


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 2))
def test_boolean_problems_against_oracle(seed, n_in, n_ctl):
    p = random_boolean(random.Random(seed), n_in, n_ctl)
    expected = realizable(p)
    try:
        res = synthesize(p, SynthesisConfig())
    except Unrealizable:
        assert not expected
        return
    assert expected
    assert res.verified
    assert witnesses_hold(p, res.witnesses)
