import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodesplit.bench import random_network
from nodesplit.factors import Factor, ScopeError, condition, eliminate, max_out, multiply, product, sum_out

A, B, C = 0, 1, 2


def sec3_joint():
    prior = Factor.from_values((A,), (2,), [0.2, 0.8])
    cpt = Factor.from_values((A, B), (2, 2), [0.1, 0.9, 0.7, 0.3])
    return multiply(prior, cpt)


def test_joint_from_prior_and_cpt():
    joint = sec3_joint()
    assert joint.scope == (A, B)
    np.testing.assert_allclose(joint.values().reshape(-1), [0.02, 0.18, 0.56, 0.24], atol=1e-15)


def test_multiply_by_unit_is_identity():
    f = Factor.from_values((A, B), (2, 3), np.arange(1, 7) / 21)
    g = multiply(f, Factor.unit((A, B), (2, 3)))
    np.testing.assert_array_equal(g.table, f.table)


def test_multiply_matches_linear_entries():
    rng = np.random.default_rng(0)
    fa, fab = rng.random(3), rng.random((3, 2))
    g = multiply(Factor.from_values((A,), (3,), fa), Factor.from_values((A, B), (3, 2), fab))
    for a, b in itertools.product(range(3), range(2)):
        assert math.isclose(g.values()[a, b], fa[a] * fab[a, b], rel_tol=1e-12)


def test_multiply_cardinality_mismatch():
    with pytest.raises(ScopeError):
        multiply(Factor.unit((A,), (2,)), Factor.unit((A,), (3,)))


def test_max_out_sec3():
    m = max_out(sec3_joint(), A)
    assert m.scope == (B,)
    np.testing.assert_allclose(m.values(), [0.56, 0.24])


def test_max_out_unary_and_argmax_ties():
    assert math.isclose(max_out(Factor.from_values((A,), (2,), [0.3, 0.7]), A).value, math.log(0.7))
    _, arg = max_out(Factor.from_values((A, B), (3, 1), [0.5, 0.5, 0.2]), A, return_argmax=True)
    assert arg.tolist() == [0]


def test_sum_out_sec3_and_unary():
    s = sum_out(sec3_joint(), A)
    np.testing.assert_allclose(s.values(), [0.58, 0.42])
    assert abs(sum_out(Factor.from_values((A,), (2,), [0.3, 0.7]), A).value) < 1e-15


def test_sum_out_handles_zero_and_tiny_entries():
    f = Factor(scope=(A,), table=np.array([-np.inf, -np.inf]))
    assert sum_out(f, A).value == -np.inf
    g = Factor(scope=(A,), table=np.array([-1000.0, -1000.0]))
    assert math.isclose(sum_out(g, A).value, -1000 + math.log(2))


def test_condition():
    c = condition(sec3_joint(), {B: 0})
    assert c.scope == (A,)
    np.testing.assert_allclose(c.values(), [0.02, 0.56])
    f = sec3_joint()
    assert condition(f, {}) is f or np.array_equal(condition(f, {}).table, f.table)


def test_random_factor_ops_against_enumeration():
    rng = np.random.default_rng(1)
    vals = rng.random((2, 3, 2))
    f = Factor.from_values((A, B, C), (2, 3, 2), vals)
    mx, sm = max_out(f, B), sum_out(f, B)
    cond = condition(f, {B: 2})
    for a, c in itertools.product(range(2), range(2)):
        col = [vals[a, b, c] for b in range(3)]
        assert math.isclose(mx.values()[a, c], max(col), rel_tol=1e-12)
        assert math.isclose(sm.values()[a, c], sum(col), rel_tol=1e-12)
        assert math.isclose(cond.values()[a, c], vals[a, 2, c], rel_tol=1e-12)


def test_eliminate_rejects_unknown_op_and_missing_variable():
    f = sec3_joint()
    with pytest.raises(ValueError):
        eliminate(f, A, "min")
    with pytest.raises(ScopeError):
        max_out(f, C)


def test_factor_validation():
    with pytest.raises(ScopeError):
        Factor(scope=(A, A), table=np.zeros((2, 2)))
    with pytest.raises(ScopeError):
        Factor(scope=(A,), table=np.zeros((2, 2)))


CARDS = {0: 2, 1: 3, 2: 2, 3: 2}


@st.composite
def factors(draw, max_vars=3):
    scope = draw(st.lists(st.sampled_from(sorted(CARDS)), min_size=0, max_size=max_vars, unique=True))
    shape = [CARDS[v] for v in scope]
    size = int(np.prod(shape)) if shape else 1
    vals = draw(st.lists(st.floats(-5, 1, allow_nan=False), min_size=size, max_size=size))
    return Factor(scope=tuple(scope), table=np.array(vals).reshape(shape))


def same(f, g, tol=1e-12):
    assert set(f.scope) == set(g.scope)
    np.testing.assert_allclose(f.table, g.aligned(f.scope), rtol=0, atol=tol)


@settings(max_examples=60, deadline=None)
@given(factors(), factors(), factors())
def test_multiply_commutative_associative(f, g, h):
    same(multiply(f, g), multiply(g, f))
    same(multiply(multiply(f, g), h), multiply(f, multiply(g, h)))
    same(product([f, g, h]), multiply(f, multiply(g, h)))


@settings(max_examples=60, deadline=None)
@given(factors(), factors(), st.sampled_from(sorted(CARDS)))
def test_elimination_commutes_with_unrelated_product(f, g, var):
    f = multiply(f, Factor.unit((var,), (CARDS[var],)))
    g = g if var not in g.scope else condition(g, {var: 0})
    for op in ("max", "sum"):
        same(eliminate(multiply(f, g), var, op), multiply(eliminate(f, var, op), g))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_chain_rule_normalization(seed):
    net = random_network(seed, 5, max_parents=2, cards=[2, 3, 2, 2, 3])
    f = product(net.cpts)
    for v in list(f.scope):
        f = sum_out(f, v)
    assert abs(f.value) < 1e-9
