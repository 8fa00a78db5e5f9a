"""Tests for causal scenarios, inequalities, and the derived game data."""

import pytest
from hypothesis import given, strategies as st

from bellccp import (
    BellInequality,
    CcpInstance,
    ValidationError,
    chsh_inequality,
    gyni_inequality,
    input_distribution,
    input_tuples,
    make_scenario,
    named_inequality,
    svetlichny_inequality,
    target_function,
)
from bellccp.config import inequality_from_config, inequality_to_config


def test_make_scenario_accepts_known_structures():
    ring = make_scenario(3, [(1, 3), (2, 1), (3, 2)])
    assert ring.visible_tuple((1, -1, 1), 1) == (1, 1)
    assert ring.visible_tuple((1, -1, 1), 2) == (-1, 1)
    assert ring.visible_tuple((1, -1, 1), 3) == (1, -1)
    pair = make_scenario(3, [(1, 2), (2, 1), (3,)])
    assert pair.arity(3) == 1
    bell = make_scenario(2, [(1,), (2,)])
    assert bell.arity(1) == bell.arity(2) == 1


@pytest.mark.parametrize("n,visibility", [
    (3, [(3, 1), (2,), (3,)]),       # own index not first
    (3, [(1, 1), (2,), (3,)]),       # duplicate
    (3, [(1, 4), (2,), (3,)]),       # out of range
    (3, [(1,), (2,)]),               # missing a party
    (1, [(1,)]),                     # too few parties
    (7, [(i,) for i in range(1, 8)]),  # too many parties
])
def test_make_scenario_rejects_invalid(n, visibility):
    with pytest.raises(ValidationError):
        make_scenario(n, visibility)


def test_gyni_coefficients():
    # Direct evaluation of 1 - (1-x1)(1-x2)(1-x3)/4 tuple by tuple.
    ineq = gyni_inequality()
    for x in input_tuples(3):
        formula = 1 - (1 - x[0]) * (1 - x[1]) * (1 - x[2]) / 4
        assert ineq.coeffs[x] == formula
    assert ineq.coeffs[(1, 1, 1)] == 1
    assert ineq.coeffs[(-1, -1, -1)] == -1
    assert ineq.gamma == 8


def test_svetlichny_coefficients():
    ineq = svetlichny_inequality()
    for x in input_tuples(3):
        formula = (1 - (1 - x[0]) * (1 - x[1]) * (1 - x[2]) / 4
                   - (1 + x[0]) * (1 + x[1]) * (1 + x[2]) / 4)
        assert ineq.coeffs[x] == formula
    assert ineq.coeffs[(1, 1, 1)] == -1
    assert ineq.coeffs[(-1, -1, -1)] == -1
    assert ineq.coeffs[(1, -1, 1)] == 1
    assert ineq.gamma == 8


def test_gamma_recomputed_from_table():
    for ineq in (gyni_inequality(), svetlichny_inequality(), chsh_inequality()):
        assert ineq.gamma == sum(abs(q) for q in ineq.coeffs.values())


def test_input_distribution():
    assert set(input_distribution(gyni_inequality()).values()) == {1 / 8}
    assert set(input_distribution(svetlichny_inequality()).values()) == {1 / 8}
    scenario = make_scenario(2, [(1,), (2,)])
    ineq = BellInequality(scenario=scenario, coeffs={
        (-1, -1): 2, (-1, 1): 0, (1, -1): 1, (1, 1): 1})
    dist = input_distribution(ineq)
    assert dist == {(-1, -1): 0.5, (-1, 1): 0.0, (1, -1): 0.25, (1, 1): 0.25}


def test_all_zero_coefficients_rejected():
    scenario = make_scenario(2, [(1,), (2,)])
    with pytest.raises(ValidationError):
        BellInequality(scenario=scenario, coeffs={x: 0 for x in input_tuples(2)})


def test_target_function_values():
    ineq = gyni_inequality()
    assert target_function(ineq, (-1, -1, -1), (1, 1, 1)) == -1
    assert target_function(ineq, (1, 1, -1), (1, -1, 1)) == -1
    for x in input_tuples(3):
        if ineq.coeffs[x] > 0:
            assert target_function(ineq, x, (1, 1, 1)) == 1


def test_target_function_zero_coefficient_convention():
    scenario = make_scenario(2, [(1,), (2,)])
    ineq = BellInequality(scenario=scenario, coeffs={
        (-1, -1): 1, (-1, 1): 0, (1, -1): 1, (1, 1): 1})
    assert target_function(ineq, (-1, 1), (1, 1)) == 1
    assert input_distribution(ineq)[(-1, 1)] == 0.0


@given(st.lists(st.sampled_from([-1, 1]), min_size=3, max_size=3),
       st.lists(st.sampled_from([-1, 1]), min_size=3, max_size=3),
       st.lists(st.sampled_from([-1, 1]), min_size=3, max_size=3))
def test_target_function_odd_in_each_y(x, y, y_prime):
    ineq = gyni_inequality()
    product = 1
    for a, b in zip(y, y_prime):
        product *= a * b
    assert (target_function(ineq, x, y) * target_function(ineq, x, y_prime)) == product


@given(st.lists(st.integers(-5, 5), min_size=8, max_size=8))
def test_input_distribution_is_valid_for_any_table(values):
    if not any(values):
        return
    scenario = make_scenario(3, [(1, 3), (2, 1), (3, 2)])
    ineq = BellInequality(scenario=scenario,
                          coeffs=dict(zip(input_tuples(3), values)))
    dist = input_distribution(ineq)
    assert all(p >= 0 for p in dist.values())
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)


def test_ccp_instance_distribution_checks():
    instance = CcpInstance(inequality=gyni_inequality())
    assert sum(instance.input_distribution.values()) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        CcpInstance(inequality=gyni_inequality(),
                    input_distribution={x: 0.5 for x in input_tuples(3)})


def test_named_inequality_lookup():
    assert named_inequality("gyni").name == "gyni"
    with pytest.raises(ValidationError):
        named_inequality("nope")


def test_inequality_config_round_trip():
    for ineq in (gyni_inequality(), svetlichny_inequality(), chsh_inequality()):
        assert inequality_from_config(inequality_to_config(ineq)) == ineq
    scenario = make_scenario(2, [(1, 2), (2, 1)])
    custom = BellInequality(scenario=scenario, coeffs={
        (-1, -1): 0.3, (1, 1): -2, (1, -1): 1})
    loaded = inequality_from_config(inequality_to_config(custom))
    assert loaded == custom
    assert loaded.coeffs[(-1, 1)] == 0
    assert isinstance(loaded.coeffs[(1, 1)], int)
    assert loaded.coeffs[(-1, -1)] == 0.3
