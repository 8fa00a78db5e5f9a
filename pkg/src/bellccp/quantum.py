"""Quantum strategies and their correlations.

A quantum strategy is a shared n-qubit state plus, for every party, one
binary observable per visible-input setting. Correlators come straight from
the Born rule: E(x) is the expectation of the tensor product of the chosen
observables, and the joint outcome distribution uses the projectors
(I + a A) / 2 outcome by outcome.

The canonical presets are the optimal GHZ-state strategies for the ring
(guess-your-neighbour) and Svetlichny structures, attaining 8 cos(pi/8)
and 4 sqrt(2) respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .qubits import (
    ATOL,
    MixedState,
    Observable2,
    PureState,
    bloch_to_observable,
    depolarize,
    expectation,
    ghz_state,
    tensor_product,
)
from .scenarios import (
    BellInequality,
    CausalScenario,
    gyni_scenario,
    input_tuples,
    svetlichny_scenario,
)

# Mixing weight at which the ideal ring value 7.3909 degrades to 7.023.
EXPERIMENT_VISIBILITY = 0.9502


@dataclass(frozen=True)
class QuantumStrategy:
    """Shared state plus per-party, per-setting observables.

    ``observables`` maps (party, visible tuple) to an :class:`Observable2`
    and must be complete: 2^(arity) settings for every party.
    """

    scenario: CausalScenario
    state: PureState | MixedState
    observables: dict

    def __post_init__(self):
        obs = dict(self.observables)
        expected = {(i, t)
                    for i in range(1, self.scenario.n + 1)
                    for t in self.scenario.visible_tuples(i)}
        if set(obs) != expected:
            missing = expected - set(obs)
            extra = set(obs) - expected
            raise ValidationError(
                f"observable map incomplete or mismatched (missing {sorted(missing)}, "
                f"unexpected {sorted(extra)})")
        for key, value in obs.items():
            if not isinstance(value, Observable2):
                raise ValidationError(f"observable for {key} must be an Observable2")
        if self.state.dim != 2**self.scenario.n:
            raise ValidationError(
                f"state dimension {self.state.dim} does not match {self.scenario.n} parties")
        object.__setattr__(self, "observables", obs)

    def observable_for(self, party: int, x) -> Observable2:
        return self.observables[(party, self.scenario.visible_tuple(x, party))]

    def setting_operators(self, x) -> list[np.ndarray]:
        return [self.observable_for(i, x).matrix for i in range(1, self.scenario.n + 1)]


def correlator_table(strategy: QuantumStrategy) -> dict[tuple[int, ...], float]:
    """Full correlator E(x) for every input tuple.

    E(x) is the expectation of the tensor product of the parties' chosen
    observables, equal to the +/-1-weighted sum of joint outcome
    probabilities. Values a hair outside [-1, 1] from roundoff are clamped;
    larger excursions raise.
    """
    table = {}
    for x in input_tuples(strategy.scenario.n):
        value = expectation(strategy.state, tensor_product(strategy.setting_operators(x)))
        if abs(value) > 1.0 + ATOL:
            raise NumericError(f"correlator at {x} is {value}, outside [-1, 1]")
        table[x] = min(1.0, max(-1.0, value))
    return table


def bell_value(table: dict, ineq: BellInequality) -> float:
    """Weighted sum of correlators: sum_x Q(x) E(x)."""
    total = 0.0
    for x, q in ineq.coeffs.items():
        if x not in table:
            raise ValidationError(f"correlator table is missing tuple {x}")
        total += q * table[x]
    return float(total)


def evaluate_strategy(strategy: QuantumStrategy, ineq: BellInequality) -> float:
    """Bell value of a quantum strategy: its correlators weighted by Q."""
    if strategy.scenario != ineq.scenario:
        raise ValidationError("strategy scenario does not match the inequality")
    return bell_value(correlator_table(strategy), ineq)


def success_probability(bell_value: float, gamma: float) -> float:
    """Game success implied by an inequality value: 1/2 + B / (2 Gamma)."""
    if gamma <= 0:
        raise ValidationError(f"gamma must be positive, got {gamma}")
    p = 0.5 + bell_value / (2.0 * gamma)
    if p < -ATOL or p > 1.0 + ATOL:
        raise NumericError(f"success probability {p} is inconsistent with |B| <= Gamma")
    return min(1.0, max(0.0, p))


def outcome_distribution(strategy: QuantumStrategy, x) -> dict[tuple[int, ...], float]:
    """Joint probability of every +/-1 outcome tuple at input x.

    Probabilities are Born-rule expectations of tensor products of the
    outcome projectors; tiny negative values from roundoff are zeroed.
    Results are memoized per input tuple (the strategy is immutable).
    """
    n = strategy.scenario.n
    x = tuple(x)
    cache = getattr(strategy, "_outcome_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(strategy, "_outcome_cache", cache)
    if x in cache:
        return dict(cache[x])
    observables = [strategy.observable_for(i, x) for i in range(1, n + 1)]
    dist = {}
    total = 0.0
    for a in input_tuples(n):
        op = tensor_product([obs.projector(a_i) for obs, a_i in zip(observables, a)])
        p = expectation(strategy.state, op)
        if p < -ATOL:
            raise NumericError(f"outcome probability {p} at {x=}, {a=} is negative")
        p = max(0.0, p)
        dist[a] = p
        total += p
    if abs(total - 1.0) > ATOL:
        raise NumericError(f"outcome probabilities at {x} sum to {total}")
    cache[x] = dist
    return dict(dist)


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Ring-structure optimum on GHZ(3). Keys are visible tuples (own input
# first, neighbour's second). Party 1's (+1, -1) entry must be -sigma_y;
# the +sigma_y variant drops the value from 8 cos(pi/8) to ~3.69.
_GYNI_BLOCH = {
    (1, (1, 1)): (0.0, 1.0, 0.0),
    (1, (1, -1)): (0.0, -1.0, 0.0),
    (1, (-1, 1)): (1.0, 0.0, 0.0),
    (1, (-1, -1)): (0.0, 1.0, 0.0),
    (2, (1, 1)): (1.0, 0.0, 0.0),
    (2, (1, -1)): (-_INV_SQRT2, _INV_SQRT2, 0.0),
    (2, (-1, 1)): (0.0, 1.0, 0.0),
    (2, (-1, -1)): (-_INV_SQRT2, _INV_SQRT2, 0.0),
    (3, (1, 1)): (-0.38, -0.92, 0.0),
    (3, (1, -1)): (-0.92, -0.38, 0.0),
    (3, (-1, 1)): (-0.38, 0.92, 0.0),
    (3, (-1, -1)): (0.92, -0.38, 0.0),
}

# Svetlichny optimum on GHZ(3), by own input only: the communicated input
# is ignored because the optimum needs no communication. Swapping party 1's
# two entries against each other collapses the value from 4 sqrt(2) to 0.
_SVETLICHNY_BLOCH = {
    (1, 1): (-_INV_SQRT2, _INV_SQRT2, 0.0),
    (1, -1): (-_INV_SQRT2, -_INV_SQRT2, 0.0),
    (2, 1): (0.0, 1.0, 0.0),
    (2, -1): (-1.0, 0.0, 0.0),
    (3, 1): (1.0, 0.0, 0.0),
    (3, -1): (0.0, 1.0, 0.0),
}


def _gyni_observables() -> dict:
    scenario = gyni_scenario()
    obs = {}
    for i in range(1, 4):
        for t in scenario.visible_tuples(i):
            obs[(i, t)] = bloch_to_observable(_GYNI_BLOCH[(i, t)])
    return obs


def _svetlichny_observables() -> dict:
    scenario = svetlichny_scenario()
    obs = {}
    for i in range(1, 4):
        for t in scenario.visible_tuples(i):
            obs[(i, t)] = bloch_to_observable(_SVETLICHNY_BLOCH[(i, t[0])])
    return obs


CANONICAL_STRATEGY_NAMES = ("gyni-paper", "svetlichny-paper", "experiment-like")


def canonical_strategy(name: str) -> QuantumStrategy:
    """Named preset strategies.

    ``gyni-paper`` and ``svetlichny-paper`` are the ideal GHZ(3) optima;
    ``experiment-like`` is the ring strategy on a GHZ state mixed with
    white noise at visibility ``EXPERIMENT_VISIBILITY``.
    """
    if name == "gyni-paper":
        return QuantumStrategy(scenario=gyni_scenario(), state=ghz_state(3),
                               observables=_gyni_observables())
    if name == "svetlichny-paper":
        return QuantumStrategy(scenario=svetlichny_scenario(), state=ghz_state(3),
                               observables=_svetlichny_observables())
    if name == "experiment-like":
        return QuantumStrategy(scenario=gyni_scenario(),
                               state=depolarize(ghz_state(3), EXPERIMENT_VISIBILITY),
                               observables=_gyni_observables())
    raise ValidationError(
        f"unknown strategy {name!r}; known names: {CANONICAL_STRATEGY_NAMES}")


def with_visibility(strategy: QuantumStrategy, v: float) -> QuantumStrategy:
    """Same observables on the state mixed with white noise at weight v."""
    state = strategy.state
    if not isinstance(state, PureState):
        raise ValidationError("visibility mixing starts from a pure state")
    return QuantumStrategy(scenario=strategy.scenario, state=depolarize(state, v),
                           observables=strategy.observables)


def random_strategy(scenario: CausalScenario, rng: np.random.Generator,
                    mixed: bool = False) -> QuantumStrategy:
    """Haar-ish random pure state and uniform random Bloch observables.

    With ``mixed`` the state is additionally depolarized by a uniform
    visibility, exercising the density-matrix code path.
    """
    dim = 2**scenario.n
    amplitudes = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    amplitudes /= np.linalg.norm(amplitudes)
    state: PureState | MixedState = PureState(amplitudes)
    if mixed:
        state = depolarize(state, float(rng.uniform(0.0, 1.0)))
    observables = {}
    for i in range(1, scenario.n + 1):
        for t in scenario.visible_tuples(i):
            vec = rng.standard_normal(3)
            while np.linalg.norm(vec) < 1e-12:
                vec = rng.standard_normal(3)
            observables[(i, t)] = Observable2(bloch=vec / np.linalg.norm(vec))
    return QuantumStrategy(scenario=scenario, state=state, observables=observables)
