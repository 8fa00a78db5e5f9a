"""Round-by-round execution of the broadcast guessing game.

Each round: draw the input tuple x from the instance distribution and a
fair y bit per party, have every party measure (or look up) its outcome
a_i at its visible setting, broadcast m_i = y_i * a_i, and let everyone
guess the product of all messages. The guess equals y_1..y_n a_1..a_n, so
a round passes exactly when the outcome product matches the sign of Q(x);
the y's cancel between the guess and the target.

Randomness consumption per round is fixed for replay stability: one
uniform selects x by inverse CDF over the canonical tuple order, then one
bit per party (party 1 first) sets the y's with bit 0 mapping to +1, then
for quantum strategies one more uniform selects the joint outcome by
inverse CDF over the canonical outcome order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .classical import DeterministicStrategy
from .errors import RandomnessExhaustedError, ValidationError
from .quantum import QuantumStrategy, outcome_distribution
from .randomness import RandomnessSource, SeededPrng
from .scenarios import CcpInstance, input_tuples, sign, tuple_index
from .config import strategy_fingerprint

# Re-exported here because sessions are where callers encounter sources.
from .randomness import beacon_load  # noqa: F401


@dataclass(frozen=True)
class RoundRecord:
    """One protocol round; invariants checked on construction."""

    x: tuple
    y: tuple
    settings: tuple
    a: tuple
    m: tuple
    guess: int
    f_value: int
    passed: bool

    def __post_init__(self):
        n = len(self.x)
        if any(len(v) != n for v in (self.y, self.settings, self.a, self.m)):
            raise ValidationError("round record fields have inconsistent lengths")
        if any(self.m[i] != self.y[i] * self.a[i] for i in range(n)):
            raise ValidationError("messages must equal y_i * a_i")
        product = 1
        for value in self.m:
            product *= value
        if self.guess != product:
            raise ValidationError("guess must be the product of all messages")
        if self.passed != (self.guess == self.f_value):
            raise ValidationError("pass flag contradicts guess and target")

    def to_json_dict(self) -> dict:
        return {"x": list(self.x), "y": list(self.y),
                "settings": [list(s) for s in self.settings],
                "a": list(self.a), "m": list(self.m),
                "guess": self.guess, "f_value": self.f_value, "pass": self.passed}


@dataclass(frozen=True)
class SessionLog:
    """Aggregate of a session; ``rounds`` may be empty when not retained."""

    rounds: tuple
    num_rounds: int
    successes: int
    config: dict = field(default_factory=dict)

    @property
    def estimate(self) -> float:
        return self.successes / self.num_rounds

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.num_rounds)

    def summary(self) -> dict:
        return {"rounds": self.num_rounds, "successes": self.successes,
                "estimate": self.estimate, "std_error": self.std_error}


def _cumulative(probabilities: np.ndarray) -> np.ndarray:
    cum = np.cumsum(probabilities)
    cum[-1] = 1.0
    return cum


def _pick(cumulative: np.ndarray, u: float) -> int:
    return int(np.searchsorted(cumulative, u, side="right"))


def _input_cumulative(instance: CcpInstance) -> np.ndarray:
    cached = getattr(instance, "_cum_inputs", None)
    if cached is None:
        cached = _cumulative(instance.probability_vector())
        object.__setattr__(instance, "_cum_inputs", cached)
    return cached


def sample_inputs(instance: CcpInstance, rng: RandomnessSource):
    """Draw (x, y): x by inverse CDF on the instance distribution, fair y's."""
    n = instance.inequality.n
    tuples = input_tuples(n)
    x = tuples[_pick(_input_cumulative(instance), rng.uniform())]
    y = tuple(1 - 2 * rng.bit() for _ in range(n))
    return x, y


class _OutcomeSampler:
    """Per-input-tuple outcome tables, shared across the rounds of a session."""

    def __init__(self, instance: CcpInstance, strategy):
        self.instance = instance
        self.strategy = strategy
        ineq = instance.inequality
        self.n = ineq.n
        self.tuples = input_tuples(self.n)
        self.cum_inputs = _input_cumulative(instance)
        self.quantum = isinstance(strategy, QuantumStrategy)
        if self.quantum:
            if strategy.scenario != ineq.scenario:
                raise ValidationError("strategy scenario does not match the instance")
            self.cum_outcomes = np.array([
                _cumulative(np.array([outcome_distribution(strategy, x)[a]
                                      for a in self.tuples]))
                for x in self.tuples])
        elif isinstance(strategy, DeterministicStrategy):
            if strategy.scenario != ineq.scenario:
                raise ValidationError("strategy scenario does not match the instance")
            self.fixed_outcomes = [strategy.outputs(x) for x in self.tuples]
        else:
            raise ValidationError(
                f"unsupported strategy type {type(strategy).__name__}")

    def outcomes(self, x_index: int, rng: RandomnessSource) -> tuple:
        if self.quantum:
            return self.tuples[_pick(self.cum_outcomes[x_index], rng.uniform())]
        return self.fixed_outcomes[x_index]


def _build_record(instance: CcpInstance, x, y, a) -> RoundRecord:
    ineq = instance.inequality
    scenario = ineq.scenario
    n = ineq.n
    m = tuple(y[i] * a[i] for i in range(n))
    guess = 1
    for value in m:
        guess *= value
    prod_y = 1
    for value in y:
        prod_y *= value
    f_value = prod_y * sign(ineq.coeffs[x])
    prod_a = 1
    for value in a:
        prod_a *= value
    passed = guess == f_value
    # The y's cancel: a round passes exactly when prod(a) matches sign(Q).
    assert passed == (prod_a == sign(ineq.coeffs[x]))
    settings = tuple(scenario.visible_tuple(x, i) for i in range(1, n + 1))
    return RoundRecord(x=x, y=y, settings=settings, a=a, m=m,
                       guess=guess, f_value=f_value, passed=passed)


def run_round(instance: CcpInstance, strategy, rng: RandomnessSource) -> RoundRecord:
    """Sample inputs, obtain outcomes, broadcast, guess, and score one round."""
    sampler = _OutcomeSampler(instance, strategy)
    x, y = sample_inputs(instance, rng)
    a = sampler.outcomes(tuple_index(x), rng)
    return _build_record(instance, x, y, a)


def run_session(instance: CcpInstance, strategy, rounds: int, rng: RandomnessSource,
                keep_rounds: bool = True, config: dict | None = None) -> SessionLog:
    """Run independent rounds and aggregate the pass statistics.

    The PRNG source admits a vectorized path that consumes the stream in
    exactly the per-round order documented above, so logs are identical to
    the scalar loop. Finite sources that run dry raise with the number of
    completed rounds attached.
    """
    if rounds < 1:
        raise ValidationError(f"session needs at least one round, got {rounds}")
    sampler = _OutcomeSampler(instance, strategy)
    echo = dict(config or {})
    echo.setdefault("rounds", rounds)
    echo.setdefault("randomness", rng.describe())
    echo.setdefault("strategy_sha256", strategy_fingerprint(strategy)
                    if isinstance(strategy, QuantumStrategy) else "deterministic")

    if isinstance(rng, SeededPrng):
        records, successes = _run_vectorized(instance, sampler, rounds, rng, keep_rounds)
    else:
        records, successes = _run_scalar(instance, sampler, rounds, rng, keep_rounds)
    return SessionLog(rounds=tuple(records), num_rounds=rounds,
                      successes=successes, config=echo)


def _run_scalar(instance, sampler, rounds, rng, keep_rounds):
    records = []
    successes = 0
    for completed in range(rounds):
        try:
            x, y = sample_inputs(instance, rng)
            a = sampler.outcomes(tuple_index(x), rng)
        except RandomnessExhaustedError as exc:
            raise RandomnessExhaustedError(
                f"randomness exhausted after {completed} complete rounds",
                bits_consumed=exc.bits_consumed,
                rounds_completed=completed) from exc
        record = _build_record(instance, x, y, a)
        successes += int(record.passed)
        if keep_rounds:
            records.append(record)
    return records, successes


def _run_vectorized(instance, sampler, rounds, rng, keep_rounds):
    """PRNG fast path; one random() matrix in the scalar consumption order."""
    ineq = instance.inequality
    n = ineq.n
    tuples = sampler.tuples
    per_round = n + 2 if sampler.quantum else n + 1
    draws = rng.uniform_array((rounds, per_round))
    x_idx = np.searchsorted(sampler.cum_inputs, draws[:, 0], side="right")
    y_bits = (draws[:, 1:n + 1] >= 0.5).astype(np.int8)
    y = 1 - 2 * y_bits
    tuple_array = np.array(tuples, dtype=np.int8)
    if sampler.quantum:
        outcome_cums = sampler.cum_outcomes[x_idx]
        a_idx = (outcome_cums <= draws[:, n + 1:n + 2]).sum(axis=1)
        a = tuple_array[a_idx]
    else:
        fixed = np.array(sampler.fixed_outcomes, dtype=np.int8)
        a = fixed[x_idx]

    sign_q = np.array([sign(ineq.coeffs[x]) for x in tuples], dtype=np.int8)
    passes = a.prod(axis=1) == sign_q[x_idx]
    successes = int(passes.sum())

    records = []
    if keep_rounds:
        for k in range(rounds):
            records.append(_build_record(
                instance, tuples[int(x_idx[k])],
                tuple(int(v) for v in y[k]), tuple(int(v) for v in a[k])))
    return records, successes


def exact_success(instance: CcpInstance, strategy) -> float:
    """Expected pass rate, summed exactly over the input distribution.

    For quantum strategies this sums the Born-rule mass of outcomes whose
    product matches sign(Q(x)); for deterministic strategies the outcome
    product is a fixed +/-1 per input tuple.
    """
    ineq = instance.inequality
    total = 0.0
    if isinstance(strategy, QuantumStrategy):
        for x, weight in instance.input_distribution.items():
            if weight == 0.0:
                continue
            target = sign(ineq.coeffs[x])
            dist = outcome_distribution(strategy, x)
            mass = 0.0
            for a, p in dist.items():
                prod = 1
                for value in a:
                    prod *= value
                if prod == target:
                    mass += p
            total += weight * mass
    elif isinstance(strategy, DeterministicStrategy):
        for x, weight in instance.input_distribution.items():
            if weight == 0.0:
                continue
            prod = 1
            for value in strategy.outputs(x):
                prod *= value
            if prod == sign(ineq.coeffs[x]):
                total += weight
    else:
        raise ValidationError(f"unsupported strategy type {type(strategy).__name__}")
    return total


def write_session_log(log: SessionLog, path) -> None:
    """JSON-lines file: one header object, then one round record per line."""
    with open(path, "w") as handle:
        handle.write(json.dumps({"header": log.config}) + "\n")
        for record in log.rounds:
            handle.write(json.dumps(record.to_json_dict()) + "\n")
