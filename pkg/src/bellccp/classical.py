"""Exact classical bounds by exhaustive search.

Two distinct searches live here and deliberately stay independent of each
other:

* ``classical_bound`` maximizes the inequality value over deterministic
  response strategies (one +/-1 output table per party over its visible
  inputs). The expression is linear in each party's response probabilities,
  so the maximum over all hidden-variable models is attained at one of these
  deterministic points.

* ``ccp_exhaustive_bound`` maximizes the success probability of the derived
  guessing game over one-bit broadcast protocols: every party sends an
  arbitrary +/-1 message computed from its visible inputs and its own y bit,
  and each party then guesses pointwise-optimally from everything it knows.
  No inequality machinery enters this search, which makes it a usable
  cross-check of the success-bound formula.

Both searches are exact; enumeration is vectorized but never pruned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

import numpy as np

from .errors import EnumerationGuardError, ValidationError
from .scenarios import (
    BellInequality,
    CausalScenario,
    CcpInstance,
    input_tuples,
    input_tuples_of_length,
    sign,
    tuple_index,
)

# Upper bound on the full deterministic-strategy space for classical_bound.
STRATEGY_SPACE_GUARD = 2**40

# Default upper bound on message-function combinations enumerated per call.
DEFAULT_MESSAGE_GUARD = 2**20


@dataclass(frozen=True)
class ResponseFunction:
    """One party's deterministic output table over its visible settings."""

    party: int
    table: dict

    def __post_init__(self):
        table = dict(self.table)
        arities = {len(key) for key in table}
        if len(arities) != 1:
            raise ValidationError(f"party {self.party} table keys have mixed lengths")
        arity = arities.pop()
        expected = input_tuples_of_length(arity)
        if sorted(table) != sorted(expected):
            raise ValidationError(f"party {self.party} table must cover all {2**arity} settings")
        if any(v not in (-1, 1) for v in table.values()):
            raise ValidationError(f"party {self.party} outputs must be +1 or -1")
        object.__setattr__(self, "table", table)

    @property
    def arity(self) -> int:
        return len(next(iter(self.table)))


@dataclass(frozen=True)
class DeterministicStrategy:
    """One response function per party, consistent with a scenario."""

    scenario: CausalScenario
    responses: tuple

    def __post_init__(self):
        responses = tuple(self.responses)
        parties = [r.party for r in responses]
        if parties != list(range(1, self.scenario.n + 1)):
            raise ValidationError(f"need parties 1..{self.scenario.n} in order, got {parties}")
        for r in responses:
            if r.arity != self.scenario.arity(r.party):
                raise ValidationError(
                    f"party {r.party} table arity {r.arity} does not match scenario "
                    f"visibility of {self.scenario.arity(r.party)} inputs")
        object.__setattr__(self, "responses", responses)

    def outputs(self, x) -> tuple[int, ...]:
        """All parties' outputs at input tuple x."""
        return tuple(
            r.table[self.scenario.visible_tuple(x, r.party)] for r in self.responses)


def constant_strategy(scenario: CausalScenario, value: int = 1) -> DeterministicStrategy:
    """Strategy in which every party always outputs ``value``."""
    responses = tuple(
        ResponseFunction(party=i, table={t: value for t in scenario.visible_tuples(i)})
        for i in range(1, scenario.n + 1))
    return DeterministicStrategy(scenario=scenario, responses=responses)


def enumerate_strategies(scenario: CausalScenario):
    """Yield every deterministic strategy of a scenario (odometer order)."""
    per_party = []
    for i in range(1, scenario.n + 1):
        settings = scenario.visible_tuples(i)
        tables = []
        for outputs in itertools.product((1, -1), repeat=len(settings)):
            tables.append(ResponseFunction(party=i, table=dict(zip(settings, outputs))))
        per_party.append(tables)
    for combo in itertools.product(*per_party):
        yield DeterministicStrategy(scenario=scenario, responses=combo)


def strategy_bell_value(strategy: DeterministicStrategy, ineq: BellInequality):
    """Inequality value of a deterministic strategy: sum_x Q(x) prod_i a_i."""
    if strategy.scenario != ineq.scenario:
        raise ValidationError("strategy visibility structure does not match the inequality")
    total = 0
    for x, q in ineq.coeffs.items():
        prod = 1
        for a in strategy.outputs(x):
            prod *= a
        total += q * prod
    return total


def _response_matrix(arity: int) -> np.ndarray:
    """Outputs of all 2^(2^arity) response functions, one row per function.

    Bit k of the function id encodes the output at visible-setting index k:
    bit 0 means +1. Ascending id is the enumeration (and tie-break) order.
    """
    size = 2 ** (2**arity)
    fids = np.arange(size, dtype=np.int64)[:, None]
    slots = np.arange(2**arity, dtype=np.int64)[None, :]
    return (1 - 2 * ((fids >> slots) & 1)).astype(np.int8)


def _visible_index_map(scenario: CausalScenario, party: int) -> np.ndarray:
    """For each input tuple (canonical order), the party's setting index."""
    return np.array(
        [tuple_index(scenario.visible_tuple(x, party)) for x in input_tuples(scenario.n)],
        dtype=np.int64)


def classical_bound(ineq: BellInequality):
    """Exact maximum of the inequality over deterministic strategies.

    Returns ``(value, witness)`` and caches the pair on the inequality.
    The party with the largest table is not enumerated: once the other
    parties' outputs are fixed the value is linear in each of its table
    entries, so its optimal table is the sign of the accumulated
    coefficient at each of its settings. The remaining parties are swept
    exhaustively (vectorized, no pruning), which leaves the maximum and
    the first-maximizer tie-break exact.
    """
    if ineq.classical_bound_cache is not None:
        return ineq.classical_bound_cache

    scenario = ineq.scenario
    n = scenario.n
    space = 1
    for i in range(1, n + 1):
        space *= 2 ** (2 ** scenario.arity(i))
    if space > STRATEGY_SPACE_GUARD:
        raise EnumerationGuardError(
            f"deterministic-strategy space {space} exceeds guard {STRATEGY_SPACE_GUARD}; "
            "reduce the scenario's party count or visibility")

    q = ineq.coefficient_array()
    exact_ints = q.dtype == np.int64
    num_x = 2**n

    parties = list(range(1, n + 1))
    eliminated = max(parties, key=lambda i: scenario.arity(i))
    rest = [i for i in parties if i != eliminated]

    vis_idx = {i: _visible_index_map(scenario, i) for i in parties}
    # Outputs of every candidate function of each swept party, in x-space.
    rows = {i: _response_matrix(scenario.arity(i))[:, vis_idx[i]] for i in rest}
    sizes = [rows[i].shape[0] for i in rest]
    total = int(np.prod(sizes, dtype=object)) if rest else 1
    strides = []
    acc = 1
    for size in reversed(sizes):
        strides.append(acc)
        acc *= size
    strides.reverse()

    group_count = 2 ** scenario.arity(eliminated)
    onehot = np.zeros((num_x, group_count), dtype=q.dtype)
    onehot[np.arange(num_x), vis_idx[eliminated]] = 1

    best_value = None
    best_combo = 0
    chunk = 1 << 14
    for start in range(0, total, chunk):
        combos = np.arange(start, min(start + chunk, total), dtype=np.int64)
        prod = np.ones((combos.shape[0], num_x), dtype=np.int8)
        for party, size, stride in zip(rest, sizes, strides):
            fids = (combos // stride) % size
            prod = prod * rows[party][fids]
        grouped = (prod * q[None, :]) @ onehot
        values = np.abs(grouped).sum(axis=1)
        idx = int(np.argmax(values))
        value = values[idx]
        if best_value is None or value > best_value:
            best_value = value
            best_combo = start + idx

    # Reconstruct the witness from the first maximizing combination.
    responses = {}
    prod = np.ones(num_x, dtype=np.int8)
    for party, size, stride in zip(rest, sizes, strides):
        fid = (best_combo // stride) % size
        outputs_x = rows[party][fid]
        prod = prod * outputs_x
        settings = scenario.visible_tuples(party)
        table = {settings[k]: int(1 - 2 * ((fid >> k) & 1)) for k in range(len(settings))}
        responses[party] = ResponseFunction(party=party, table=table)
    grouped = (prod * q) @ onehot
    settings = scenario.visible_tuples(eliminated)
    table = {settings[t]: (1 if grouped[t] >= 0 else -1) for t in range(group_count)}
    responses[eliminated] = ResponseFunction(party=eliminated, table=table)
    witness = DeterministicStrategy(
        scenario=scenario, responses=tuple(responses[i] for i in parties))

    value = int(best_value) if exact_ints else float(best_value)
    result = (value, witness)
    object.__setattr__(ineq, "_classical_bound_cache", result)
    return result


def classical_success_bound(ineq: BellInequality) -> float:
    """Best classical success of the derived game: 1/2 + bound / (2 Gamma)."""
    bound, _ = classical_bound(ineq)
    if isinstance(bound, Integral) and isinstance(ineq.gamma, Integral):
        return float(Fraction(1, 2) + Fraction(int(bound), 2 * int(ineq.gamma)))
    return 0.5 + bound / (2.0 * ineq.gamma)


@dataclass(frozen=True)
class MessageStrategy:
    """One +/-1 broadcast-message table per party over (setting, y) pairs."""

    scenario: CausalScenario
    tables: tuple

    def __post_init__(self):
        tables = tuple(dict(t) for t in self.tables)
        if len(tables) != self.scenario.n:
            raise ValidationError(f"need one message table per party, got {len(tables)}")
        for i, table in enumerate(tables, start=1):
            expected = {(t, y) for t in self.scenario.visible_tuples(i) for y in (-1, 1)}
            if set(table) != expected:
                raise ValidationError(f"party {i} message table must cover all (setting, y) pairs")
            if any(v not in (-1, 1) for v in table.values()):
                raise ValidationError(f"party {i} messages must be +1 or -1")
        object.__setattr__(self, "tables", tables)

    def message(self, party: int, x, y_i: int) -> int:
        return self.tables[party - 1][(self.scenario.visible_tuple(x, party), y_i)]


def broadcast_messages(strategy: DeterministicStrategy) -> MessageStrategy:
    """The protocol messages m_i = y_i * a_i of a deterministic strategy."""
    scenario = strategy.scenario
    tables = []
    for r in strategy.responses:
        tables.append({(t, y): y * r.table[t]
                       for t in scenario.visible_tuples(r.party) for y in (-1, 1)})
    return MessageStrategy(scenario=scenario, tables=tuple(tables))


def message_protocol_success(instance: CcpInstance, messages: MessageStrategy,
                             party: int) -> float:
    """Success of one party under fixed messages and a pointwise-best guess.

    For every realization of the party's information (its visible inputs,
    its own y, the messages it receives) the guess with the larger weighted
    mass of matching target values is exact, so this is the party's optimal
    success for the given message strategy.
    """
    ineq = instance.inequality
    scenario = ineq.scenario
    if messages.scenario != scenario:
        raise ValidationError("message strategy does not match the instance scenario")
    n = scenario.n
    masses: dict[tuple, dict[int, float]] = {}
    for x in input_tuples(n):
        weight_x = instance.input_distribution[x]
        if weight_x == 0.0:
            continue
        for y in input_tuples(n):
            weight = weight_x / 2**n
            received = tuple(
                messages.message(j, x, y[j - 1]) for j in range(1, n + 1) if j != party)
            info = (scenario.visible_tuple(x, party), y[party - 1], received)
            prod_y = 1
            for value in y:
                prod_y *= value
            f = prod_y * sign(ineq.coeffs[x])
            masses.setdefault(info, {1: 0.0, -1: 0.0})[f] += weight
    return sum(max(m[1], m[-1]) for m in masses.values())


def _message_matrices(scenario: CausalScenario, party: int, family: str) -> np.ndarray:
    """Message values of every candidate function, over the (x, y) grid.

    Returns an array of shape (functions, 2^n, 2^n) with entries +/-1.
    Family "all" enumerates arbitrary functions of (setting, y); family
    "y-odd" enumerates m = y * h(setting).
    """
    n = scenario.n
    vis = _visible_index_map(scenario, party)
    ybit = np.array([(0 if y[party - 1] == -1 else 1) for y in input_tuples(n)], dtype=np.int64)
    if family == "all":
        rows = _response_matrix(scenario.arity(party) + 1)
        slot = vis[:, None] * 2 + ybit[None, :]
        return rows[:, slot]
    if family == "y-odd":
        rows = _response_matrix(scenario.arity(party))
        ysign = np.array([y[party - 1] for y in input_tuples(n)], dtype=np.int8)
        return rows[:, vis][:, :, None] * ysign[None, None, :]
    raise ValidationError(f"unknown message family {family!r}; use 'all' or 'y-odd'")


def ccp_exhaustive_bound(instance: CcpInstance, guard: int = DEFAULT_MESSAGE_GUARD,
                         message_family: str = "all") -> float:
    """Best classical success of the game over one-bit broadcast protocols.

    Exhausts all message strategies of the chosen family with every party's
    guess chosen pointwise-optimally. A party's own broadcast tells it
    nothing it does not already know, so its success depends only on the
    other parties' message functions; each party is therefore maximized
    over the product of the others' function spaces, and the returned value
    is the best success any single party can reach.
    """
    ineq = instance.inequality
    scenario = ineq.scenario
    n = scenario.n
    num_x = 2**n

    family_sizes = []
    for i in range(1, n + 1):
        if message_family == "all":
            family_sizes.append(2 ** (2 ** (scenario.arity(i) + 1)))
        else:
            family_sizes.append(2 ** (2 ** scenario.arity(i)))
    work = 0
    for p in range(1, n + 1):
        combos = 1
        for j in range(1, n + 1):
            if j != p:
                combos *= family_sizes[j - 1]
        work += combos
    if work > guard:
        raise EnumerationGuardError(
            f"message search needs {work} combinations, above the guard {guard}; "
            "raise the guard explicitly or restrict the message family")

    weights = instance.probability_vector()[:, None] / 2**n * np.ones((1, num_x))
    sign_q = np.array([sign(ineq.coeffs[x]) for x in input_tuples(n)], dtype=np.int8)
    prod_y = np.array([int(np.prod(y)) for y in input_tuples(n)], dtype=np.int8)
    f_plus = (sign_q[:, None] * prod_y[None, :]) == 1

    best = 0.0
    for party in range(1, n + 1):
        others = [j for j in range(1, n + 1) if j != party]
        matrices = {j: _message_matrices(scenario, j, message_family) for j in others}
        vis = _visible_index_map(scenario, party)
        ybit = np.array([(0 if y[party - 1] == -1 else 1) for y in input_tuples(n)],
                        dtype=np.int64)
        base = vis[:, None] * 2 + ybit[None, :]
        base_count = 2 ** (scenario.arity(party) + 1)

        head, tail = others[:-1], others[-1]
        tail_bits = (matrices[tail] == -1).astype(np.int64)
        tail_count = tail_bits.shape[0]
        num_keys = base_count * 2 ** len(others)
        w_plus = (weights * f_plus).ravel()
        w_minus = (weights * ~f_plus).ravel()

        for combo in itertools.product(*(range(matrices[j].shape[0]) for j in head)):
            key = base.astype(np.int64)
            for j, fid in zip(head, combo):
                key = key * 2 + (matrices[j][fid] == -1)
            keys = (key[None, :, :] * 2 + tail_bits
                    + np.arange(tail_count, dtype=np.int64)[:, None, None] * num_keys)
            flat = keys.reshape(tail_count, -1)
            length = tail_count * num_keys
            mass_plus = np.bincount(flat.ravel(),
                                    weights=np.tile(w_plus, tail_count), minlength=length)
            mass_minus = np.bincount(flat.ravel(),
                                     weights=np.tile(w_minus, tail_count), minlength=length)
            per_combo = np.maximum(mass_plus, mass_minus).reshape(tail_count, num_keys).sum(axis=1)
            value = float(per_combo.max())
            if value > best:
                best = value
    return best
