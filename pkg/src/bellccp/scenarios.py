"""Causal structures, full-correlator inequalities, and the derived game.

A causal scenario records which inputs each party's output may depend on.
Parties are numbered 1..n and each party always sees its own input first.
Input tuples are vectors in {-1, +1}^n, enumerated lexicographically with
x_1 most significant and -1 ordered before +1; that order fixes table
indexing everywhere (files, enumeration, sampling).

An inequality is a coefficient table Q over all input tuples together with
its normalizer Gamma = sum |Q|. The associated distributed game asks every
party to output the value of

    f(x, y) = y_1 ... y_n * sign(Q(x))

after a single broadcast bit each, with x drawn from q*(x) = |Q(x)| / Gamma
and each y_i a fair coin.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from numbers import Integral, Real

import numpy as np

from .errors import ValidationError

MAX_PARTIES = 6


@lru_cache(maxsize=None)
def input_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    """All 2^n input tuples in the canonical lexicographic order."""
    return tuple(itertools.product((-1, 1), repeat=n))


def tuple_index(x: tuple[int, ...]) -> int:
    """Position of a +/-1 tuple in the canonical order."""
    idx = 0
    for value in x:
        idx = 2 * idx + (1 if value == 1 else 0)
    return idx


def sign(q) -> int:
    """Sign of a coefficient, with sign(0) = +1.

    Zero coefficients carry zero probability mass in the game, so the
    convention is unobservable there; +1 keeps the function total.
    """
    return -1 if q < 0 else 1


def _validate_entries(x, n: int, what: str) -> tuple[int, ...]:
    out = tuple(int(v) for v in x)
    if len(out) != n:
        raise ValidationError(f"{what} must have length {n}, got {len(out)}")
    if any(v not in (-1, 1) for v in out):
        raise ValidationError(f"{what} entries must be +1 or -1, got {out}")
    return out


@dataclass(frozen=True)
class CausalScenario:
    """Party count plus per-party ordered input-visibility lists (1-based)."""

    n: int
    visibility: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, Integral) or not 2 <= self.n <= MAX_PARTIES:
            raise ValidationError(f"party count must be an integer in [2, {MAX_PARTIES}], got {self.n}")
        vis = tuple(tuple(int(j) for j in group) for group in self.visibility)
        if len(vis) != self.n:
            raise ValidationError(f"need one visibility list per party, got {len(vis)} for n={self.n}")
        for i, group in enumerate(vis, start=1):
            if not group or group[0] != i:
                raise ValidationError(f"party {i} visibility must start with its own index, got {group}")
            if len(set(group)) != len(group):
                raise ValidationError(f"party {i} visibility has duplicates: {group}")
            if any(not 1 <= j <= self.n for j in group):
                raise ValidationError(f"party {i} visibility indices out of range 1..{self.n}: {group}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "visibility", vis)

    def arity(self, party: int) -> int:
        """Number of inputs visible to a party."""
        return len(self.visibility[party - 1])

    def visible_tuple(self, x, party: int) -> tuple[int, ...]:
        """Restriction of an input tuple to the party's visibility list."""
        return tuple(x[j - 1] for j in self.visibility[party - 1])

    def visible_tuples(self, party: int) -> tuple[tuple[int, ...], ...]:
        """All settings of a party, in canonical order."""
        return input_tuples_of_length(self.arity(party))


@lru_cache(maxsize=None)
def input_tuples_of_length(length: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product((-1, 1), repeat=length))


def make_scenario(n: int, visibility) -> CausalScenario:
    """Validate and build a causal scenario from 1-based visibility lists."""
    return CausalScenario(n=n, visibility=tuple(tuple(group) for group in visibility))


@dataclass(frozen=True)
class BellInequality:
    """Coefficient table Q over all input tuples, bound to a scenario.

    Integer coefficients are kept as Python ints so sums over them (the
    classical bound, Gamma) stay exact. ``gamma`` is always sum |Q|.
    """

    scenario: CausalScenario
    coeffs: dict
    gamma: float = field(default=None, compare=False)
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.scenario.n
        table: dict[tuple[int, ...], float] = {}
        for x in input_tuples(n):
            table[x] = 0
        for x, q in self.coeffs.items():
            key = _validate_entries(x, n, "coefficient tuple")
            if not isinstance(q, Real) or not np.isfinite(float(q)):
                raise ValidationError(f"coefficient Q{key} must be a finite real, got {q!r}")
            table[key] = int(q) if isinstance(q, Integral) or float(q).is_integer() else float(q)
        gamma = sum(abs(q) for q in table.values())
        if gamma <= 0:
            raise ValidationError("all coefficients are zero; the inequality is empty")
        if self.gamma is not None and abs(float(self.gamma) - float(gamma)) > 0:
            raise ValidationError(f"declared gamma {self.gamma} != sum |Q| = {gamma}")
        object.__setattr__(self, "coeffs", table)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "_classical_bound_cache", None)

    @property
    def n(self) -> int:
        return self.scenario.n

    @property
    def classical_bound_cache(self):
        return self._classical_bound_cache

    def coefficient_array(self) -> np.ndarray:
        """Q in canonical tuple order; int64 when all entries are integral."""
        values = [self.coeffs[x] for x in input_tuples(self.n)]
        if all(isinstance(q, Integral) for q in values):
            return np.array(values, dtype=np.int64)
        return np.array(values, dtype=float)


def input_distribution(ineq: BellInequality) -> dict[tuple[int, ...], float]:
    """q*(x) = |Q(x)| / Gamma; a valid distribution whenever Gamma > 0."""
    gamma = ineq.gamma
    return {x: abs(q) / gamma for x, q in ineq.coeffs.items()}


def target_function(ineq: BellInequality, x, y) -> int:
    """f(x, y) = prod(y) * sign(Q(x)), valued in {-1, +1}."""
    n = ineq.n
    x = _validate_entries(x, n, "x")
    y = _validate_entries(y, n, "y")
    prod_y = 1
    for value in y:
        prod_y *= value
    return prod_y * sign(ineq.coeffs[x])


@dataclass(frozen=True)
class CcpInstance:
    """An inequality plus the input distribution of the derived game."""

    inequality: BellInequality
    input_distribution: dict = field(default=None)

    def __post_init__(self):
        dist = self.input_distribution
        if dist is None:
            dist = input_distribution(self.inequality)
        n = self.inequality.n
        table = {}
        total = 0.0
        for x in input_tuples(n):
            p = float(dist.get(x, 0.0))
            if p < 0:
                raise ValidationError(f"probability of {x} is negative: {p}")
            table[x] = p
            total += p
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"input distribution sums to {total}, not 1")
        object.__setattr__(self, "input_distribution", table)

    def probability_vector(self) -> np.ndarray:
        return np.array([self.input_distribution[x] for x in input_tuples(self.inequality.n)])


def gyni_scenario() -> CausalScenario:
    """Three parties in a ring; each also sees its left neighbour's input."""
    return make_scenario(3, [(1, 3), (2, 1), (3, 2)])


def gyni_inequality() -> BellInequality:
    """Ring scenario inequality: Q = +1 everywhere except Q(-1,-1,-1) = -1.

    Classical bound 6 over the ring's response functions; Gamma = 8.
    """
    coeffs = {x: 1 for x in input_tuples(3)}
    coeffs[(-1, -1, -1)] = -1
    return BellInequality(scenario=gyni_scenario(), coeffs=coeffs, name="gyni")


def svetlichny_scenario() -> CausalScenario:
    """Parties 1 and 2 exchange inputs; party 3 sees only its own."""
    return make_scenario(3, [(1, 2), (2, 1), (3,)])


def svetlichny_inequality() -> BellInequality:
    """Q = +1 on mixed tuples, -1 on (+,+,+) and (-,-,-); Gamma = 8.

    Equals 1 - (1-x1)(1-x2)(1-x3)/4 - (1+x1)(1+x2)(1+x3)/4 tuple by tuple;
    the classical bound over the communication structure is 4.
    """
    coeffs = {}
    for x in input_tuples(3):
        q = 1
        if x == (1, 1, 1) or x == (-1, -1, -1):
            q = -1
        coeffs[x] = q
    return BellInequality(scenario=svetlichny_scenario(), coeffs=coeffs, name="svetlichny")


def chsh_inequality() -> BellInequality:
    """Two-party no-communication inequality with Q = (1, 1, 1, -1).

    Classical bound 2, Gamma = 4.
    """
    coeffs = {x: 1 for x in input_tuples(2)}
    coeffs[(1, 1)] = -1
    scenario = make_scenario(2, [(1,), (2,)])
    return BellInequality(scenario=scenario, coeffs=coeffs, name="chsh")


NAMED_INEQUALITIES = {
    "gyni": gyni_inequality,
    "svetlichny": svetlichny_inequality,
    "chsh": chsh_inequality,
}


def named_inequality(name: str) -> BellInequality:
    try:
        factory = NAMED_INEQUALITIES[name]
    except KeyError:
        raise ValidationError(
            f"unknown inequality {name!r}; known names: {sorted(NAMED_INEQUALITIES)}") from None
    return factory()
