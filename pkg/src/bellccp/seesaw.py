"""Variational maximization of inequality values over qubit strategies.

The inequality value is linear in each observable's Bloch vector while all
other observables and the state are held fixed: collecting the three
expectations with sigma_x, sigma_y, sigma_z substituted at one slot gives a
gradient vector g with B = const + r . g, so r = g / |g| is that slot's
exact optimum. Sweeping the slots is therefore coordinate ascent with a
closed-form, provably non-decreasing update. State optimization, when
enabled, replaces the state by the top eigenvector of the fixed-observable
operator sum_x Q(x) A_1 x ... x A_n, found by shifted power iteration.

Restarts draw independent initial Bloch vectors from spawned generator
streams, so results are reproducible given (seed, options).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError
from .qubits import Observable2, PAULIS, PureState, MixedState, ghz_state, tensor_product
from .quantum import QuantumStrategy
from .scenarios import BellInequality, input_tuples

# Gradients shorter than this leave the slot's Bloch vector unchanged.
DEGENERATE_GRADIENT = 1e-14

_POWER_ITERATION_SEED = 0x706F7765
_POWER_MAX_ITERATIONS = 10**4
_POWER_TOL = 1e-12

# Cap on observable/state alternations when state optimization is enabled.
_MAX_ALTERNATIONS = 100


@dataclass(frozen=True, kw_only=True)
class OptimizerOptions:
    seed: int
    restarts: int = 32
    max_sweeps: int = 500
    tol: float = 1e-12
    optimize_state: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if self.tol <= 0:
            raise ValidationError(f"tol must be positive, got {self.tol}")
        if self.max_sweeps < 1:
            raise ValidationError(f"max_sweeps must be >= 1, got {self.max_sweeps}")


@dataclass(frozen=True)
class OptimizationResult:
    best_value: float
    strategy: QuantumStrategy
    sweeps_used: int
    value_trace: tuple[float, ...]
    degenerate_updates: int = 0


def _slots(ineq: BellInequality) -> list[tuple[int, tuple[int, ...]]]:
    scenario = ineq.scenario
    return [(party, setting)
            for party in range(1, scenario.n + 1)
            for setting in scenario.visible_tuples(party)]


class _Sweeper:
    """Coordinate-ascent state for one inequality on a fixed shared state."""

    def __init__(self, ineq: BellInequality, state: PureState | MixedState):
        scenario = ineq.scenario
        if state.dim != 2**scenario.n:
            raise ValidationError(
                f"state dimension {state.dim} does not match {scenario.n} parties")
        self.ineq = ineq
        self.scenario = scenario
        self.n = scenario.n
        self.state = state
        self.rho = state.density_matrix()
        self.tuples = input_tuples(self.n)
        self.q = np.array([float(ineq.coeffs[x]) for x in self.tuples])
        self.slots = _slots(ineq)
        # Which input tuples touch each slot, and each party's setting per x.
        self.groups = {
            slot: [k for k, x in enumerate(self.tuples)
                   if scenario.visible_tuple(x, slot[0]) == slot[1]]
            for slot in self.slots}
        self.settings = {
            (i, k): scenario.visible_tuple(x, i)
            for k, x in enumerate(self.tuples) for i in range(1, self.n + 1)}
        self.bloch: dict = {}
        self.correlators = np.zeros(len(self.tuples))

    def set_random_observables(self, rng: np.random.Generator):
        for slot in self.slots:
            vec = rng.standard_normal(3)
            while np.linalg.norm(vec) < 1e-12:
                vec = rng.standard_normal(3)
            self.bloch[slot] = vec / np.linalg.norm(vec)
        self._refresh_correlators()

    def set_state(self, state: PureState | MixedState):
        self.state = state
        self.rho = state.density_matrix()
        self._refresh_correlators()

    def _matrix(self, slot) -> np.ndarray:
        r = self.bloch[slot]
        return r[0] * PAULIS[0] + r[1] * PAULIS[1] + r[2] * PAULIS[2]

    def _expect(self, op: np.ndarray) -> float:
        return float(np.einsum("ij,ji->", self.rho, op).real)

    def _refresh_correlators(self):
        for k in range(len(self.tuples)):
            ops = [self._matrix((i, self.settings[(i, k)])) for i in range(1, self.n + 1)]
            self.correlators[k] = self._expect(tensor_product(ops))

    def value(self) -> float:
        return float(self.q @ self.correlators)

    def _pauli_expectations(self, slot, k: int) -> np.ndarray:
        """E(x_k) with each Pauli substituted at the slot's tensor position."""
        party = slot[0]
        left = np.eye(1, dtype=complex)
        for i in range(1, party):
            left = np.kron(left, self._matrix((i, self.settings[(i, k)])))
        right = np.eye(1, dtype=complex)
        for i in range(party + 1, self.n + 1):
            right = np.kron(right, self._matrix((i, self.settings[(i, k)])))
        return np.array([
            self._expect(np.kron(left, np.kron(sigma, right))) for sigma in PAULIS])

    def sweep(self) -> int:
        """Update every slot to its per-slot optimum; count degenerate slots."""
        degenerate = 0
        for slot in self.slots:
            gradient = np.zeros(3)
            pauli_e = {}
            for k in self.groups[slot]:
                pauli_e[k] = self._pauli_expectations(slot, k)
                gradient += self.q[k] * pauli_e[k]
            norm = np.linalg.norm(gradient)
            if norm < DEGENERATE_GRADIENT:
                degenerate += 1
            else:
                self.bloch[slot] = gradient / norm
            for k in self.groups[slot]:
                self.correlators[k] = float(self.bloch[slot] @ pauli_e[k])
        return degenerate

    def run(self, max_sweeps: int, tol: float) -> tuple[list[float], int, int]:
        """Sweep until the per-sweep improvement drops below tol."""
        trace = []
        degenerate = 0
        previous = self.value()
        sweeps = 0
        for _ in range(max_sweeps):
            degenerate += self.sweep()
            sweeps += 1
            current = self.value()
            trace.append(current)
            if current - previous < tol:
                break
            previous = current
        return trace, sweeps, degenerate

    def strategy(self) -> QuantumStrategy:
        observables = {slot: Observable2(bloch=self.bloch[slot] / np.linalg.norm(self.bloch[slot]))
                       for slot in self.slots}
        return QuantumStrategy(scenario=self.scenario, state=self.state,
                               observables=observables)


def _restart_streams(seed: int, restarts: int) -> list[np.random.Generator]:
    return [np.random.Generator(np.random.PCG64(ss))
            for ss in np.random.SeedSequence(seed).spawn(restarts)]


def _select_best(candidates: list[dict]) -> dict:
    best_value = max(c["value"] for c in candidates)
    for candidate in candidates:
        if candidate["value"] >= best_value - 1e-12:
            return candidate
    raise AssertionError("unreachable: no candidate within tie tolerance")


def seesaw_measurements(ineq: BellInequality, state: PureState | MixedState,
                        opts: OptimizerOptions) -> OptimizationResult:
    """Maximize over observables on a fixed state, best of seeded restarts."""
    candidates = []
    for rng in _restart_streams(opts.seed, opts.restarts):
        sweeper = _Sweeper(ineq, state)
        sweeper.set_random_observables(rng)
        trace, sweeps, degenerate = sweeper.run(opts.max_sweeps, opts.tol)
        candidates.append({
            "value": trace[-1],
            "strategy": sweeper.strategy(),
            "sweeps": sweeps,
            "trace": tuple(trace),
            "degenerate": degenerate,
        })
    best = _select_best(candidates)
    return OptimizationResult(best_value=best["value"], strategy=best["strategy"],
                              sweeps_used=best["sweeps"], value_trace=best["trace"],
                              degenerate_updates=best["degenerate"])


def bell_operator(ineq: BellInequality, observables: dict) -> np.ndarray:
    """sum_x Q(x) A_1^(x) x ... x A_n^(x) for fixed observables."""
    scenario = ineq.scenario
    dim = 2**scenario.n
    op = np.zeros((dim, dim), dtype=complex)
    for x, q in ineq.coeffs.items():
        if q == 0:
            continue
        factors = [observables[(i, scenario.visible_tuple(x, i))].matrix
                   for i in range(1, scenario.n + 1)]
        op += float(q) * tensor_product(factors)
    return op


def optimal_state(ineq: BellInequality, observables: dict) -> tuple[PureState, float]:
    """Top eigenpair of the fixed-observable operator by power iteration.

    The spectrum lies in [-Gamma, Gamma], so shifting by Gamma makes the
    target eigenvalue the largest in magnitude. Stops when the Rayleigh
    quotient settles to 1e-12; raises after 10^4 iterations.
    """
    if isinstance(observables, QuantumStrategy):
        observables = observables.observables
    op = bell_operator(ineq, observables)
    gamma = float(ineq.gamma)
    dim = op.shape[0]
    shifted = op + gamma * np.eye(dim)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(_POWER_ITERATION_SEED)))
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    vec /= np.linalg.norm(vec)
    rayleigh = float((vec.conj() @ (shifted @ vec)).real)
    for iteration in range(1, _POWER_MAX_ITERATIONS + 1):
        image = shifted @ vec
        norm = np.linalg.norm(image)
        if norm == 0.0:
            raise ConvergenceError("power iteration hit the zero vector", iteration)
        vec = image / norm
        updated = float((vec.conj() @ (shifted @ vec)).real)
        if iteration > 1 and abs(updated - rayleigh) <= _POWER_TOL:
            return PureState(vec), updated - gamma
        rayleigh = updated
    raise ConvergenceError(
        f"power iteration did not converge within {_POWER_MAX_ITERATIONS} iterations",
        _POWER_MAX_ITERATIONS)


def optimize(ineq: BellInequality, opts: OptimizerOptions,
             initial_state: PureState | MixedState | None = None) -> OptimizationResult:
    """Joint maximization: observable sweeps, optionally alternated with
    state updates, best over seeded restarts."""
    state = initial_state if initial_state is not None else ghz_state(ineq.scenario.n)
    if not opts.optimize_state:
        return seesaw_measurements(ineq, state, opts)

    candidates = []
    for rng in _restart_streams(opts.seed, opts.restarts):
        sweeper = _Sweeper(ineq, state)
        sweeper.set_random_observables(rng)
        trace: list[float] = []
        sweeps = 0
        degenerate = 0
        previous = sweeper.value()
        for _ in range(_MAX_ALTERNATIONS):
            part, used, bad = sweeper.run(opts.max_sweeps, opts.tol)
            trace.extend(part)
            sweeps += used
            degenerate += bad
            before_state_update = trace[-1]
            old_state = sweeper.state
            try:
                new_state, _ = optimal_state(ineq, sweeper.strategy().observables)
            except ConvergenceError:
                # Near-degenerate top eigenvalues stall power iteration; any
                # remaining state improvement is below its resolution.
                break
            sweeper.set_state(new_state)
            # The exact top eigenvalue cannot be below the current value; a
            # numerical non-improvement means the alternation has converged.
            if sweeper.value() < before_state_update:
                sweeper.set_state(old_state)
                break
            trace.append(sweeper.value())
            if trace[-1] - previous < opts.tol:
                break
            previous = trace[-1]
        candidates.append({
            "value": trace[-1],
            "strategy": sweeper.strategy(),
            "sweeps": sweeps,
            "trace": tuple(trace),
            "degenerate": degenerate,
        })
    best = _select_best(candidates)
    return OptimizationResult(best_value=best["value"], strategy=best["strategy"],
                              sweeps_used=best["sweeps"], value_trace=best["trace"],
                              degenerate_updates=best["degenerate"])
