"""Dense complex linear algebra for small multi-qubit systems.

States live on n qubits with party 1 as the most significant tensor factor,
so basis index 0 is |0...0> and index 2^n - 1 is |1...1>. Binary observables
are parameterized by unit Bloch vectors r and act as r . sigma; the two
outcome projectors are (I +/- A) / 2.

Everything here is a pure function over immutable values: state and
observable arrays are copied on construction and marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BlochVectorError, NumericError, ValidationError

# Absolute tolerance used by every invariant check in the package.
ATOL = 1e-9

# Bloch vectors within this distance of unit norm are renormalized silently;
# anything further off is rejected. Wide enough to accept unit vectors whose
# components were rounded to two decimals.
BLOCH_NORM_TOL = 1e-2

MAX_QUBITS = 12

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _frozen_complex_array(values, shape) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.shape != shape:
        raise ValidationError(f"expected array of shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError("array entries must be finite")
    arr.setflags(write=False)
    return arr


def _qubit_count(dim: int, what: str) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ValidationError(f"{what} dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValidationError(f"{what} exceeds the dense-matrix cap of {MAX_QUBITS} qubits")
    return n


@dataclass(frozen=True)
class PureState:
    """Normalized state vector on ``n`` qubits."""

    amplitudes: np.ndarray
    n: int = field(default=-1)

    def __post_init__(self):
        arr = _frozen_complex_array(self.amplitudes, (np.size(self.amplitudes),))
        n = _qubit_count(arr.shape[0], "state")
        if self.n != -1 and self.n != n:
            raise ValidationError(f"amplitude length {arr.shape[0]} does not match n={self.n}")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > ATOL:
            raise ValidationError(f"state norm {norm} differs from 1 by more than {ATOL}")
        object.__setattr__(self, "amplitudes", arr)
        object.__setattr__(self, "n", n)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class MixedState:
    """Density matrix on ``n`` qubits: Hermitian, unit trace, PSD."""

    matrix: np.ndarray
    n: int = field(default=-1)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError(f"density matrix must be square, got shape {mat.shape}")
        mat = _frozen_complex_array(mat, mat.shape)
        n = _qubit_count(mat.shape[0], "density matrix")
        if self.n != -1 and self.n != n:
            raise ValidationError(f"matrix dimension {mat.shape[0]} does not match n={self.n}")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL:
            raise ValidationError("density matrix is not Hermitian")
        trace = np.trace(mat).real
        if abs(trace - 1.0) > ATOL:
            raise ValidationError(f"density matrix trace {trace} differs from 1")
        eigenvalues = np.linalg.eigvalsh(mat)
        if eigenvalues[0] < -ATOL:
            raise ValidationError(f"density matrix has negative eigenvalue {eigenvalues[0]}")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "n", n)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def density_matrix(self) -> np.ndarray:
        return self.matrix


@dataclass(frozen=True)
class Observable2:
    """Traceless binary qubit observable r . sigma with unit Bloch vector r.

    Squares to the identity, so its eigenvalues are +/-1 and the outcome
    projectors are (I + a A) / 2 for a in {-1, +1}. Build through
    :func:`bloch_to_observable`, which renormalizes slightly off-unit input.
    """

    bloch: np.ndarray
    matrix: np.ndarray = field(default=None)

    def __post_init__(self):
        r = np.array(self.bloch, dtype=float)
        if r.shape != (3,):
            raise ValidationError(f"Bloch vector must have 3 components, got shape {r.shape}")
        if not np.all(np.isfinite(r)):
            raise ValidationError("Bloch vector entries must be finite")
        if abs(np.linalg.norm(r) - 1.0) > ATOL:
            raise ValidationError("Observable2 requires an exactly unit Bloch vector; "
                                  "use bloch_to_observable to renormalize")
        mat = r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z
        r.setflags(write=False)
        mat.setflags(write=False)
        object.__setattr__(self, "bloch", r)
        object.__setattr__(self, "matrix", mat)

    def projector(self, outcome: int) -> np.ndarray:
        """Projector onto the outcome +1 or -1 eigenspace."""
        if outcome not in (-1, 1):
            raise ValidationError(f"outcome must be +1 or -1, got {outcome}")
        return (IDENTITY_2 + outcome * self.matrix) / 2.0


def bloch_to_observable(r) -> Observable2:
    """Build the observable r . sigma from a (nearly) unit 3-vector.

    Vectors with norm within ``BLOCH_NORM_TOL`` of 1 are renormalized;
    anything further off raises :class:`BlochVectorError`.
    """
    vec = np.asarray(r, dtype=float)
    if vec.shape != (3,):
        raise BlochVectorError(f"Bloch vector must have 3 components, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise BlochVectorError("Bloch vector entries must be finite")
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > BLOCH_NORM_TOL:
        raise BlochVectorError(f"Bloch vector norm {norm} outside "
                               f"[{1 - BLOCH_NORM_TOL}, {1 + BLOCH_NORM_TOL}]")
    return Observable2(bloch=vec / norm)


def tensor_product(factors) -> np.ndarray:
    """Kronecker product of 2x2 operators in party order 1..n."""
    factors = list(factors)
    if not factors:
        raise ValidationError("tensor_product requires at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    if out.shape != (2, 2):
        raise ValidationError(f"factors must be 2x2, got shape {out.shape}")
    for factor in factors[1:]:
        factor = np.asarray(factor, dtype=complex)
        if factor.shape != (2, 2):
            raise ValidationError(f"factors must be 2x2, got shape {factor.shape}")
        out = np.kron(out, factor)
    return out


def ghz_state(n: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) on ``n`` qubits, 2 <= n <= MAX_QUBITS."""
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= MAX_QUBITS:
        raise ValidationError(f"GHZ qubit count must be an integer in [2, {MAX_QUBITS}], got {n}")
    amplitudes = np.zeros(2**n, dtype=complex)
    amplitudes[0] = amplitudes[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amplitudes)


def depolarize(state: PureState, v: float) -> MixedState:
    """Mix a pure state with white noise: v |psi><psi| + (1 - v) I / 2^n."""
    if not isinstance(state, PureState):
        raise ValidationError("depolarize expects a PureState")
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"visibility must lie in [0, 1], got {v}")
    dim = state.dim
    rho = v * state.density_matrix() + (1.0 - v) * np.eye(dim) / dim
    return MixedState(rho)


def expectation(state: PureState | MixedState, op: np.ndarray) -> float:
    """<psi|op|psi> or Tr[rho op] as a real number.

    A leftover imaginary part above 1e-6 signals an inconsistent operator
    (non-Hermitian input) and raises; smaller residue is discarded.
    """
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValidationError(f"operator must be square, got shape {op.shape}")
    if isinstance(state, PureState):
        if op.shape[0] != state.dim:
            raise ValidationError(f"operator dim {op.shape[0]} != state dim {state.dim}")
        value = complex(state.amplitudes.conj() @ (op @ state.amplitudes))
    elif isinstance(state, MixedState):
        if op.shape[0] != state.dim:
            raise ValidationError(f"operator dim {op.shape[0]} != state dim {state.dim}")
        value = complex(np.trace(state.matrix @ op))
    else:
        raise ValidationError(f"unsupported state type {type(state).__name__}")
    if abs(value.imag) > 1e-6:
        raise NumericError(f"expectation has imaginary residue {value.imag}")
    return float(value.real)
