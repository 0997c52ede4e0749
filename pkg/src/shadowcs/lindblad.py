"""Model Hamiltonians, dissipators, vectorized generators, and time evolution
of density matrices on a uniform grid.

Vectorization stacks columns: vec(A X B) = (B^T kron A) vec(X). Under that
convention the generator matrix is

    L = -i (I kron H - H^T kron I)
        + sum_i gamma_i (conj(L_i) kron L_i
                         - 1/2 I kron L_i^dag L_i
                         - 1/2 (L_i^dag L_i)^T kron I).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    InvalidArgumentError,
    NotDiagonalizableError,
    NumericalError,
    ResourceLimitError,
)
from .pauli import (
    SINGLE_QUBIT,
    DensityMatrix,
    PauliString,
    diagonal_action,
    expectation,
    pauli_matrix,
)

#: Dense d^2 x d^2 generators refuse above this qubit count unless overridden.
DEFAULT_SIM_QUBIT_CAP = 6

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """Hamiltonian plus weighted jump operators on n qubits (J = 1 units)."""

    hamiltonian: np.ndarray
    jumps: tuple[tuple[np.ndarray, float], ...]
    n: int

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=complex)
        if H.shape != (2**self.n, 2**self.n):
            raise InvalidArgumentError(
                f"hamiltonian shape {H.shape} != ({2**self.n}, {2**self.n})"
            )
        if np.max(np.abs(H - H.conj().T)) > 1e-10:
            raise InvalidArgumentError("hamiltonian is not Hermitian to 1e-10")
        for op, rate in self.jumps:
            if np.asarray(op).shape != H.shape:
                raise InvalidArgumentError("jump operator shape mismatch")
            if rate < 0:
                raise InvalidArgumentError(f"jump rate must be >= 0, got {rate}")
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(
            self,
            "jumps",
            tuple((np.asarray(op, dtype=complex), float(r)) for op, r in self.jumps),
        )

    @property
    def dim(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_j = (j - 1) dt for j = 1..N."""

    N: int
    dt: float

    def __post_init__(self):
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")
        if self.dt <= 0:
            raise InvalidArgumentError(f"dt must be > 0, got {self.dt}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.N) * self.dt


@dataclass(frozen=True, eq=False)
class SignalMatrix:
    """M x N matrix of expectation values with row/column metadata."""

    values: np.ndarray
    observables: tuple[PauliString, ...]
    grid: TimeGrid

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.observables), self.grid.N):
            raise InvalidArgumentError(
                f"values shape {v.shape} != ({len(self.observables)}, {self.grid.N})"
            )
        if np.max(np.abs(v)) > 1 + 1e-6:
            raise InvalidArgumentError("signal entries exceed 1 + 1e-6 in magnitude")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "observables", tuple(self.observables))

    def row(self, obs: PauliString) -> np.ndarray:
        return self.values[self.observables.index(obs)]


def _site_operator(op2: np.ndarray, site: int, n: int) -> np.ndarray:
    """op2 acting on one site, identity elsewhere."""
    m = np.array([[1.0 + 0j]])
    for k in range(n):
        m = np.kron(m, op2 if k == site else np.eye(2))
    return m


def _grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    """Nearest-neighbor edges of an open rows x cols lattice, row-major sites."""
    edges = []
    for r in range(rows):
        for c in range(cols):
            site = r * cols + c
            if c + 1 < cols:
                edges.append((site, site + 1))
            if r + 1 < rows:
                edges.append((site, site + cols))
    return edges


def _check_cap(n: int, qubit_cap: int):
    if n > qubit_cap:
        raise ResourceLimitError(f"n={n} exceeds dense-simulation cap {qubit_cap}")


def build_heisenberg(
    rows: int, cols: int, J: float = 1.0, qubit_cap: int = DEFAULT_SIM_QUBIT_CAP
) -> np.ndarray:
    """H = J sum over edges of (XX + YY + ZZ) on an open rectangular lattice."""
    n = rows * cols
    _check_cap(n, qubit_cap)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for a, b in _grid_edges(rows, cols):
        for letter in "XYZ":
            op = SINGLE_QUBIT[letter]
            H += J * _site_operator(op, a, n) @ _site_operator(op, b, n)
    return H


def build_tfim(
    rows: int,
    cols: int,
    J: float = 1.0,
    h: float = 1.0,
    qubit_cap: int = DEFAULT_SIM_QUBIT_CAP,
) -> np.ndarray:
    """H = J sum over edges of ZZ + h sum over sites of X."""
    n = rows * cols
    _check_cap(n, qubit_cap)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for a, b in _grid_edges(rows, cols):
        H += J * _site_operator(SINGLE_QUBIT["Z"], a, n) @ _site_operator(
            SINGLE_QUBIT["Z"], b, n
        )
    for q in range(n):
        H += h * _site_operator(SINGLE_QUBIT["X"], q, n)
    return H


def standard_dissipator(
    n: int, gamma_phi: float, gamma_1: float
) -> list[tuple[np.ndarray, float]]:
    """Uniform single-qubit dephasing (Z_q, gamma_phi) and amplitude damping
    (sigma^-_q, gamma_1) jumps; zero-rate channels are omitted."""
    if gamma_phi < 0 or gamma_1 < 0:
        raise InvalidArgumentError("rates must be nonnegative")
    jumps = []
    if gamma_phi > 0:
        for q in range(n):
            jumps.append((_site_operator(SINGLE_QUBIT["Z"], q, n), gamma_phi))
    if gamma_1 > 0:
        for q in range(n):
            jumps.append((_site_operator(SIGMA_MINUS, q, n), gamma_1))
    return jumps


def initial_state(kind: str, n: int, bits: str | None = None) -> DensityMatrix:
    """Pure initial states: 'plus-minus-product' (|+-+-...>), 'ghz'
    ((|0..0> + |1..1>)/sqrt(2)), or 'computational' with a bitstring."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    d = 2**n
    if kind == "plus-minus-product":
        psi = np.array([1.0])
        for k in range(n):
            single = np.array([1.0, 1.0 if k % 2 == 0 else -1.0]) / np.sqrt(2)
            psi = np.kron(psi, single)
    elif kind == "ghz":
        psi = np.zeros(d)
        psi[0] = psi[-1] = 1 / np.sqrt(2)
    elif kind == "computational":
        bits = bits if bits is not None else "0" * n
        if len(bits) != n or any(b not in "01" for b in bits):
            raise InvalidArgumentError(f"bad bitstring {bits!r} for n={n}")
        psi = np.zeros(d)
        psi[int(bits, 2)] = 1.0
    else:
        raise InvalidArgumentError(f"unknown initial state kind {kind!r}")
    return DensityMatrix(np.outer(psi, psi.conj()))


def vectorize_lindbladian(model: LindbladModel) -> np.ndarray:
    """The d^2 x d^2 matrix L with vec(rho_dot) = L vec(rho) (column stacking)."""
    H = model.hamiltonian
    d = model.dim
    eye = np.eye(d)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for op, rate in model.jumps:
        opdop = op.conj().T @ op
        L += rate * (
            np.kron(op.conj(), op)
            - 0.5 * np.kron(eye, opdop)
            - 0.5 * np.kron(opdop.T, eye)
        )
    return L


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(len(v))))
    return np.asarray(v).reshape(d, d, order="F")


def evolve_grid(
    model: LindbladModel, rho0: DensityMatrix, grid: TimeGrid
) -> list[DensityMatrix]:
    """States rho(t_j) for j = 1..N via one matrix exponential of dt*L and
    repeated application to vec(rho); each state is re-validated."""
    if rho0.n != model.n:
        raise InvalidArgumentError(f"state on {rho0.n} qubits, model on {model.n}")
    L = vectorize_lindbladian(model)
    step = scipy.linalg.expm(grid.dt * L)
    if not np.all(np.isfinite(step)):
        raise NumericalError("propagator exp(dt L) has non-finite entries")
    v = vec(rho0.matrix)
    states = [rho0]
    for _ in range(grid.N - 1):
        v = step @ v
        states.append(DensityMatrix(unvec(v)))
    return states


def signal_matrix(
    states: list[DensityMatrix],
    observables: list[PauliString],
    grid: TimeGrid | None = None,
) -> SignalMatrix:
    """S_ij = Tr(O_i rho(t_j)) over all observables and states.

    When no grid is given the column metadata defaults to unit spacing.
    """
    if not states or not observables:
        raise InvalidArgumentError("states and observables must be nonempty")
    n = states[0].n
    if any(s.n != n for s in states) or any(p.n != n for p in observables):
        raise InvalidArgumentError("qubit-count mismatch across inputs")
    if grid is not None and grid.N != len(states):
        raise InvalidArgumentError(f"grid N {grid.N} != state count {len(states)}")
    d = 2**n
    idx = np.arange(d)
    # stack rho[c, c ^ xmask] gathers once per observable across all states
    rho_stack = np.stack([s.matrix for s in states])  # (N, d, d)
    values = np.empty((len(observables), len(states)))
    for i, p in enumerate(observables):
        xmask, phase = diagonal_action(p)
        gathered = rho_stack[:, idx, idx ^ xmask]  # (N, d)
        tr = gathered @ phase
        if np.max(np.abs(tr.imag)) > 1e-9:
            raise NumericalError("expectation trace has large imaginary part")
        values[i] = tr.real
    grid = grid if grid is not None else TimeGrid(N=len(states), dt=1.0)
    return SignalMatrix(values=values, observables=tuple(observables), grid=grid)


@dataclass(frozen=True, eq=False)
class ModalDecomposition:
    """Signal representation sum_k exp(lambda_k t) a_k b_k for one observable."""

    eigenvalues: np.ndarray
    mode_weights: np.ndarray
    condition: float

    def evaluate(self, times: np.ndarray) -> np.ndarray:
        times = np.atleast_1d(np.asarray(times, dtype=float))
        vals = np.exp(np.outer(times, self.eigenvalues)) @ self.mode_weights
        return vals.real


def modal_expansion(
    L: np.ndarray,
    rho0: DensityMatrix,
    obs: PauliString,
    condition_cap: float = 1e8,
) -> ModalDecomposition:
    """Eigen-expansion of the generator: weights a_k b_k = <<O|r_k>><<l_k|rho0>>.

    Refused (NotDiagonalizableError) when the eigenvector matrix condition
    number exceeds the cap; grid evolution stays available in that case.
    """
    L = np.asarray(L)
    evals, V = np.linalg.eig(L)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > condition_cap:
        raise NotDiagonalizableError(
            f"eigenvector condition number {cond:.3e} exceeds cap {condition_cap:.1e}"
        )
    if np.max(evals.real) > 1e-8:
        raise NumericalError(
            f"generator eigenvalue with positive real part {np.max(evals.real):.2e}"
        )
    o_vec = vec(pauli_matrix(obs))
    a = o_vec.conj() @ V  # <<O|r_k>>
    b = np.linalg.solve(V, vec(rho0.matrix))  # <<l_k|rho0>>
    weights = a * b
    t0 = float(np.sum(weights).real)
    exact = expectation(obs, rho0)
    if abs(t0 - exact) > 1e-8:
        raise NumericalError(
            f"modal weights inconsistent at t=0: {t0:.3e} vs {exact:.3e}"
        )
    return ModalDecomposition(eigenvalues=evals, mode_weights=weights, condition=cond)
