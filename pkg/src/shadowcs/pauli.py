"""Pauli strings, weight-bounded families, and exact expectation values.

Strings are ASCII words over ``{I, X, Y, Z}`` ("XXIIII"); site ``k`` of the
word corresponds to bit ``n-1-k`` of a computational-basis index, matching the
Kronecker-product order of :func:`pauli_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb

import numpy as np

from .errors import InvalidArgumentError, NumericalError, ResourceLimitError

PAULI_LETTERS = "IXYZ"

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

#: Dense-matrix realizations refuse above this qubit count unless overridden.
DEFAULT_QUBIT_CAP = 8

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8


@dataclass(frozen=True)
class PauliString:
    """A length-n word over {I, X, Y, Z} with its non-identity count cached."""

    word: str

    def __post_init__(self):
        if not self.word or any(c not in PAULI_LETTERS for c in self.word):
            raise InvalidArgumentError(
                f"Pauli word must be a nonempty string over I/X/Y/Z, got {self.word!r}"
            )

    @cached_property
    def weight(self) -> int:
        return sum(1 for c in self.word if c != "I")

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def support(self) -> tuple[int, ...]:
        """Site indices carrying a non-identity letter."""
        return tuple(k for k, c in enumerate(self.word) if c != "I")

    def __str__(self) -> str:
        return self.word


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated d x d density matrix, d = 2**n."""

    matrix: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidArgumentError(f"density matrix must be square, got {m.shape}")
        n = int(np.log2(m.shape[0]))
        if 2**n != m.shape[0]:
            raise InvalidArgumentError(f"dimension {m.shape[0]} is not a power of 2")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise InvalidArgumentError("density matrix is not Hermitian to 1e-10")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise InvalidArgumentError("density matrix trace differs from 1 beyond 1e-9")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < -POSITIVITY_TOL:
            raise InvalidArgumentError("density matrix has eigenvalue below -1e-8")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n", n)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def weight(p: PauliString) -> int:
    """Number of non-identity letters in the word."""
    return p.weight


def enumerate_paulis(n: int, w_max: int) -> list[PauliString]:
    """All Pauli strings on n qubits with weight in [1, w_max], identity excluded.

    Order is deterministic: ascending weight, then lexicographic site
    combinations, then letters X < Y < Z per site. The family size is
    sum_{k=1}^{w_max} C(n,k) 3^k.
    """
    if w_max < 1 or w_max > n:
        raise InvalidArgumentError(f"need 1 <= w_max <= n, got w_max={w_max}, n={n}")
    out = []
    for k in range(1, w_max + 1):
        for sites in combinations(range(n), k):
            for letters in product("XYZ", repeat=k):
                word = ["I"] * n
                for site, letter in zip(sites, letters):
                    word[site] = letter
                out.append(PauliString("".join(word)))
    return out


def family_size(n: int, w_max: int) -> int:
    """Closed-form count matching :func:`enumerate_paulis`."""
    if w_max < 1 or w_max > n:
        raise InvalidArgumentError(f"need 1 <= w_max <= n, got w_max={w_max}, n={n}")
    return sum(comb(n, k) * 3**k for k in range(1, w_max + 1))


def pauli_matrix(p: PauliString, qubit_cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Dense Kronecker-product realization of the word (leftmost letter first)."""
    if p.n > qubit_cap:
        raise ResourceLimitError(
            f"dense matrix for n={p.n} qubits exceeds cap {qubit_cap}"
        )
    m = np.array([[1.0 + 0j]])
    for c in p.word:
        m = np.kron(m, SINGLE_QUBIT[c])
    return m


def diagonal_action(p: PauliString) -> tuple[int, np.ndarray]:
    """Sparse description of the word's matrix: column c maps to row c ^ xmask.

    Returns (xmask, phase) with ``P[c ^ xmask, c] = phase[c]`` and all other
    entries zero. Used for O(d) traces instead of dense O(d^2) products.
    """
    n = p.n
    xmask = 0
    ymask = 0
    zymask = 0
    for k, c in enumerate(p.word):
        bit = 1 << (n - 1 - k)
        if c in ("X", "Y"):
            xmask |= bit
        if c in ("Y", "Z"):
            zymask |= bit
        if c == "Y":
            ymask |= bit
    idx = np.arange(2**n)
    signs = 1 - 2 * (np.bitwise_count(idx & zymask).astype(np.int64) % 2)
    phase = (1j) ** bin(ymask).count("1") * signs
    return xmask, phase.astype(complex)


def expectation(p: PauliString, rho: DensityMatrix) -> float:
    """Re Tr(P rho); raises if dimensions mismatch or the trace has a large
    imaginary part (which would indicate an invalid state)."""
    if p.n != rho.n:
        raise InvalidArgumentError(
            f"observable acts on {p.n} qubits, state on {rho.n}"
        )
    xmask, phase = diagonal_action(p)
    cols = np.arange(rho.dim) ^ xmask
    tr = np.sum(phase * rho.matrix[np.arange(rho.dim), cols])
    if abs(tr.imag) > 1e-9:
        raise NumericalError(
            f"Tr(P rho) has imaginary part {tr.imag:.2e}; state invalid"
        )
    return float(tr.real)
