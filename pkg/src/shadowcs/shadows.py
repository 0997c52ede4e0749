"""Randomized local-basis snapshot simulation and Pauli estimators.

A snapshot is a uniformly random basis word in {X,Y,Z}^n plus the n-bit
outcome of measuring every qubit in that product basis. The single-shot
estimator for a Pauli word is the product over sites of 1 (identity site),
3*(-1)^bit (basis letter matches), or 0 (mismatch), so it takes values in
{0, +-3^w} and is unbiased for Tr(P rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError, NumericalError, ResourceLimitError
from .pauli import DEFAULT_QUBIT_CAP, DensityMatrix, PauliString

BASIS_LETTERS = "XYZ"

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S_DAG = np.array([[1, 0], [0, -1j]], dtype=complex)
# rotations mapping each basis to the computational one: U P U^dag = Z
_BASIS_ROTATIONS = (
    _HADAMARD,                # X
    _HADAMARD @ _S_DAG,       # Y
    np.eye(2, dtype=complex), # Z
)


@dataclass(frozen=True)
class Snapshot:
    """One measurement record: basis word over {X,Y,Z} and outcome bitstring."""

    bases: str
    outcome: str

    def __post_init__(self):
        if len(self.bases) != len(self.outcome):
            raise InvalidArgumentError("bases and outcome must have equal length")
        if any(c not in BASIS_LETTERS for c in self.bases):
            raise InvalidArgumentError(f"bad basis word {self.bases!r}")
        if any(c not in "01" for c in self.outcome):
            raise InvalidArgumentError(f"bad outcome bitstring {self.outcome!r}")


@dataclass(frozen=True, eq=False)
class ShadowDataset:
    """All snapshots collected at one timestep, in column-code form.

    ``bases`` and ``outcomes`` are (shots, n) uint8 arrays; basis codes are
    0=X, 1=Y, 2=Z and outcomes are bits.
    """

    timestep: int
    bases: np.ndarray
    outcomes: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        b = np.asarray(self.bases, dtype=np.uint8)
        o = np.asarray(self.outcomes, dtype=np.uint8)
        if b.shape != o.shape or b.ndim != 2:
            raise InvalidArgumentError("bases/outcomes must be matching 2-D arrays")
        object.__setattr__(self, "bases", b)
        object.__setattr__(self, "outcomes", o)

    def __len__(self) -> int:
        return self.bases.shape[0]

    @property
    def n(self) -> int:
        return self.bases.shape[1]

    def snapshot(self, i: int) -> Snapshot:
        return Snapshot(
            bases="".join(BASIS_LETTERS[c] for c in self.bases[i]),
            outcome="".join(str(int(b)) for b in self.outcomes[i]),
        )

    def snapshots(self):
        for i in range(len(self)):
            yield self.snapshot(i)


def _joint_probability_table(rho: np.ndarray, n: int) -> np.ndarray:
    """p(outcome | basis word) for every of the 3^n product bases.

    Returns a (3^n, 2^n) array; rows indexed by the base-3 basis code with
    site 0 most significant, columns by the outcome integer with site 0 as
    the most significant bit.
    """
    # per-qubit tensor W[beta, o, a, a'] = U_beta[o, a] * conj(U_beta[o, a'])
    W = np.empty((3, 2, 2, 2), dtype=complex)
    for beta, U in enumerate(_BASIS_ROTATIONS):
        W[beta] = U[:, :, None] * U.conj()[:, None, :]
    T = rho.reshape((2,) * (2 * n))
    for k in range(n):
        ket_axis = 2 * k
        bra_axis = 2 * k + (n - k)
        T = np.tensordot(W, T, axes=([2, 3], [ket_axis, bra_axis]))
        T = np.moveaxis(T, [0, 1], [2 * k, 2 * k + 1])
    # axes now (beta_0, o_0, ..., beta_{n-1}, o_{n-1})
    perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return np.transpose(T, perm).reshape(3**n, 2**n).real


def sample_snapshots(
    rho: DensityMatrix,
    n_shots: int,
    rng_seed,
    timestep: int = 0,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> ShadowDataset:
    """Draw independent uniform basis words and Born-rule outcomes from rho.

    Reproducible: the stream is a Philox generator keyed by the seed, so the
    same (seed, timestep) yields byte-identical datasets.
    """
    if n_shots < 1:
        raise InvalidArgumentError(f"n_shots must be >= 1, got {n_shots}")
    n = rho.n
    if n > qubit_cap:
        raise ResourceLimitError(f"n={n} exceeds snapshot-simulation cap {qubit_cap}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed)))
    bases = rng.integers(0, 3, size=(n_shots, n), dtype=np.uint8)
    uniforms = rng.random(n_shots)

    table = _joint_probability_table(rho.matrix, n)
    if table.min() < -1e-9 or table.max() > 1 + 1e-9:
        raise NumericalError(
            f"Born probabilities outside [0, 1]: min={table.min():.2e}, "
            f"max={table.max():.2e}"
        )
    powers3 = 3 ** np.arange(n - 1, -1, -1)
    codes = bases @ powers3
    outcomes_idx = np.empty(n_shots, dtype=np.int64)
    for code in np.unique(codes):
        sel = codes == code
        p = np.clip(table[code], 0, None)
        cum = np.cumsum(p / p.sum())
        outcomes_idx[sel] = np.clip(
            np.searchsorted(cum, uniforms[sel], side="right"), 0, 2**n - 1
        )
    shifts = np.arange(n - 1, -1, -1)
    outcomes = ((outcomes_idx[:, None] >> shifts) & 1).astype(np.uint8)
    seed = rng_seed if isinstance(rng_seed, int) else None
    return ShadowDataset(timestep=timestep, bases=bases, outcomes=outcomes, seed=seed)


def single_shot_value(snap: Snapshot, p: PauliString) -> float:
    """Product over sites of {1, 3*(-1)^bit, 0}; lands in {0, +-3^weight}."""
    if len(snap.bases) != p.n:
        raise InvalidArgumentError(
            f"snapshot on {len(snap.bases)} qubits, observable on {p.n}"
        )
    value = 1.0
    for letter, basis, bit in zip(p.word, snap.bases, snap.outcome):
        if letter == "I":
            continue
        if letter != basis:
            return 0.0
        value *= 3.0 if bit == "0" else -3.0
    return value


def _support_codes(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    sites = np.array(p.support, dtype=np.intp)
    letters = np.array(
        [BASIS_LETTERS.index(p.word[k]) for k in p.support], dtype=np.uint8
    )
    return sites, letters


def _shot_values(ds: ShadowDataset, p: PauliString) -> np.ndarray:
    """Vectorized single-shot values for every snapshot in the dataset."""
    if ds.n != p.n:
        raise InvalidArgumentError(f"dataset on {ds.n} qubits, observable on {p.n}")
    sites, letters = _support_codes(p)
    if len(sites) == 0:
        return np.ones(len(ds))
    matched = np.all(ds.bases[:, sites] == letters, axis=1)
    signs = np.prod(1 - 2 * ds.outcomes[:, sites].astype(np.int64), axis=1)
    return matched * signs * 3.0 ** len(sites)


def estimate_pauli(ds: ShadowDataset, p: PauliString) -> float:
    """Mean single-shot value; unbiased for Tr(P rho)."""
    if len(ds) == 0:
        raise InvalidArgumentError("dataset is empty")
    return float(np.mean(_shot_values(ds, p)))


def estimate_pauli_mom(ds: ShadowDataset, p: PauliString, k_batches: int) -> float:
    """Median of k contiguous equal-size batch means (remainder dropped)."""
    if k_batches < 1:
        raise InvalidArgumentError(f"k_batches must be >= 1, got {k_batches}")
    if len(ds) < k_batches:
        raise InvalidArgumentError(
            f"dataset of {len(ds)} snapshots cannot form {k_batches} batches"
        )
    vals = _shot_values(ds, p)
    batch = len(ds) // k_batches
    means = vals[: batch * k_batches].reshape(k_batches, batch).mean(axis=1)
    return float(np.median(means))


def estimate_many(ds: ShadowDataset, observables: list[PauliString]) -> np.ndarray:
    """All estimates at once via a per-basis-word outcome-parity transform.

    Equivalent to [estimate_pauli(ds, p) for p in observables] but grouped:
    snapshots sharing a basis word are histogrammed over outcomes, and each
    group's parity sums over every site subset come from one Walsh-Hadamard
    product. Each observable then sums the parities of its support across the
    basis words matching it.
    """
    if len(ds) == 0:
        raise InvalidArgumentError("dataset is empty")
    n = ds.n
    if any(p.n != n for p in observables):
        raise InvalidArgumentError("observable qubit-count mismatch")
    d = 2**n
    powers3 = 3 ** np.arange(n - 1, -1, -1)
    codes = ds.bases @ powers3
    shifts = np.arange(n - 1, -1, -1)
    out_idx = (ds.outcomes.astype(np.int64) @ (1 << shifts.astype(np.int64)))
    uniq, inverse = np.unique(codes, return_inverse=True)
    H = scipy.linalg.hadamard(d).astype(float)
    parities = np.empty((len(uniq), d))
    for g in range(len(uniq)):
        hist = np.bincount(out_idx[inverse == g], minlength=d).astype(float)
        parities[g] = H @ hist
    group_words = (uniq[:, None] // powers3) % 3  # (G, n) basis codes

    est = np.empty(len(observables))
    for i, p in enumerate(observables):
        sites, letters = _support_codes(p)
        if len(sites) == 0:
            est[i] = 1.0
            continue
        mask = np.all(group_words[:, sites] == letters, axis=1)
        tbit = np.sum(1 << (n - 1 - sites))
        est[i] = 3.0 ** len(sites) * parities[mask, tbit].sum() / len(ds)
    return est


def bernstein_shots(w: int, eps: float, delta: float, m_family: int) -> int:
    """Snapshot count sufficient for uniform accuracy eps over m_family
    weight-<=w Pauli words with failure probability delta, from a Bernstein
    tail bound with variance 3^w and range 2*3^w."""
    _check_budget_args(w, eps, delta, m_family)
    return math.ceil(
        3.0**w / eps**2 * math.log(2 * m_family / delta) * (2 + 2 * eps / 3)
    )


def mom_shots(w: int, eps: float, delta: float, m_family: int) -> tuple[int, int]:
    """(snapshots, batch count) for the median-of-means estimator at the same
    target; the batch count is rounded up to the next odd integer."""
    _check_budget_args(w, eps, delta, m_family)
    log_term = math.log(m_family / delta)
    shots = math.ceil(32.0 * log_term * 3.0**w / eps**2)
    k = math.ceil(8.0 * log_term)
    if k % 2 == 0:
        k += 1
    return shots, k


def baseline_budget(
    w: int, eps_rms: float, m_family: int, delta: float, n_timesteps: int
) -> tuple[int, int]:
    """(per-timestep, total) snapshot budget for measuring at every one of
    n_timesteps grid points, with the failure probability split evenly across
    timesteps."""
    if n_timesteps < 1:
        raise InvalidArgumentError(f"n_timesteps must be >= 1, got {n_timesteps}")
    per = bernstein_shots(w, eps_rms, delta / n_timesteps, m_family)
    return per, n_timesteps * per


def _check_budget_args(w, eps, delta, m_family):
    if w < 0:
        raise InvalidArgumentError(f"weight must be >= 0, got {w}")
    if eps <= 0:
        raise InvalidArgumentError(f"eps must be > 0, got {eps}")
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")
    if m_family < 1:
        raise InvalidArgumentError(f"m_family must be >= 1, got {m_family}")


def write_shadow_file(path: Path, ds: ShadowDataset):
    """Persist as text: '# key=value' headers then one 'BASES,BITS' line per
    snapshot."""
    path = Path(path)
    lines = [
        f"# timestep={ds.timestep}",
        f"# seed={ds.seed}",
        f"# shots={len(ds)}",
    ]
    for i in range(len(ds)):
        snap = ds.snapshot(i)
        lines.append(f"{snap.bases},{snap.outcome}")
    path.write_text("\n".join(lines) + "\n")


def read_shadow_file(path: Path) -> ShadowDataset:
    headers = {}
    bases_rows, out_rows = [], []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            headers[key.strip()] = val.strip()
            continue
        if not line.strip():
            continue
        word, _, bits = line.partition(",")
        bases_rows.append([BASIS_LETTERS.index(c) for c in word])
        out_rows.append([int(b) for b in bits])
    seed = headers.get("seed")
    return ShadowDataset(
        timestep=int(headers.get("timestep", 0)),
        bases=np.array(bases_rows, dtype=np.uint8),
        outcomes=np.array(out_rows, dtype=np.uint8),
        seed=None if seed in (None, "None") else int(seed),
    )
