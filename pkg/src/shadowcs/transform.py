"""Orthonormal DCT-II transforms, random timestep masks, and the normalized
subsampled measurement operator A = sqrt(N/m) * P_Omega * F^T.

The transform is applied as a cached dense matrix product: at N <= a few
thousand this is fast, and it keeps the implementation literally equal to the
orthonormal definition F[k, j] = sqrt((2 - delta_k0)/N) cos(pi k (j + 1/2)/N).
An FFT-based fast path is available via ``method="fft"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import InvalidArgumentError


@lru_cache(maxsize=32)
def dct_matrix(N: int) -> np.ndarray:
    """The N x N orthonormal DCT-II matrix (rows indexed by frequency k)."""
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    k = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    F = np.sqrt(2.0 / N) * np.cos(np.pi / N * (j + 0.5) * k)
    F[0, :] = np.sqrt(1.0 / N)
    F.setflags(write=False)
    return F


@lru_cache(maxsize=8)
def dft_real_matrix(N: int) -> np.ndarray:
    """Real orthonormal DFT basis (cos/sin pairs); completeness option only."""
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    j = np.arange(N)
    rows = [np.full(N, 1.0 / np.sqrt(N))]
    for k in range(1, (N + 1) // 2):
        rows.append(np.sqrt(2.0 / N) * np.cos(2 * np.pi * k * j / N))
        rows.append(np.sqrt(2.0 / N) * np.sin(2 * np.pi * k * j / N))
    if N % 2 == 0 and N > 1:
        rows.append((-1.0) ** j / np.sqrt(N))
    F = np.array(rows)
    F.setflags(write=False)
    return F


def dct2_forward(s: np.ndarray, method: str = "matrix") -> np.ndarray:
    """Coefficients x = F s of the orthonormal DCT-II."""
    s = np.asarray(s, dtype=float)
    if method == "fft":
        return scipy.fft.dct(s, type=2, norm="ortho")
    return dct_matrix(len(s)) @ s


def dct2_inverse(x: np.ndarray, method: str = "matrix") -> np.ndarray:
    """Signal s = F^T x; exact inverse of :func:`dct2_forward`."""
    x = np.asarray(x, dtype=float)
    if method == "fft":
        return scipy.fft.idct(x, type=2, norm="ortho")
    return dct_matrix(len(x)).T @ x


@dataclass(frozen=True)
class SamplingPlan:
    """A sorted m-subset of the timestep grid {1, ..., N} (1-based indices)."""

    N: int
    omega: tuple[int, ...]
    seed: int | None = None

    def __post_init__(self):
        om = tuple(int(i) for i in self.omega)
        if not 1 <= len(om) <= self.N:
            raise InvalidArgumentError(f"need 1 <= m <= N, got m={len(om)}, N={self.N}")
        if len(set(om)) != len(om) or any(not 1 <= i <= self.N for i in om):
            raise InvalidArgumentError("omega indices must be unique and in [1, N]")
        if list(om) != sorted(om):
            raise InvalidArgumentError("omega must be sorted ascending")
        object.__setattr__(self, "omega", om)

    @property
    def m(self) -> int:
        return len(self.omega)

    @property
    def indices0(self) -> np.ndarray:
        """Zero-based index array for numpy fancy indexing."""
        return np.asarray(self.omega, dtype=np.intp) - 1

    def to_dict(self) -> dict:
        return {"N": self.N, "m": self.m, "omega": list(self.omega), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "SamplingPlan":
        return cls(N=d["N"], omega=tuple(d["omega"]), seed=d.get("seed"))


def sample_mask(N: int, m: int, rng_seed) -> SamplingPlan:
    """Uniform random m-subset of {1..N} without replacement (partial
    Fisher-Yates), returned sorted; reproducible from the seed."""
    if not 1 <= m <= N:
        raise InvalidArgumentError(f"need 1 <= m <= N, got m={m}, N={N}")
    rng = np.random.default_rng(rng_seed)
    pool = np.arange(1, N + 1)
    for i in range(m):
        j = i + int(rng.integers(0, N - i))
        pool[i], pool[j] = pool[j], pool[i]
    omega = np.sort(pool[:m])
    seed = rng_seed if isinstance(rng_seed, int) else None
    return SamplingPlan(N=N, omega=tuple(int(i) for i in omega), seed=seed)


def subsample(plan: SamplingPlan, v: np.ndarray) -> np.ndarray:
    """Entries of v at the plan's indices, ascending (the P_Omega action)."""
    v = np.asarray(v)
    if len(v) != plan.N:
        raise InvalidArgumentError(f"vector length {len(v)} != plan N {plan.N}")
    return v[plan.indices0]


def scatter(plan: SamplingPlan, w: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`subsample`: place entries back on the full grid."""
    w = np.asarray(w, dtype=float)
    if len(w) != plan.m:
        raise InvalidArgumentError(f"vector length {len(w)} != plan m {plan.m}")
    out = np.zeros(plan.N)
    out[plan.indices0] = w
    return out


@dataclass(frozen=True)
class MeasurementOperator:
    """A = sqrt(N/m) * P_Omega * F^T acting on length-N coefficient vectors.

    Applied as a composed operator (synthesis, gather, scale); densified only
    on demand (RIP estimation, solver column access).
    """

    plan: SamplingPlan
    kind: str = "dct"

    def __post_init__(self):
        if self.kind not in ("dct", "dft"):
            raise InvalidArgumentError(f"unknown transform kind {self.kind!r}")

    @property
    def scale(self) -> float:
        return float(np.sqrt(self.plan.N / self.plan.m))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.plan.m, self.plan.N)

    def _basis(self) -> np.ndarray:
        return dct_matrix(self.plan.N) if self.kind == "dct" else dft_real_matrix(self.plan.N)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """y = A x."""
        x = np.asarray(x, dtype=float)
        if len(x) != self.plan.N:
            raise InvalidArgumentError(f"expected length {self.plan.N}, got {len(x)}")
        return self.scale * subsample(self.plan, self._basis().T @ x)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """A^T y = F * scatter(sqrt(N/m) * y)."""
        y = np.asarray(y, dtype=float)
        if len(y) != self.plan.m:
            raise InvalidArgumentError(f"expected length {self.plan.m}, got {len(y)}")
        return self._basis() @ scatter(self.plan, self.scale * y)

    def synthesize(self, x: np.ndarray) -> np.ndarray:
        """Full-grid signal F^T x for coefficients x."""
        x = np.asarray(x, dtype=float)
        if len(x) != self.plan.N:
            raise InvalidArgumentError(f"expected length {self.plan.N}, got {len(x)}")
        return self._basis().T @ x

    def to_dense(self) -> np.ndarray:
        """Dense m x N matrix; for small-scale verification and the solver."""
        return self.scale * self._basis().T[self.plan.indices0, :]


def apply_measurement(opA: MeasurementOperator, x: np.ndarray) -> np.ndarray:
    """Function-call form of ``opA.apply``."""
    return opA.apply(x)


def top_s_truncate(x: np.ndarray, s: int) -> np.ndarray:
    """Keep the s largest-magnitude entries (ties: lower index wins), zero the
    rest."""
    x = np.asarray(x, dtype=float)
    if not 0 <= s <= len(x):
        raise InvalidArgumentError(f"need 0 <= s <= {len(x)}, got {s}")
    out = np.zeros_like(x)
    if s == 0:
        return out
    keep = np.argsort(-np.abs(x), kind="stable")[:s]
    out[keep] = x[keep]
    return out


def truncation_rmse_curve(signal: np.ndarray, s_values) -> list[tuple[int, float]]:
    """(s, ||x - x_s||_2 / sqrt(N)) for each s, where x are the signal's DCT
    coefficients; by Parseval this equals the signal-domain truncation RMSE."""
    signal = np.asarray(signal, dtype=float)
    N = len(signal)
    x = dct2_forward(signal)
    out = []
    for s in s_values:
        if not 0 <= s <= N:
            raise InvalidArgumentError(f"need 0 <= s <= {N}, got {s}")
        tail = x - top_s_truncate(x, int(s))
        out.append((int(s), float(np.linalg.norm(tail) / np.sqrt(N))))
    return out
