"""L1 sparse recovery: cyclic coordinate-descent LASSO with warm-started
alpha sweeps, plus a brute-force restricted-isometry estimator for tiny sizes.

The objective is (1/2N) ||A z - y||_2^2 + alpha ||z||_1 on the rescaled pair
(A, y) with A = sqrt(N/m) P_Omega F^T and y = sqrt(N/m) * samples. Since
||A z - y||^2 = (N/m) ||P_Omega F^T z - samples||^2, this equals the common
1/(2m)-convention objective on the unscaled pair, so alpha values carry over
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numba
import numpy as np

from .errors import InvalidArgumentError, NumericalError, ResourceLimitError
from .transform import MeasurementOperator, SamplingPlan


@dataclass(frozen=True)
class LassoConfig:
    """Solver knobs; tol bounds the largest single-coordinate update."""

    alpha: float
    max_iters: int = 100_000
    tol: float = 1e-8

    def __post_init__(self):
        if self.alpha < 0:
            raise InvalidArgumentError(f"alpha must be >= 0, got {self.alpha}")
        if self.tol <= 0:
            raise InvalidArgumentError(f"tol must be > 0, got {self.tol}")
        if self.max_iters < 1:
            raise InvalidArgumentError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Solution of one LASSO solve plus diagnostics."""

    plan: SamplingPlan
    coefficients: np.ndarray
    signal: np.ndarray
    alpha: float
    iterations: int
    residual: float
    converged: bool


@numba.njit(cache=True)
def _cd_sweeps(AT, y, z, thresh, tol, max_iters):  # pragma: no cover - jitted
    """Cyclic coordinate descent on 1/2||Az-y||^2 + thresh*||z||_1 (thresh =
    N*alpha absorbs the 1/N loss prefactor). AT is A transposed, (N, m)."""
    N, m = AT.shape
    col_norms = np.empty(N)
    for k in range(N):
        s = 0.0
        for i in range(m):
            s += AT[k, i] * AT[k, i]
        col_norms[k] = s
    r = y.copy()
    for k in range(N):
        if z[k] != 0.0:
            for i in range(m):
                r[i] -= AT[k, i] * z[k]
    sweeps = 0
    converged = False
    while sweeps < max_iters:
        sweeps += 1
        max_delta = 0.0
        for k in range(N):
            if col_norms[k] == 0.0:
                continue
            zk = z[k]
            rho = col_norms[k] * zk
            for i in range(m):
                rho += AT[k, i] * r[i]
            if rho > thresh:
                znew = (rho - thresh) / col_norms[k]
            elif rho < -thresh:
                znew = (rho + thresh) / col_norms[k]
            else:
                znew = 0.0
            dz = znew - zk
            if dz != 0.0:
                for i in range(m):
                    r[i] -= AT[k, i] * dz
                z[k] = znew
                if abs(dz) > max_delta:
                    max_delta = abs(dz)
        if max_delta <= tol:
            converged = True
            break
    return sweeps, converged


def lasso_objective(opA: MeasurementOperator, y: np.ndarray, z: np.ndarray, alpha: float) -> float:
    res = opA.apply(z) - y
    return float(0.5 / opA.plan.N * res @ res + alpha * np.sum(np.abs(z)))


def kkt_residuals(opA: MeasurementOperator, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Per-coordinate gradient (1/N) A^T (A z - y) of the smooth loss part."""
    return opA.adjoint(opA.apply(z) - y) / opA.plan.N


def lasso_cd(
    opA: MeasurementOperator,
    y: np.ndarray,
    cfg: LassoConfig,
    z0: np.ndarray | None = None,
) -> ReconstructionResult:
    """Coordinate-descent solve of the penalized L1 problem for one signal."""
    y = np.asarray(y, dtype=float)
    m, N = opA.shape
    if len(y) != m:
        raise InvalidArgumentError(f"y has length {len(y)}, expected {m}")
    if not np.all(np.isfinite(y)):
        raise NumericalError("y contains non-finite entries")
    z = np.zeros(N) if z0 is None else np.array(z0, dtype=float)
    if len(z) != N or not np.all(np.isfinite(z)):
        raise NumericalError("warm start has wrong length or non-finite entries")
    AT = np.ascontiguousarray(opA.to_dense().T)
    sweeps, converged = _cd_sweeps(
        AT, y, z, cfg.alpha * N, cfg.tol, cfg.max_iters
    )
    residual = float(np.linalg.norm(AT.T @ z - y))
    signal = opA.synthesize(z)
    return ReconstructionResult(
        plan=opA.plan,
        coefficients=z,
        signal=signal,
        alpha=cfg.alpha,
        iterations=sweeps,
        residual=residual,
        converged=bool(converged),
    )


def reconstruct_signal(
    plan: SamplingPlan,
    samples: np.ndarray,
    alpha: float,
    tol: float = 1e-8,
    max_iters: int = 100_000,
    z0: np.ndarray | None = None,
) -> ReconstructionResult:
    """Rescale the sampled signal values by sqrt(N/m) and solve the LASSO in
    the DCT basis; returns the full-length reconstruction."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) != plan.m:
        raise InvalidArgumentError(f"expected {plan.m} samples, got {len(samples)}")
    opA = MeasurementOperator(plan=plan)
    y = opA.scale * samples
    return lasso_cd(opA, y, LassoConfig(alpha=alpha, tol=tol, max_iters=max_iters), z0=z0)


@dataclass(frozen=True)
class SweepEntry:
    alpha: float
    result: ReconstructionResult
    rmse: float | None = None
    is_best: bool = False


def default_alpha_grid(num: int = 30, lo: float = 1e-7, hi: float = 1e-2) -> np.ndarray:
    """Log-spaced penalty grid, descending for warm-start efficiency."""
    return np.geomspace(hi, lo, num)


def alpha_sweep(
    plan: SamplingPlan,
    samples: np.ndarray,
    alpha_grid,
    truth: np.ndarray | None = None,
    tol: float = 1e-8,
    max_iters: int = 100_000,
) -> list[SweepEntry]:
    """One reconstruction per alpha, warm-starting each solve from the
    previous solution along the descending-alpha chain. Entries come back in
    the caller's grid order; when truth is given, the RMSE-minimizing entry
    is flagged (ties: smaller alpha)."""
    alpha_grid = list(alpha_grid)
    if not alpha_grid:
        raise InvalidArgumentError("alpha grid is empty")
    order = sorted(range(len(alpha_grid)), key=lambda i: -alpha_grid[i])
    results: dict[int, ReconstructionResult] = {}
    z = None
    for i in order:
        res = reconstruct_signal(
            plan, samples, alpha_grid[i], tol=tol, max_iters=max_iters, z0=z
        )
        z = res.coefficients
        results[i] = res
    entries = []
    rmses = []
    for i, alpha in enumerate(alpha_grid):
        r = None
        if truth is not None:
            diff = results[i].signal - np.asarray(truth, dtype=float)
            r = float(np.linalg.norm(diff) / np.sqrt(plan.N))
        rmses.append(r)
        entries.append(SweepEntry(alpha=float(alpha), result=results[i], rmse=r))
    if truth is not None:
        best = min(range(len(entries)), key=lambda i: (rmses[i], alpha_grid[i]))
        entries[best] = SweepEntry(
            alpha=entries[best].alpha,
            result=entries[best].result,
            rmse=entries[best].rmse,
            is_best=True,
        )
    return entries


def rip_constant_bruteforce(A: np.ndarray, s: int) -> float:
    """Exact isometry constant delta_s by exhausting all size-s supports.

    delta_s = max over supports S of max(lambda_max(G_S) - 1, 1 - lambda_min(G_S))
    with G_S the Gram matrix of the selected columns. Combinatorial: capped at
    N <= 16 columns and s <= 3.
    """
    A = np.asarray(A, dtype=float)
    N = A.shape[1]
    if not 1 <= s <= N:
        raise InvalidArgumentError(f"need 1 <= s <= {N}, got {s}")
    if N > 16 or s > 3:
        raise ResourceLimitError(f"brute-force RIP capped at N<=16, s<=3 (got N={N}, s={s})")
    delta = 0.0
    for support in combinations(range(N), s):
        G = A[:, support].T @ A[:, support]
        lam = np.linalg.eigvalsh(G)
        delta = max(delta, lam[-1] - 1.0, 1.0 - lam[0])
    return float(delta)
