"""Closed-form budget and stability calculators: sampling rates, shot-count
ratios, compressibility floors, power-law tails, and the damped-cosine DCT
envelope bound.

The stability constants (c1, c2), the sampling-rate constant (c_m), and the
failure-probability split are not pinned by the underlying recovery theory;
they are configuration with documented defaults and are echoed into output
metadata rather than asserted anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleToleranceError, InvalidArgumentError

RIP_THRESHOLD = 4.0 / math.sqrt(41.0)


@dataclass(frozen=True)
class TheoryParams:
    """Free constants of the recovery guarantees (all configurable)."""

    c1: float = 4.0
    c2: float = 4.0
    c_m: float = 1.0
    rip_constant_target: float = 0.6
    delta_split: float = 0.5  # fraction of delta charged to estimation noise

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0 or self.c_m <= 0:
            raise InvalidArgumentError("c1, c2, c_m must be positive")
        if not 0 < self.rip_constant_target < RIP_THRESHOLD:
            raise InvalidArgumentError(
                f"RIP target must lie in (0, {RIP_THRESHOLD:.4f})"
            )
        if not 0 < self.delta_split < 1:
            raise InvalidArgumentError("delta_split must be in (0, 1)")


def required_timesteps(s: int, N: int, tp: TheoryParams = TheoryParams()) -> int:
    """Sampled-timestep count m = min(N, ceil(c_m * s * ln^2(max(s,2)) * ln N))
    sufficient for stable recovery at sparsity s."""
    if not 1 <= s <= N:
        raise InvalidArgumentError(f"need 1 <= s <= N, got s={s}, N={N}")
    raw = tp.c_m * s * math.log(max(s, 2)) ** 2 * math.log(N)
    return min(N, math.ceil(raw))


def shot_ratio_exact(N: int, m: int, M: int, delta: float) -> float:
    """Baseline-to-subsampled total-shot ratio for exactly sparse signals:
    (N/m) * log(N M / delta) / log(m M / delta), constants suppressed."""
    _check_ratio_args(N, m, M, delta)
    return N / m * math.log(N * M / delta) / math.log(m * M / delta)


def b_rms(s: int, N: int, c1: float = 4.0) -> float:
    """Compressibility floor c1 * log(N/s) / sqrt(s) on the achievable RMSE."""
    if not 1 <= s <= N:
        raise InvalidArgumentError(f"need 1 <= s <= N, got s={s}, N={N}")
    if c1 <= 0:
        raise InvalidArgumentError(f"c1 must be > 0, got {c1}")
    return c1 * math.log(N / s) / math.sqrt(s)


def shot_ratio_approx(
    N: int, m: int, M: int, delta: float, eps_rms: float, b: float
) -> float:
    """Shot ratio for approximately sparse signals: the exact ratio damped by
    ((eps_rms - b)/eps_rms)^2 where b is the compressibility floor."""
    _check_ratio_args(N, m, M, delta)
    if eps_rms <= 0:
        raise InvalidArgumentError(f"eps_rms must be > 0, got {eps_rms}")
    if b < 0:
        raise InvalidArgumentError(f"b must be >= 0, got {b}")
    if b >= eps_rms:
        raise InfeasibleToleranceError(
            f"compressibility floor {b:.3e} >= target {eps_rms:.3e}; "
            "increase s or relax the target"
        )
    return shot_ratio_exact(N, m, M, delta) * ((eps_rms - b) / eps_rms) ** 2


def l1_tail_powerlaw(C_r: float, r: float, s: int) -> float:
    """L1 tail bound C_r / (r - 1) * s^(1-r) for sorted coefficients decaying
    like C_r * k^(-r)."""
    if r <= 1:
        raise InvalidArgumentError(f"power-law exponent must exceed 1, got {r}")
    if C_r <= 0:
        raise InvalidArgumentError(f"C_r must be > 0, got {C_r}")
    if s < 1:
        raise InvalidArgumentError(f"s must be >= 1, got {s}")
    return C_r / (r - 1) * s ** (1.0 - r)


def dct_envelope_bound(
    gamma: float, omega: float, dt: float, N: int, phi: float = 0.0
) -> np.ndarray:
    """Per-frequency upper bounds on the orthonormal DCT-II coefficient
    magnitudes of the sampled damped cosine exp(-gamma n dt) cos(omega n dt + phi).

    bound_k = 1/2 sqrt((2 - delta_k0)/N) * sum over both frequency branches of
    min(N, 2 / sqrt((1 - e^-G)^2 + 4 e^-G sin^2((theta +- a_k)/2))) with
    G = gamma dt, theta = omega dt, a_k = pi k / N. The phase phi drops out of
    the bound; it is accepted for symmetry with the signal being bounded.
    """
    if gamma < 0:
        raise InvalidArgumentError(f"gamma must be >= 0, got {gamma}")
    if dt <= 0:
        raise InvalidArgumentError(f"dt must be > 0, got {dt}")
    if N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    big_gamma = gamma * dt
    theta = omega * dt
    a_k = np.pi * np.arange(N) / N
    prefactor = 0.5 * np.sqrt(2.0 / N) * np.ones(N)
    prefactor[0] = 0.5 * np.sqrt(1.0 / N)
    total = np.zeros(N)
    decay = math.exp(-big_gamma)
    for sign in (-1.0, +1.0):
        denom_sq = (1 - decay) ** 2 + 4 * decay * np.sin((theta + sign * a_k) / 2) ** 2
        denom = np.sqrt(denom_sq)
        with np.errstate(divide="ignore"):
            branch = np.where(denom > 0, 2.0 / np.maximum(denom, 1e-300), np.inf)
        total += np.minimum(float(N), branch)
    return prefactor * total


def cs_timestep_budget(
    w: int,
    eps_rms: float,
    m_family: int,
    delta: float,
    m: int,
    tp: TheoryParams = TheoryParams(),
) -> tuple[int, int]:
    """(per-sampled-timestep, total) snapshot budget when measuring at m of N
    timesteps: the estimation half of the failure budget (delta_split * delta)
    is divided across the m sampled times."""
    from .shadows import bernstein_shots

    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    per = bernstein_shots(w, eps_rms, tp.delta_split * delta / m, m_family)
    return per, m * per


def _check_ratio_args(N, m, M, delta):
    if not 1 <= m <= N:
        raise InvalidArgumentError(f"need 1 <= m <= N, got m={m}, N={N}")
    if M < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {M}")
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must be in (0, 1), got {delta}")
