"""Error and shot-budget metrics plus per-weight aggregation of run reports."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, UndefinedSignalError
from .pauli import PauliString

SNR_CLAMP_DB = 300.0

#: filter outcomes recorded on each report
KEPT = "kept"
VARIANCE_FILTERED = "variance-filtered"
SNR_FILTERED = "snr-filtered"


def rmse(truth: np.ndarray, estimate: np.ndarray) -> float:
    """||truth - estimate||_2 / sqrt(N)."""
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if truth.shape != estimate.shape or truth.ndim != 1 or len(truth) < 1:
        raise InvalidArgumentError(
            f"need equal-length 1-D vectors, got {truth.shape} and {estimate.shape}"
        )
    return float(np.linalg.norm(truth - estimate) / math.sqrt(len(truth)))


def snr_db(truth: np.ndarray, estimate: np.ndarray) -> float:
    """10 log10(sum truth^2 / sum (estimate - truth)^2), clamped to +300 dB
    when the error is exactly zero."""
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if truth.shape != estimate.shape or truth.ndim != 1:
        raise InvalidArgumentError("need equal-length 1-D vectors")
    signal_energy = float(truth @ truth)
    if signal_energy == 0.0:
        raise UndefinedSignalError("SNR undefined: truth is identically zero")
    err = estimate - truth
    error_energy = float(err @ err)
    if error_energy == 0.0:
        return SNR_CLAMP_DB
    return float(10.0 * np.log10(signal_energy / error_energy))


def variance_filter(truth: np.ndarray, threshold: float = 1e-3) -> bool:
    """Keep iff the population variance of the true signal is >= threshold."""
    truth = np.asarray(truth, dtype=float)
    if truth.ndim != 1 or len(truth) < 2:
        raise InvalidArgumentError("variance filter needs at least 2 samples")
    return bool(np.var(truth) >= threshold)


def snr_filter(
    truth: np.ndarray, estimate: np.ndarray, threshold_db: float = 1.0
) -> bool:
    """Keep iff snr_db(truth, estimate) >= threshold_db."""
    return snr_db(truth, estimate) >= threshold_db


def srf(N: int, m: int, R: float) -> float:
    """Inferred shot-reduction factor (N/m) / R^2 under 1/sqrt(shots) noise
    scaling; R is the subsampled-to-baseline RMSE ratio."""
    if not 1 <= m <= N:
        raise InvalidArgumentError(f"need 1 <= m <= N, got m={m}, N={N}")
    if R <= 0:
        raise InvalidArgumentError(f"R must be > 0, got {R}")
    return (N / m) / R**2


@dataclass(frozen=True)
class ObservableReport:
    """Per-observable outcome of one (snapshot budget, mask size) cell."""

    pauli: PauliString
    weight: int
    rmse_st: float
    rmse_cs_best: float | None
    alpha_star: float | None
    snr_db: float
    filtered: str = KEPT  # KEPT / VARIANCE_FILTERED / SNR_FILTERED

    @property
    def ratio(self) -> float | None:
        """rmse_cs_best / rmse_st, undefined when rmse_st == 0 or unfiltered
        reconstruction is missing."""
        if self.rmse_cs_best is None or self.rmse_st == 0:
            return None
        return self.rmse_cs_best / self.rmse_st

    def srf(self, N: int, m: int) -> float | None:
        r = self.ratio
        return None if r is None or r == 0 else srf(N, m, r)


@dataclass(frozen=True)
class WeightSummary:
    weight: int
    n_kept: int
    n_variance_filtered: int
    n_snr_filtered: int
    n_srf_excluded: int  # kept but rmse_st == 0, so no ratio
    rmse_st_mean: float | None
    rmse_st_std: float | None
    rmse_cs_mean: float | None
    rmse_cs_std: float | None
    alpha_star_mean: float | None
    alpha_star_std: float | None
    srf_mean: float | None
    srf_std: float | None


def _mean_std(vals: list[float]) -> tuple[float | None, float | None]:
    if not vals:
        return None, None
    arr = np.asarray(vals, dtype=float)
    return float(arr.mean()), float(arr.std())


def aggregate_by_weight(
    reports: list[ObservableReport], N: int | None = None, m: int | None = None
) -> dict[int, WeightSummary]:
    """Per-weight mean/std of the kept reports' metrics; SRF statistics are
    included when the cell's (N, m) is supplied. Empty sectors are omitted."""
    if not reports:
        raise InvalidArgumentError("no reports to aggregate")
    out: dict[int, WeightSummary] = {}
    for w in sorted({r.weight for r in reports}):
        sector = [r for r in reports if r.weight == w]
        kept = [r for r in sector if r.filtered == KEPT]
        ratios = [r for r in kept if r.ratio is not None]
        rmse_st = _mean_std([r.rmse_st for r in kept])
        rmse_cs = _mean_std([r.rmse_cs_best for r in kept if r.rmse_cs_best is not None])
        alpha = _mean_std([r.alpha_star for r in kept if r.alpha_star is not None])
        if N is not None and m is not None:
            srf_stats = _mean_std([srf(N, m, r.ratio) for r in ratios])
        else:
            srf_stats = (None, None)
        out[w] = WeightSummary(
            weight=w,
            n_kept=len(kept),
            n_variance_filtered=sum(r.filtered == VARIANCE_FILTERED for r in sector),
            n_snr_filtered=sum(r.filtered == SNR_FILTERED for r in sector),
            n_srf_excluded=len(kept) - len(ratios),
            rmse_st_mean=rmse_st[0],
            rmse_st_std=rmse_st[1],
            rmse_cs_mean=rmse_cs[0],
            rmse_cs_std=rmse_cs[1],
            alpha_star_mean=alpha[0],
            alpha_star_std=alpha[1],
            srf_mean=srf_stats[0],
            srf_std=srf_stats[1],
        )
    return out
