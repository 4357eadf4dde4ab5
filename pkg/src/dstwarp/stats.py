"""Autocorrelation diagnostics: ACF, PACF and lag-plot pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .timeseries import TimeSeries


@dataclass(frozen=True)
class CorrelogramRow:
    lag: int
    value: float
    n_pairs: int


def _series(series) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(series, TimeSeries):
        return series.values, series.valid
    x = np.asarray(series, dtype=float).reshape(-1)
    return x, np.isfinite(x)


def autocovariance(series, max_lag: int) -> tuple[np.ndarray, np.ndarray]:
    """Biased autocovariance ``c_k`` for ``k = 0..max_lag`` and pair counts.

    Uses pairs where both ends are valid; every lag is divided by the number
    of valid points, which keeps the sequence positive semi-definite.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    x, valid = _series(series)
    n_valid = int(valid.sum())
    if n_valid <= max_lag + 1:
        raise ValueError(f"need more than {max_lag + 1} valid points, got {n_valid}")
    z = np.where(valid, x - x[valid].mean(), 0.0)
    mask = valid.astype(float)
    cov = np.empty(max_lag + 1)
    pairs = np.empty(max_lag + 1, dtype=np.int64)
    for k in range(max_lag + 1):
        cov[k] = np.dot(z[: z.size - k], z[k:]) / n_valid
        pairs[k] = int(np.dot(mask[: z.size - k], mask[k:]))
    if not cov[0] > 0:
        raise NumericalError("autocorrelation of a constant series is undefined")
    return cov, pairs


def acf(series, max_lag: int) -> list[CorrelogramRow]:
    """Sample autocorrelation at lags ``0..max_lag``."""
    cov, pairs = autocovariance(series, max_lag)
    r = cov / cov[0]
    r[0] = 1.0
    return [CorrelogramRow(k, float(np.clip(r[k], -1.0, 1.0)), int(pairs[k])) for k in range(max_lag + 1)]


def durbin_levinson(rho: np.ndarray) -> np.ndarray:
    """Partial autocorrelations ``alpha(1..K)`` from autocorrelations ``rho[0..K]``.

    Raises :class:`NumericalError` if the sequence is not positive definite.
    """
    rho = np.asarray(rho, dtype=float)
    order = rho.size - 1
    out = np.zeros(order)
    phi = np.zeros(order)
    err = 1.0
    for k in range(1, order + 1):
        num = rho[k] - np.dot(phi[: k - 1], rho[k - 1:0:-1])
        a = num / err
        if not abs(a) < 1.0:
            raise NumericalError(f"autocorrelation sequence is not positive definite at lag {k}")
        if k > 1:
            phi[: k - 1] = phi[: k - 1] - a * phi[k - 2::-1]
        phi[k - 1] = a
        err *= 1.0 - a * a
        out[k - 1] = a
    return out


def pacf(series, max_lag: int) -> list[CorrelogramRow]:
    """Partial autocorrelation at lags ``0..max_lag`` via Durbin-Levinson on the ACF.

    Lag 0 is reported as 1 and lag 1 equals the lag-1 autocorrelation.
    """
    cov, pairs = autocovariance(series, max_lag)
    rho = cov / cov[0]
    alpha = durbin_levinson(rho)
    rows = [CorrelogramRow(0, 1.0, int(pairs[0]))]
    rows += [CorrelogramRow(k, float(alpha[k - 1]), int(pairs[k])) for k in range(1, max_lag + 1)]
    return rows


def lag_pairs(series, lag: int) -> np.ndarray:
    """``(x_t, x_{t+lag})`` for every t where both are valid, as an (N, 2) array."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    x, valid = _series(series)
    if lag >= x.size:
        return np.empty((0, 2))
    keep = valid[:-lag] & valid[lag:]
    return np.column_stack([x[:-lag][keep], x[lag:][keep]])


def significance_bound(n: int) -> float:
    """Rule-of-thumb ``3 / sqrt(N)`` band for white-noise correlations."""
    return 3.0 / np.sqrt(n)
