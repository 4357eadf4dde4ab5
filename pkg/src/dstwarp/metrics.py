"""Point-by-point forecast metrics.

``M`` is the model forecast and ``O`` the matching observation. Inputs must
be aligned, equal-length and finite; non-finite values are rejected rather
than skipped. Variances and covariances use the population (1/N) convention.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import NumericalError


def _pair(m, o, min_n: int = 1) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m, dtype=float).reshape(-1)
    o = np.asarray(o, dtype=float).reshape(-1)
    if m.size != o.size:
        raise ValueError(f"length mismatch: {m.size} forecasts vs {o.size} observations")
    if m.size < min_n:
        raise ValueError(f"need at least {min_n} samples, got {m.size}")
    if not (np.isfinite(m).all() and np.isfinite(o).all()):
        raise ValueError("metrics require finite inputs")
    return m, o


def mse(m, o) -> float:
    m, o = _pair(m, o)
    return float(np.mean((m - o) ** 2))


def rmse(m, o) -> float:
    m, o = _pair(m, o)
    d = m - o
    peak = np.abs(d).max()
    if peak == 0:
        return 0.0
    # power-of-two rescale is exact and keeps tiny errors from underflowing when squared
    k = int(np.frexp(peak)[1])
    return float(np.ldexp(np.sqrt(np.mean(np.ldexp(d, -k) ** 2)), k))


def mae(m, o) -> float:
    m, o = _pair(m, o)
    return float(np.mean(np.abs(m - o)))


def me(m, o) -> float:
    """Mean error, model minus observation; positive means over-prediction."""
    m, o = _pair(m, o)
    return float(np.mean(m - o))


def _centered(x: np.ndarray, name: str) -> np.ndarray:
    dx = x - x.mean()
    if not np.any(dx):
        raise NumericalError(f"{name} has zero variance")
    return dx


def pearson_r(m, o) -> float:
    m, o = _pair(m, o, 2)
    dm = _centered(m, "forecast")
    do = _centered(o, "observation")
    r = np.dot(dm, do) / np.sqrt(np.dot(dm, dm) * np.dot(do, do))
    return float(np.clip(r, -1.0, 1.0))


def linear_fit(m, o) -> tuple[float, float]:
    """Offset ``A`` and slope ``B`` of the least-squares line ``M = A + B*O``."""
    m, o = _pair(m, o, 2)
    do = _centered(o, "observation")
    slope = np.dot(m - m.mean(), do) / np.dot(do, do)
    offset = m.mean() - slope * o.mean()
    return float(offset), float(slope)


def prediction_efficiency(m, o) -> float:
    """1 - SSE / total sum of squares of the observations. 1 is perfect; <= 0 is no skill."""
    m, o = _pair(m, o, 2)
    do = _centered(o, "observation")
    return float(1.0 - np.sum((m - o) ** 2) / np.dot(do, do))


@dataclass(frozen=True)
class MetricReport:
    rmse: float
    r: float
    a_offset: float
    b_slope: float
    mae: float
    me: float
    pe: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


FIELDS = ("rmse", "r", "a_offset", "b_slope", "mae", "me", "pe")


def evaluate(m, o) -> MetricReport:
    """The full metric suite for one aligned pair."""
    m, o = _pair(m, o, 2)
    a, b = linear_fit(m, o)
    return MetricReport(
        rmse=rmse(m, o),
        r=pearson_r(m, o),
        a_offset=a,
        b_slope=b,
        mae=mae(m, o),
        me=me(m, o),
        pe=prediction_efficiency(m, o),
        n=int(m.size),
    )


def evaluate_table(table, horizons=None) -> list[MetricReport]:
    """One :class:`MetricReport` per horizon of a ``ForecastTable``."""
    horizons = range(1, table.horizons + 1) if horizons is None else horizons
    return [evaluate(*table.align(h)) for h in horizons]
