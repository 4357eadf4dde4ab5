"""Core data model: hourly series, feature frames and forecast tables.

Time is kept as integer hours since 1970-01-01T00 UTC. Calendar conversion
happens only through :func:`to_hours` / :func:`to_datetime64`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError

FEATURES = ("v_sw", "rho_sw", "b_z", "b_mag", "dst")

_EPOCH = np.datetime64("1970-01-01T00", "h")


def to_hours(stamp) -> int:
    """Convert a timestamp (ISO string, datetime or datetime64) to epoch hours.

    Stamps that are not on a whole hour raise :class:`DataError`.
    """
    if isinstance(stamp, datetime):
        if stamp.tzinfo is not None:
            stamp = stamp.astimezone(timezone.utc).replace(tzinfo=None)
        stamp = np.datetime64(stamp)
    elif isinstance(stamp, str):
        text = stamp.strip()
        if text.endswith("Z"):
            text = text[:-1]
        if len(text) > 19 and text[19] in "+-":
            if text[19:] not in ("+00:00", "-00:00", "+0000"):
                raise DataError(f"non-UTC timestamp {stamp!r}")
            text = text[:19]
        try:
            stamp = np.datetime64(text)
        except ValueError as exc:
            raise DataError(f"unparseable timestamp {stamp!r}") from exc
    stamp = np.datetime64(stamp)
    hours = stamp.astype("datetime64[h]")
    if hours != stamp:
        raise DataError(f"timestamp {stamp} is not on a whole hour")
    return int((hours - _EPOCH).astype(np.int64))


def to_datetime64(hours) -> np.ndarray | np.datetime64:
    return _EPOCH + np.asarray(hours, dtype=np.int64).astype("timedelta64[h]")


def format_hours(hours: int) -> str:
    """ISO-8601 text (``YYYY-MM-DDTHH:00:00``) for an epoch hour."""
    return str(to_datetime64(int(hours))) + ":00:00"


def month_index(hours) -> np.ndarray:
    """Months since 1970-01 for each epoch hour (a calendar-month key)."""
    months = to_datetime64(hours).astype("datetime64[M]")
    return months.astype(np.int64)


def month_label(key: int) -> str:
    return str(np.datetime64(int(key), "M"))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Hourly scalar series with a validity mask.

    ``values[i]`` is the sample at ``start + i`` hours. Invalid cells keep
    whatever value they were given; consumers must consult ``valid``.
    """

    start: int
    values: np.ndarray
    valid: np.ndarray = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise DataError("a TimeSeries needs a 1-D array with at least one value")
        if self.valid is None:
            valid = np.isfinite(values)
        else:
            valid = np.array(self.valid, dtype=bool)
            if valid.shape != values.shape:
                raise DataError("values and valid must have the same length")
            valid &= np.isfinite(values)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "valid", _frozen(valid))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> int:
        """Epoch hour one past the last sample."""
        return self.start + len(self)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start, self.end, dtype=np.int64)

    def at(self, hours) -> tuple[np.ndarray, np.ndarray]:
        """Values and validity at the given epoch hours; out-of-range is invalid."""
        idx = np.asarray(hours, dtype=np.int64) - self.start
        inside = (idx >= 0) & (idx < len(self))
        safe = np.where(inside, idx, 0)
        return self.values[safe], inside & self.valid[safe]

    def slice(self, lo: int, hi: int) -> "TimeSeries":
        """Sub-series on index range ``[lo, hi)``."""
        return TimeSeries(self.start + lo, self.values[lo:hi], self.valid[lo:hi])

    def with_values(self, values) -> "TimeSeries":
        return TimeSeries(self.start, values, self.valid)


@dataclass(frozen=True)
class Segment:
    """A maximal run of valid samples: indices ``[offset, offset + length)``."""

    offset: int
    length: int

    @property
    def stop(self) -> int:
        return self.offset + self.length


def contiguous_segments(series: TimeSeries | np.ndarray) -> list[Segment]:
    """Maximal runs of valid samples, in order.

    Accepts a :class:`TimeSeries` or a bare boolean mask.
    """
    mask = series.valid if isinstance(series, TimeSeries) else np.asarray(series, dtype=bool)
    padded = np.concatenate(([False], mask, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return [Segment(int(a), int(b - a)) for a, b in zip(starts, stops)]


@dataclass(frozen=True)
class FeatureFrame:
    """Aligned hourly features sharing start time and length."""

    features: Mapping[str, TimeSeries]

    def __post_init__(self):
        if not self.features:
            raise DataError("a FeatureFrame needs at least one feature")
        items = dict(self.features)
        first = next(iter(items.values()))
        for name, series in items.items():
            if series.start != first.start or len(series) != len(first):
                raise DataError(f"feature {name!r} is not aligned with the frame")
        if "dst" in items and not items["dst"].valid.all():
            bad = int(np.flatnonzero(~items["dst"].valid)[0])
            raise DataError(f"dst has an invalid value at row {bad}; Dst must be gap-free")
        object.__setattr__(self, "features", items)

    @classmethod
    def from_arrays(cls, start: int, arrays: Mapping[str, Sequence[float]],
                    valid: Mapping[str, Sequence[bool]] | None = None) -> "FeatureFrame":
        valid = valid or {}
        return cls({k: TimeSeries(start, v, valid.get(k)) for k, v in arrays.items()})

    @property
    def start(self) -> int:
        return next(iter(self.features.values())).start

    def __len__(self) -> int:
        return len(next(iter(self.features.values())))

    def __getitem__(self, name: str) -> TimeSeries:
        return self.features[name]

    def __contains__(self, name: str) -> bool:
        return name in self.features

    @property
    def names(self) -> list[str]:
        return list(self.features)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.start, self.start + len(self), dtype=np.int64)

    def slice(self, lo: int, hi: int) -> "FeatureFrame":
        return FeatureFrame({k: s.slice(lo, hi) for k, s in self.features.items()})

    def select(self, names: Iterable[str]) -> "FeatureFrame":
        return FeatureFrame({k: self.features[k] for k in names})

    def with_feature(self, name: str, series: TimeSeries) -> "FeatureFrame":
        items = dict(self.features)
        items[name] = series
        return FeatureFrame(items)

    def all_valid(self, names: Iterable[str] | None = None) -> np.ndarray:
        names = self.names if names is None else list(names)
        mask = np.ones(len(self), dtype=bool)
        for k in names:
            mask &= self.features[k].valid
        return mask


@dataclass(frozen=True)
class ForecastTable:
    """Forecasts issued at ``origins`` for horizons 1..H hours.

    ``predictions[k, h-1]`` targets the observation at ``origins[k] + h``.
    A cell is evaluable when the prediction is finite and the observation at
    its target time exists and is valid.
    """

    origins: np.ndarray
    predictions: np.ndarray
    observation: TimeSeries
    evaluable: np.ndarray = field(init=False)

    def __post_init__(self):
        origins = np.array(self.origins, dtype=np.int64).reshape(-1)
        preds = np.array(self.predictions, dtype=float)
        if preds.ndim == 1:
            preds = preds.reshape(-1, 1)
        if preds.ndim != 2 or preds.shape[0] != origins.size or preds.shape[1] < 1:
            raise DataError("predictions must be an origins x horizons matrix")
        if origins.size > 1 and np.any(np.diff(origins) <= 0):
            raise DataError("origins must be strictly increasing")
        h = np.arange(1, preds.shape[1] + 1)
        _, obs_ok = self.observation.at(origins[:, None] + h[None, :])
        object.__setattr__(self, "origins", _frozen(origins))
        object.__setattr__(self, "predictions", _frozen(preds))
        object.__setattr__(self, "evaluable", _frozen(obs_ok & np.isfinite(preds)))

    @property
    def horizons(self) -> int:
        return self.predictions.shape[1]

    def __len__(self) -> int:
        return self.origins.size

    def _check_horizon(self, h: int) -> None:
        if not 1 <= h <= self.horizons:
            raise ValueError(f"horizon {h} outside 1..{self.horizons}")

    def align(self, h: int) -> tuple[np.ndarray, np.ndarray]:
        """Paired (model, observation) values at horizon ``h``, in time order."""
        self._check_horizon(h)
        keep = self.evaluable[:, h - 1]
        obs, _ = self.observation.at(self.origins[keep] + h)
        return self.predictions[keep, h - 1].copy(), obs

    def aligned_series(self, h: int) -> tuple[TimeSeries, TimeSeries]:
        """Model and observation on the target-time axis for horizon ``h``.

        Both series span the first to the last target time; hours without an
        evaluable cell are invalid. Used to find gap-free stretches.
        """
        self._check_horizon(h)
        keep = self.evaluable[:, h - 1]
        if not keep.any():
            raise DataError(f"no evaluable forecasts at horizon {h}")
        targets = self.origins[keep] + h
        start = int(targets[0])
        size = int(targets[-1]) - start + 1
        model = np.full(size, np.nan)
        mask = np.zeros(size, dtype=bool)
        model[targets - start] = self.predictions[keep, h - 1]
        mask[targets - start] = True
        obs, _ = self.observation.at(np.arange(start, start + size))
        return TimeSeries(start, model, mask), TimeSeries(start, obs, mask)

    @classmethod
    def concatenate(cls, tables: Sequence["ForecastTable"]) -> "ForecastTable":
        """Merge tables over disjoint time ranges into one table."""
        tables = sorted(tables, key=lambda t: (t.observation.start, t.origins[0] if len(t) else 0))
        if not tables:
            raise DataError("nothing to concatenate")
        horizons = {t.horizons for t in tables}
        if len(horizons) != 1:
            raise DataError("tables disagree on the number of horizons")
        start = min(t.observation.start for t in tables)
        stop = max(t.observation.end for t in tables)
        values = np.full(stop - start, np.nan)
        mask = np.zeros(stop - start, dtype=bool)
        for t in tables:
            lo = t.observation.start - start
            hi = lo + len(t.observation)
            if mask[lo:hi].any():
                raise DataError("tables overlap in time")
            values[lo:hi] = t.observation.values
            mask[lo:hi] = t.observation.valid
        origins = np.concatenate([t.origins for t in tables])
        preds = np.vstack([t.predictions for t in tables])
        return cls(origins, preds, TimeSeries(start, values, mask))
