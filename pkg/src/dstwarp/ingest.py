"""Reading hourly solar-wind/Dst tables, monthly splitting, scaling and windowing."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import DataError, NumericalError
from .timeseries import (
    FEATURES,
    FeatureFrame,
    TimeSeries,
    format_hours,
    month_index,
    month_label,
    to_hours,
)

# OMNI fill conventions for the columns used here. Anything non-finite or
# empty is treated as a fill regardless of this table.
DEFAULT_FILLS: dict[str, tuple[float, ...]] = {
    "v_sw": (9999.0, 9999.99, 99999.9),
    "rho_sw": (999.9, 999.99),
    "b_z": (999.9, 9999.99),
    "b_mag": (999.9, 9999.99),
    "dst": (99999.0,),
}

# 0-based word positions in the whitespace-separated OMNI2 hourly records.
OMNI2_COLUMNS = {"v_sw": 24, "rho_sw": 23, "b_z": 16, "b_mag": 8, "dst": 40}


def read_table(path, schema: Mapping[str, str] | None = None,
               fills: Mapping[str, Iterable[float]] | None = None,
               time_column: str = "timestamp") -> FeatureFrame:
    """Read a headered CSV of hourly rows into a :class:`FeatureFrame`.

    ``schema`` maps feature name to CSV column (default: the feature names in
    :data:`FEATURES` that exist in the header). Cells equal to a sentinel in
    ``fills`` (default :data:`DEFAULT_FILLS`), empty cells and non-finite
    values are marked invalid. Rows must be strictly hourly-consecutive.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with path.open(newline="") as fh:
        lines = [(n, line) for n, line in enumerate(fh, start=1) if not line.startswith("#")]
    if not lines:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in next(csv.reader([lines[0][1]]))]
    if time_column not in header:
        raise DataError(f"{path}: missing {time_column!r} column")
    if schema is None:
        schema = {f: f for f in FEATURES if f in header}
    missing = [c for c in schema.values() if c not in header]
    if missing:
        raise DataError(f"{path}: missing columns {missing}")
    if not schema:
        raise DataError(f"{path}: no feature columns found")
    fills = {**DEFAULT_FILLS, **(fills or {})}
    t_col = header.index(time_column)
    cols = {name: header.index(col) for name, col in schema.items()}
    stamps: list[int] = []
    data = {name: [] for name in cols}
    for lineno, line in lines[1:]:
        if not line.strip():
            continue
        row = next(csv.reader([line]))
        if len(row) != len(header):
            raise DataError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            stamps.append(to_hours(row[t_col]))
        except DataError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from None
        for name, c in cols.items():
            text = row[c].strip()
            if not text:
                data[name].append(math.nan)
                continue
            try:
                data[name].append(float(text))
            except ValueError:
                raise DataError(f"{path}: line {lineno}: bad value {text!r} in column {schema[name]!r}") from None
    if not stamps:
        raise DataError(f"{path}: no data rows")
    return _build_frame(path, stamps, data, fills)


def _build_frame(source, stamps, data, fills) -> FeatureFrame:
    stamps = np.asarray(stamps, dtype=np.int64)
    steps = np.diff(stamps)
    if np.any(steps != 1):
        k = int(np.flatnonzero(steps != 1)[0])
        kind = "duplicated or non-monotone" if steps[k] <= 0 else "gapped"
        raise DataError(f"{source}: {kind} timestamps at {format_hours(stamps[k])} -> {format_hours(stamps[k + 1])}")
    series = {}
    for name, values in data.items():
        values = np.asarray(values, dtype=float)
        valid = np.isfinite(values)
        for sentinel in fills.get(name, ()):
            valid &= values != float(sentinel)
        series[name] = TimeSeries(int(stamps[0]), values, valid)
    return FeatureFrame(series)


def read_omni2(path, columns: Mapping[str, int] | None = None,
               fills: Mapping[str, Iterable[float]] | None = None) -> FeatureFrame:
    """Read an OMNI2 hourly ``.dat`` file (year, day-of-year, hour, ...).

    ``columns`` gives 0-based word positions (default :data:`OMNI2_COLUMNS`).
    """
    columns = dict(columns or OMNI2_COLUMNS)
    fills = {**DEFAULT_FILLS, **(fills or {})}
    stamps, data = [], {name: [] for name in columns}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            words = line.split()
            if not words:
                continue
            try:
                year, doy, hour = int(words[0]), int(words[1]), int(words[2])
                t = np.datetime64(f"{year:04d}-01-01T00", "h") + np.timedelta64((doy - 1) * 24 + hour, "h")
                stamps.append(to_hours(t))
                for name, pos in columns.items():
                    data[name].append(float(words[pos]))
            except (ValueError, IndexError):
                raise DataError(f"{path}: line {lineno}: malformed OMNI2 record") from None
    if not stamps:
        raise DataError(f"{path}: no data rows")
    return _build_frame(path, stamps, data, fills)


def write_table(frame: FeatureFrame | Sequence[FeatureFrame], path, header_lines: Sequence[str] = ()) -> None:
    """Write frame(s) as ``timestamp,<features>`` CSV; invalid cells are left empty.

    Several frames (e.g. the months of one split) are written back to back.
    """
    parts = [frame] if isinstance(frame, FeatureFrame) else list(frame)
    names = parts[0].names
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", *names])
        for part in parts:
            cols = [(part[n].values, part[n].valid) for n in names]
            for k, t in enumerate(part.times):
                writer.writerow([format_hours(t), *(repr(float(v[k])) if ok[k] else "" for v, ok in cols)])


def convert_omni2(src, dst, start=None, stop=None) -> int:
    """Convert an OMNI2 ``.dat`` file to the CSV layout read by :func:`read_table`.

    ``start``/``stop`` (inclusive, any timestamp form) trim the range. Returns
    the number of rows written.
    """
    frame = read_omni2(src)
    lo, hi = 0, len(frame)
    if start is not None:
        lo = max(0, to_hours(start) - frame.start)
    if stop is not None:
        hi = min(hi, to_hours(stop) - frame.start + 1)
    frame = frame.slice(lo, hi)
    write_table(frame, dst)
    return len(frame)


# -- monthly split ---------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    """How calendar months are distributed over train/validation/test.

    ``train_fraction`` is a fraction of *all* months; the non-test months that
    are not drawn for training form the validation set.
    """

    test_months: frozenset = frozenset({4, 8, 12})
    train_fraction: float = 0.60
    rng_seed: int = 0

    def __post_init__(self):
        months = frozenset(int(m) for m in self.test_months)
        if not months or not months <= set(range(1, 13)):
            raise ValueError("test_months must be a nonempty subset of 1..12")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.train_fraction + len(months) / 12 >= 1.0:
            raise ValueError("train_fraction leaves no room for a validation set")
        object.__setattr__(self, "test_months", months)

    def to_dict(self) -> dict:
        return {"test_months": sorted(self.test_months), "train_fraction": self.train_fraction,
                "rng_seed": self.rng_seed}


class Split(NamedTuple):
    train: list
    valid: list
    test: list


def month_frames(frame: FeatureFrame) -> dict[int, FeatureFrame]:
    """Split a frame at calendar-month boundaries, keyed by months since 1970-01."""
    keys = month_index(frame.times)
    cuts = np.flatnonzero(np.diff(keys)) + 1
    bounds = np.concatenate(([0], cuts, [len(frame)]))
    return {int(keys[a]): frame.slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])}


def assign_months(keys: Iterable[int], spec: SplitSpec) -> dict[int, str]:
    """Map each month key to ``"train"``, ``"valid"`` or ``"test"``."""
    keys = sorted(int(k) for k in keys)
    labels: dict[int, str] = {}
    rest = []
    for k in keys:
        if k % 12 + 1 in spec.test_months:
            labels[k] = "test"
        else:
            rest.append(k)
    n_train = int(math.floor(spec.train_fraction * len(keys) + 0.5))
    n_train = min(max(n_train, 1), len(rest) - 1)
    order = np.random.default_rng(spec.rng_seed).permutation(len(rest))
    for rank, idx in enumerate(order):
        labels[rest[idx]] = "train" if rank < n_train else "valid"
    return labels


def split_by_month(frame: FeatureFrame, spec: SplitSpec | None = None) -> Split:
    spec = spec or SplitSpec()
    frames = month_frames(frame)
    labels = assign_months(frames, spec)
    out = Split([], [], [])
    for key, part in frames.items():
        getattr(out, labels[key]).append(part)
    for name, parts in zip(Split._fields, out):
        if not parts:
            raise DataError(f"{name} split is empty ({len(frames)} months available)")
    return out


# -- scaling ---------------------------------------------------------------


@dataclass(frozen=True)
class ScalingParams:
    """Per-feature training mean and population standard deviation."""

    mean: Mapping[str, float]
    std: Mapping[str, float]

    def forward(self, name: str, values):
        return (np.asarray(values, dtype=float) - self.mean[name]) / self.std[name]

    def inverse(self, name: str, values):
        return np.asarray(values, dtype=float) * self.std[name] + self.mean[name]

    def to_dict(self) -> dict:
        return {"mean": dict(self.mean), "std": dict(self.std)}

    @classmethod
    def from_dict(cls, data) -> "ScalingParams":
        return cls(dict(data["mean"]), dict(data["std"]))


def _as_frames(frames) -> list[FeatureFrame]:
    return [frames] if isinstance(frames, FeatureFrame) else list(frames)


def fit_scaling(train) -> ScalingParams:
    """Mean and std of every feature over the valid training entries.

    ``train`` is a frame or a list of frames (e.g. the training months).
    """
    frames = _as_frames(train)
    if not frames:
        raise DataError("no training data")
    mean, std = {}, {}
    for name in frames[0].names:
        vals = np.concatenate([f[name].values[f[name].valid] for f in frames])
        if vals.size < 2:
            raise DataError(f"feature {name!r} has fewer than 2 valid training values")
        mu = vals.mean()
        sigma = np.sqrt(np.mean((vals - mu) ** 2))
        if not sigma > 0:
            raise NumericalError(f"feature {name!r} has zero variance in the training set")
        mean[name], std[name] = float(mu), float(sigma)
    return ScalingParams(mean, std)


def apply_scaling(frame: FeatureFrame, params: ScalingParams) -> FeatureFrame:
    """Standardize every feature of ``frame`` that ``params`` knows about."""
    out = {}
    for name, series in frame.features.items():
        if name in params.mean:
            series = series.with_values(params.forward(name, series.values))
        out[name] = series
    return FeatureFrame(out)


# -- sliding windows -------------------------------------------------------


@dataclass(frozen=True)
class WindowSample:
    """Inputs on hours ``origin-lag .. origin`` and targets on ``origin+1 .. origin+H``."""

    origin: int
    inputs: np.ndarray
    target: np.ndarray


@dataclass(frozen=True)
class WindowArrays:
    """Stacked windows: ``inputs`` is (N, features, lag+1), ``targets`` is (N, H)."""

    origins: np.ndarray
    inputs: np.ndarray
    targets: np.ndarray
    features: tuple = field(default=())

    def __len__(self) -> int:
        return self.origins.size

    def samples(self) -> list[WindowSample]:
        return [WindowSample(int(t), x, y) for t, x, y in zip(self.origins, self.inputs, self.targets)]

    @classmethod
    def concatenate(cls, parts: Sequence["WindowArrays"]) -> "WindowArrays":
        parts = list(parts)
        if not parts:
            raise DataError("no window sets to concatenate")
        return cls(np.concatenate([p.origins for p in parts]),
                   np.concatenate([p.inputs for p in parts]),
                   np.concatenate([p.targets for p in parts]),
                   parts[0].features)


def window_origins(frame: FeatureFrame, lag: int, horizons: int, target: str = "dst",
                   features: Sequence[str] | None = None) -> np.ndarray:
    """Row indices ``t`` whose input window and target range are usable."""
    if lag < 0 or horizons < 1:
        raise ValueError("need lag >= 0 and horizons >= 1")
    n = len(frame)
    ok = frame.all_valid(features).astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(ok)))
    tvalid = np.concatenate(([0], np.cumsum(frame[target].valid.astype(np.int64))))
    t = np.arange(lag, n - horizons)
    if t.size == 0:
        return t
    inputs_ok = csum[t + 1] - csum[t - lag] == lag + 1
    targets_ok = tvalid[t + horizons + 1] - tvalid[t + 1] == horizons
    return t[inputs_ok & targets_ok]


def window_arrays(frame: FeatureFrame, lag: int = 6, horizons: int = 6, target: str = "dst",
                  features: Sequence[str] | None = None) -> WindowArrays:
    features = tuple(frame.names if features is None else features)
    idx = window_origins(frame, lag, horizons, target, features)
    stack = np.stack([frame[f].values for f in features])
    offsets = np.arange(-lag, 1)
    inputs = stack[:, idx[:, None] + offsets[None, :]].transpose(1, 0, 2)
    targets = frame[target].values[idx[:, None] + np.arange(1, horizons + 1)[None, :]]
    return WindowArrays(idx + frame.start, inputs.reshape(idx.size, len(features), lag + 1),
                        targets.reshape(idx.size, horizons), features)


def extract_windows(frame: FeatureFrame, lag: int = 6, horizons: int = 6, target: str = "dst",
                    features: Sequence[str] | None = None) -> list[WindowSample]:
    """Every sliding-window sample of ``frame`` with no missing inputs, in origin order."""
    return window_arrays(frame, lag, horizons, target, features).samples()


# -- dataset bundle --------------------------------------------------------


def build_bundle(frame: FeatureFrame, spec: SplitSpec, lag: int = 6, horizons: int = 6) -> dict:
    """Split, scale and window a frame; returns a JSON-ready summary."""
    frames = month_frames(frame)
    labels = assign_months(frames, spec)
    split = split_by_month(frame, spec)
    params = fit_scaling(split.train)
    summary = {"split": spec.to_dict(), "lag": lag, "horizons": horizons,
               "rows": len(frame), "scaling": params.to_dict(), "sets": {}}
    for name, parts in zip(Split._fields, split):
        keys = [k for k, v in labels.items() if v == name]
        n_rows = sum(len(p) for p in parts)
        n_windows = sum(len(window_arrays(p, lag, horizons)) for p in parts)
        valid = {f: int(sum(p[f].valid.sum() for p in parts)) for f in frame.names}
        summary["sets"][name] = {
            "months": [month_label(k) for k in sorted(keys)],
            "rows": n_rows,
            "valid_counts": valid,
            "windows": n_windows,
        }
    return summary


def write_bundle(frame: FeatureFrame, spec: SplitSpec, out_dir, lag: int = 6, horizons: int = 6,
                 header: Mapping | None = None) -> dict:
    """Write ``bundle.json`` plus ``train.csv``/``valid.csv``/``test.csv`` (raw units)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = build_bundle(frame, spec, lag, horizons)
    if header:
        summary = {"config": dict(header), **summary}
    split = split_by_month(frame, spec)
    for name, parts in zip(Split._fields, split):
        write_table(parts, out_dir / f"{name}.csv")
    with open(out_dir / "bundle.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary

