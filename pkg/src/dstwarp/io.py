"""Exchange formats for forecasts and observations.

Forecast CSV::

    origin,h1,h2,...,hH
    2001-04-01T06:00:00,-12.0,-12.0,...

Observation CSV::

    timestamp,value

Timestamps must increase but may skip hours (those hours are missing).
Empty cells are missing values. Lines starting with ``#`` are comments; the
CLI uses one to record the run configuration.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DataError
from .timeseries import ForecastTable, TimeSeries, format_hours, to_hours


def config_line(config: dict) -> str:
    return "# config: " + json.dumps(config, sort_keys=True, separators=(",", ":"))


def read_config(path) -> dict | None:
    """The embedded run configuration of a CSV written by the CLI, if any."""
    with open(path) as fh:
        for line in fh:
            if line.startswith("# config: "):
                return json.loads(line[len("# config: "):])
            if not line.startswith("#"):
                return None
    return None


def _rows(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with path.open(newline="") as fh:
        numbered = [(n, line) for n, line in enumerate(fh, start=1)
                    if line.strip() and not line.startswith("#")]
    if not numbered:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in next(csv.reader([numbered[0][1]]))]
    for n, line in numbered[1:]:
        yield header, n, next(csv.reader([line]))


def _cell(text: str, path, lineno) -> float:
    text = text.strip()
    if not text:
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise DataError(f"{path}: line {lineno}: bad value {text!r}") from None


def _fmt(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else ""


def read_observation(path, column: str | None = None) -> TimeSeries:
    """Read ``timestamp,<column>`` rows into a (possibly gapped) hourly series.

    ``column`` defaults to ``value`` when present, else ``dst``.
    """
    stamps, values = [], []
    for header, lineno, row in _rows(path):
        if column is None:
            column = "value" if "value" in header else "dst"
        if "timestamp" not in header or column not in header:
            raise DataError(f"{path}: expected 'timestamp' and {column!r} columns")
        if len(row) != len(header):
            raise DataError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            stamps.append(to_hours(row[header.index("timestamp")]))
        except DataError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from None
        values.append(_cell(row[header.index(column)], path, lineno))
    if not stamps:
        raise DataError(f"{path}: no data rows")
    stamps = np.asarray(stamps, dtype=np.int64)
    if np.any(np.diff(stamps) <= 0):
        raise DataError(f"{path}: timestamps must be strictly increasing")
    out = np.full(int(stamps[-1] - stamps[0]) + 1, np.nan)
    out[stamps - stamps[0]] = values
    return TimeSeries(int(stamps[0]), out)


def write_observation(series: TimeSeries, path, config: dict | None = None) -> None:
    """Write the valid samples of ``series``; gaps are implied by skipped hours."""
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write(config_line(config) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "value"])
        for t, v, ok in zip(series.times, series.values, series.valid):
            if ok:
                writer.writerow([format_hours(t), _fmt(v)])


def read_forecast(path, observation: TimeSeries) -> ForecastTable:
    origins, preds = [], []
    width = None
    for header, lineno, row in _rows(path):
        if width is None:
            if not header or header[0] != "origin" or len(header) < 2:
                raise DataError(f"{path}: header must be origin,h1,...,hH")
            expected = [f"h{k}" for k in range(1, len(header))]
            if header[1:] != expected:
                raise DataError(f"{path}: header must be origin,h1,...,hH")
            width = len(header) - 1
        if len(row) != width + 1:
            raise DataError(f"{path}: line {lineno}: expected {width + 1} fields, got {len(row)}")
        try:
            origins.append(to_hours(row[0]))
        except DataError as exc:
            raise DataError(f"{path}: line {lineno}: {exc}") from None
        preds.append([_cell(c, path, lineno) for c in row[1:]])
    if not origins:
        raise DataError(f"{path}: no forecasts")
    return ForecastTable(np.asarray(origins), np.asarray(preds, dtype=float), observation)


def write_forecast(table: ForecastTable, path, config: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write(config_line(config) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["origin", *(f"h{k}" for k in range(1, table.horizons + 1))])
        for t, row in zip(table.origins, table.predictions):
            writer.writerow([format_hours(t), *(_fmt(x) for x in row)])
