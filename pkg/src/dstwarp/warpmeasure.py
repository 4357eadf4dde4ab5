"""Time-shift histogram between forecasts and observations.

For each horizon the forecast and observation are aligned with causally
windowed DTW (a forecast is only matched to observations at or before its
own time, at most ``w`` hours back). Every step of the optimal path
contributes its index offset ``|i - j|`` to a histogram over ``0..w``.
A persistence forecast at horizon ``h`` piles nearly all mass on ``h``.

DTW runs separately on each gap-free stretch of the aligned pair, since
aligning across a gap would pair non-adjacent hours; counts are summed over
stretches before normalizing.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dtw import WarpPath, WindowConstraint, backtrack, cumulative_grid
from .errors import DataError
from .timeseries import ForecastTable, contiguous_segments


def warp_values(path: WarpPath) -> np.ndarray:
    """Index offset ``|i - j|`` at every path step."""
    return np.abs(path.i - path.j)


def interior_mask(path: WarpPath, length: int, w: int) -> np.ndarray:
    """Steps away from both ends: ``min(i,j) > w`` and ``max(i,j) <= length - w`` (1-based)."""
    i1, j1 = path.i + 1, path.j + 1
    return (np.minimum(i1, j1) > w) & (np.maximum(i1, j1) <= length - w)


def segment_counts(model, obs, w: int) -> tuple[np.ndarray, np.ndarray]:
    """Warp-value counts (full path, interior only) for one gap-free pair."""
    grid = cumulative_grid(model, obs, WindowConstraint.causal(w))
    path = backtrack(grid)
    dt = warp_values(path)
    full = np.bincount(dt, minlength=w + 1)
    inner = np.bincount(dt[interior_mask(path, len(model), w)], minlength=w + 1)
    return full, inner


def _normalize(counts: np.ndarray) -> np.ndarray:
    total = counts.sum()
    return counts / total if total else np.zeros(counts.size)


@dataclass(frozen=True)
class ShiftHistogram:
    horizon: int
    window: int
    counts: np.ndarray
    interior_counts: np.ndarray
    segments_used: int
    segments_skipped: int
    fractions: np.ndarray = field(init=False)
    interior_fractions: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=np.int64))
        object.__setattr__(self, "interior_counts", np.asarray(self.interior_counts, dtype=np.int64))
        object.__setattr__(self, "fractions", _normalize(self.counts))
        object.__setattr__(self, "interior_fractions", _normalize(self.interior_counts))

    @property
    def total_steps(self) -> int:
        return int(self.counts.sum())

    @property
    def dominant_shift(self) -> int:
        return int(np.argmax(self.counts))

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "window": self.window,
            "counts": self.counts.tolist(),
            "fractions": [float(x) for x in self.fractions],
            "interior_counts": self.interior_counts.tolist(),
            "interior_fractions": [float(x) for x in self.interior_fractions],
            "total_steps": self.total_steps,
            "dominant_shift": self.dominant_shift,
            "segments_used": self.segments_used,
            "segments_skipped": self.segments_skipped,
        }


def default_min_segment(w: int) -> int:
    return 3 * (w + 1)


def measure_horizon(table: ForecastTable, h: int, w: int | None = None,
                    min_segment: int | None = None) -> ShiftHistogram:
    """Shift histogram of horizon ``h`` with causal window ``w`` (default ``h``).

    Gap-free stretches shorter than ``min_segment`` (default ``3 * (w + 1)``)
    are skipped, which keeps endpoint-forced alignments from swamping short
    stretches.
    """
    w = h if w is None else int(w)
    if w < 0:
        raise ValueError("window must be nonnegative")
    min_segment = default_min_segment(w) if min_segment is None else int(min_segment)
    model, obs = table.aligned_series(h)
    counts = np.zeros(w + 1, dtype=np.int64)
    inner = np.zeros(w + 1, dtype=np.int64)
    used = skipped = 0
    for seg in contiguous_segments(model):
        if seg.length < max(min_segment, 1):
            skipped += 1
            continue
        full, part = segment_counts(model.values[seg.offset:seg.stop], obs.values[seg.offset:seg.stop], w)
        counts += full
        inner += part
        used += 1
    if not used:
        raise DataError(f"horizon {h}: no gap-free stretch of at least {min_segment} hours")
    return ShiftHistogram(h, w, counts, inner, used, skipped)


@dataclass(frozen=True)
class WarpMeasureTable:
    rows: tuple

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, h: int) -> ShiftHistogram:
        """Histogram for horizon ``h`` (1-based)."""
        for row in self.rows:
            if row.horizon == h:
                return row
        raise KeyError(h)

    @property
    def max_window(self) -> int:
        return max(r.window for r in self.rows)

    def matrix(self, interior: bool = False) -> np.ndarray:
        """Row-normalized fractions, horizons x (max window + 1), NaN-padded."""
        out = np.full((len(self.rows), self.max_window + 1), np.nan)
        for k, row in enumerate(self.rows):
            frac = row.interior_fractions if interior else row.fractions
            out[k, :frac.size] = frac
        return out

    def to_dict(self) -> dict:
        return {"horizons": [r.to_dict() for r in self.rows]}

    def to_json(self, config: dict | None = None) -> str:
        data = self.to_dict()
        if config is not None:
            data = {"config": config, **data}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def to_csv(self, interior: bool = False, digits: int = 6) -> str:
        """Rows are horizons, columns shifts 0..w_max; shorter rows are padded with empty cells."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["horizon", *(f"dt{k}" for k in range(self.max_window + 1))])
        for row in self.rows:
            frac = row.interior_fractions if interior else row.fractions
            cells = [f"{x:.{digits}f}" for x in frac]
            writer.writerow([row.horizon, *cells, *[""] * (self.max_window + 1 - len(cells))])
        return buf.getvalue()

    def to_markdown(self, interior: bool = False, digits: int = 3) -> str:
        cols = self.max_window + 1
        lines = ["| horizon | " + " | ".join(f"{k}h" for k in range(cols)) + " |",
                 "|---" * (cols + 1) + "|"]
        for row in self.rows:
            frac = row.interior_fractions if interior else row.fractions
            cells = []
            for k in range(cols):
                if k >= frac.size:
                    cells.append("")
                elif k == row.dominant_shift:
                    cells.append(f"**{frac[k]:.{digits}f}**")
                else:
                    cells.append(f"{frac[k]:.{digits}f}")
            lines.append(f"| t+{row.horizon}h | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def measure_all(table: ForecastTable, window: int | None = None, min_segment: int | None = None,
                jobs: int = 1) -> WarpMeasureTable:
    """:func:`measure_horizon` for every horizon; ``window`` overrides ``w = h``.

    ``jobs > 1`` runs horizons on a thread pool; results do not depend on it.
    """
    hs = range(1, table.horizons + 1)

    def one(h):
        return measure_horizon(table, h, window, min_segment)

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            rows = list(pool.map(one, hs))
    else:
        rows = [one(h) for h in hs]
    return WarpMeasureTable(tuple(rows))
