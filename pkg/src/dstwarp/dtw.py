"""Dynamic time warping with banded storage.

Cumulative-distance recursion over an ``n x m`` grid with pointwise
distance ``|q_i - s_j|``::

    D[i, j] = |q_i - s_j| + min(D[i-1, j-1], D[i-1, j], D[i, j-1])

Only cells admitted by the window are stored, so a width-``w`` band costs
O(n*w) time and memory. Indices are 0-based in code; ``WarpPath.pairs``
can return 1-based pairs for display.

The reported cost is the plain path sum ``D[n-1, m-1]`` (no square root;
the minimising path is the same either way).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .errors import NumericalError


@dataclass(frozen=True)
class WindowConstraint:
    """Admissible cells of the alignment grid.

    ``kind`` is ``"none"``, ``"symmetric"`` (``|i - j| <= w``) or
    ``"causal"`` (``0 <= i - j <= w``, where ``i`` indexes the model
    series and ``j`` the observations, so a prediction is never matched to
    an observation that lies in its future).
    """

    kind: str = "none"
    w: int | None = None

    def __post_init__(self):
        if self.kind not in ("none", "symmetric", "causal"):
            raise ValueError(f"unknown window kind {self.kind!r}")
        if self.kind == "none":
            object.__setattr__(self, "w", None)
        else:
            if self.w is None or int(self.w) != self.w or self.w < 0:
                raise ValueError("window width must be a nonnegative integer")
            object.__setattr__(self, "w", int(self.w))

    @classmethod
    def none(cls) -> "WindowConstraint":
        return cls("none")

    @classmethod
    def symmetric(cls, w: int) -> "WindowConstraint":
        return cls("symmetric", w)

    @classmethod
    def causal(cls, w: int) -> "WindowConstraint":
        return cls("causal", w)

    def admits(self, i: int, j: int) -> bool:
        if self.kind == "none":
            return True
        if self.kind == "symmetric":
            return abs(i - j) <= self.w
        return 0 <= i - j <= self.w

    def row_bounds(self, n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
        """Inclusive column range ``[lo[i], hi[i]]`` admitted on each row."""
        rows = np.arange(n, dtype=np.int64)
        if self.kind == "none":
            lo = np.zeros(n, dtype=np.int64)
            hi = np.full(n, m - 1, dtype=np.int64)
        elif self.kind == "symmetric":
            lo = np.maximum(0, rows - self.w)
            hi = np.minimum(m - 1, rows + self.w)
        else:
            lo = np.maximum(0, rows - self.w)
            hi = np.minimum(m - 1, rows)
        return lo, hi


def _as_window(window) -> WindowConstraint:
    if window is None:
        return WindowConstraint.none()
    return window


@dataclass(frozen=True)
class CostGrid:
    """Cumulative distances, stored row-banded.

    ``band[i, k]`` holds ``D[i, lo[i] + k]``; everything outside the band is
    ``+inf``. Index with ``grid[i, j]`` (0-based).
    """

    band: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    m: int
    window: WindowConstraint

    @property
    def shape(self) -> tuple[int, int]:
        return self.band.shape[0], self.m

    @property
    def cost(self) -> float:
        last = self.band.shape[0] - 1
        if not self.lo[last] <= self.m - 1 <= self.hi[last]:
            return math.inf
        return float(self.band[last, self.m - 1 - self.lo[last]])

    def __getitem__(self, ij) -> float:
        i, j = ij
        n = self.band.shape[0]
        if not (0 <= i < n and 0 <= j < self.m) or not self.lo[i] <= j <= self.hi[i]:
            return math.inf
        return float(self.band[i, j - self.lo[i]])

    def dense(self) -> np.ndarray:
        n = self.band.shape[0]
        out = np.full((n, self.m), np.inf)
        for i in range(n):
            width = self.hi[i] - self.lo[i] + 1
            if width > 0:
                out[i, self.lo[i]:self.hi[i] + 1] = self.band[i, :width]
        return out


@dataclass(frozen=True)
class WarpPath:
    """Monotone, continuous alignment from (0, 0) to (n-1, m-1)."""

    i: np.ndarray
    j: np.ndarray

    def __len__(self) -> int:
        return self.i.size

    def pairs(self, base: int = 0) -> list[tuple[int, int]]:
        return [(int(a) + base, int(b) + base) for a, b in zip(self.i, self.j)]

    def cost(self, q, s) -> float:
        q = np.asarray(q, dtype=float)
        s = np.asarray(s, dtype=float)
        return float(np.abs(q[self.i] - s[self.j]).sum())


def distance(x: float, y: float) -> float:
    """Pointwise distance |x - y|."""
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("distance is undefined for non-finite values")
    return abs(x - y)


_JIT = dict(nogil=True, cache=True)


@nb.njit(**_JIT)
def _fill(q, s, lo, hi, band):
    n = q.shape[0]
    inf = np.inf
    for i in range(n):
        a, b = lo[i], hi[i]
        if i > 0:
            pa, pb = lo[i - 1], hi[i - 1]
        else:
            pa, pb = 1, 0
        for j in range(a, b + 1):
            d = abs(q[i] - s[j])
            if i == 0 and j == 0:
                band[i, 0] = d
                continue
            best = inf
            if i > 0:
                if j > 0 and pa <= j - 1 <= pb:
                    v = band[i - 1, j - 1 - pa]
                    if v < best:
                        best = v
                if pa <= j <= pb:
                    v = band[i - 1, j - pa]
                    if v < best:
                        best = v
            if j > a:
                v = band[i, j - 1 - a]
                if v < best:
                    best = v
            band[i, j - a] = d + best


@nb.njit(**_JIT)
def _trace(band, lo, hi, m):
    n = band.shape[0]
    i = n - 1
    j = m - 1
    pi = np.empty(n + m - 1, dtype=np.int64)
    pj = np.empty(n + m - 1, dtype=np.int64)
    k = 0
    pi[0] = i
    pj[0] = j
    inf = np.inf
    while i > 0 or j > 0:
        # candidate order fixes tie-breaks: diagonal, then (i, j-1), then (i-1, j)
        best = inf
        step = -1
        if i > 0 and j > 0 and lo[i - 1] <= j - 1 <= hi[i - 1]:
            best = band[i - 1, j - 1 - lo[i - 1]]
            step = 0
        if j > 0 and lo[i] <= j - 1:
            v = band[i, j - 1 - lo[i]]
            if v < best:
                best = v
                step = 1
        if i > 0 and lo[i - 1] <= j <= hi[i - 1]:
            v = band[i - 1, j - lo[i - 1]]
            if v < best:
                best = v
                step = 2
        if step == 0:
            i -= 1
            j -= 1
        elif step == 1:
            j -= 1
        elif step == 2:
            i -= 1
        else:
            break
        k += 1
        pi[k] = i
        pj[k] = j
    return pi[:k + 1][::-1].copy(), pj[:k + 1][::-1].copy()


def _prepare(q, s, window):
    q = np.ascontiguousarray(q, dtype=np.float64)
    s = np.ascontiguousarray(s, dtype=np.float64)
    if q.ndim != 1 or s.ndim != 1 or q.size < 1 or s.size < 1:
        raise ValueError("DTW needs two non-empty 1-D series")
    if not (np.isfinite(q).all() and np.isfinite(s).all()):
        raise ValueError("DTW inputs must be finite")
    return q, s, _as_window(window)


def cumulative_grid(q, s, window: WindowConstraint | None = None) -> CostGrid:
    """Banded cumulative-distance grid of ``q`` (rows) against ``s`` (columns).

    Raises :class:`NumericalError` when the window admits no boundary-to-boundary path.
    """
    q, s, window = _prepare(q, s, window)
    n, m = q.size, s.size
    lo, hi = window.row_bounds(n, m)
    if np.any(lo > hi):
        raise NumericalError(f"{window.kind} window w={window.w} admits no path for n={n}, m={m}")
    width = int((hi - lo).max()) + 1
    band = np.full((n, width), np.inf)
    _fill(q, s, lo, hi, band)
    grid = CostGrid(band, lo, hi, m, window)
    if not math.isfinite(grid.cost):
        raise NumericalError(f"{window.kind} window w={window.w} admits no path for n={n}, m={m}")
    return grid


def backtrack(grid: CostGrid) -> WarpPath:
    """Trace the optimal path back from the last cell.

    At each step the admissible predecessor with the smallest cumulative
    distance is taken; ties go to the diagonal, then ``(i, j-1)``, then
    ``(i-1, j)``.
    """
    if not math.isfinite(grid.cost):
        raise NumericalError("grid has no finite path")
    i, j = _trace(grid.band, grid.lo, grid.hi, grid.m)
    return WarpPath(i, j)


def dtw_cost(q, s, window: WindowConstraint | None = None) -> float:
    return cumulative_grid(q, s, window).cost


def dtw(q, s, window: WindowConstraint | None = None) -> tuple[float, WarpPath]:
    """Cost and optimal path in one pass."""
    grid = cumulative_grid(q, s, window)
    i, j = _trace(grid.band, grid.lo, grid.hi, grid.m)
    return grid.cost, WarpPath(i, j)
