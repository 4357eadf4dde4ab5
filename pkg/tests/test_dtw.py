import math
import time

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dstwarp.dtw import WindowConstraint, backtrack, cumulative_grid, distance, dtw, dtw_cost
from dstwarp.errors import NumericalError

from oracles import brute_dtw

series = st.lists(st.integers(-5, 5), min_size=1, max_size=7)


def check_path(path, n, m, window):
    pairs = path.pairs()
    assert pairs[0] == (0, 0) and pairs[-1] == (n - 1, m - 1)
    for (a, b), (c, d) in zip(pairs, pairs[1:]):
        assert (c - a, d - b) in {(1, 1), (1, 0), (0, 1)}
    assert max(n, m) <= len(pairs) <= n + m - 1
    assert all(window.admits(i, j) for i, j in pairs)


@pytest.mark.parametrize("x, y, d", [(3, 3, 0), (1, -2, 3), (-5, -1, 4)])
def test_distance(x, y, d):
    assert distance(x, y) == d


def test_distance_rejects_nonfinite():
    with pytest.raises(ValueError):
        distance(math.nan, 1.0)


def test_small_grid_example():
    grid = cumulative_grid([1, 2, 3], [2, 2, 2])
    assert grid.cost == 2
    assert grid[0, 0] == 1
    path = backtrack(grid)
    assert path.pairs(base=1) == [(1, 1), (2, 2), (3, 3)]


def test_grid_matches_recursion():
    q, s = [1, 4, 2, 0], [3, 3, 1, 2, 5]
    dense = cumulative_grid(q, s).dense()
    for i in range(4):
        for j in range(5):
            if i == j == 0:
                continue
            prev = [dense[a, b] for a, b in ((i - 1, j - 1), (i - 1, j), (i, j - 1)) if a >= 0 and b >= 0]
            assert dense[i, j] == abs(q[i] - s[j]) + min(prev)


def test_step_path_example():
    cost, path = dtw([0, 5], [0, 0, 5])
    assert cost == 0
    assert path.pairs(base=1) == [(1, 1), (1, 2), (2, 3)]


def test_identical_series_diagonal():
    q = np.array([3.0, -1.0, 4.0, 1.0, 5.0])
    for window in (None, WindowConstraint.symmetric(0), WindowConstraint.causal(2)):
        cost, path = dtw(q, q, window)
        assert cost == 0
        assert path.pairs() == [(k, k) for k in range(5)]


def test_causal_zero_forces_diagonal(rng):
    q, s = rng.normal(size=20), rng.normal(size=20)
    assert dtw_cost(q, s, WindowConstraint.causal(0)) == pytest.approx(np.abs(q - s).sum(), rel=1e-14)


def test_no_path_raises():
    with pytest.raises(NumericalError):
        cumulative_grid([1, 2], [1, 2, 3], WindowConstraint.causal(3))
    with pytest.raises(NumericalError):
        cumulative_grid([1, 2, 3, 4], [1], WindowConstraint.symmetric(1))


def test_bad_inputs():
    with pytest.raises(ValueError):
        dtw_cost([], [1.0])
    with pytest.raises(ValueError):
        dtw_cost([np.inf], [1.0])
    with pytest.raises(ValueError):
        WindowConstraint("causal", -1)
    with pytest.raises(ValueError):
        WindowConstraint("diagonal", 1)


def test_out_of_band_cells_are_inf():
    grid = cumulative_grid(np.arange(6.0), np.arange(6.0), WindowConstraint.causal(1))
    assert grid[0, 1] == math.inf
    assert grid[4, 2] == math.inf
    assert grid[9, 0] == math.inf
    assert np.isinf(grid.dense()[np.triu_indices(6, 1)]).all()


@given(series, series)
def test_unwindowed_cost_matches_brute_force(q, s):
    assert dtw_cost(q, s) == brute_dtw(q, s)


@given(series, series)
def test_symmetry_without_window(q, s):
    assert dtw_cost(q, s) == dtw_cost(s, q)


@given(series, st.integers(0, 3))
def test_causal_matches_brute_force(q, w):
    rng = np.random.default_rng(len(q) * 7 + w)
    s = list(rng.integers(-5, 6, size=len(q)))
    window = WindowConstraint.causal(w)
    cost, path = dtw(q, s, window)
    assert cost == brute_dtw(q, s, window.admits)
    assert path.cost(q, s) == cost
    check_path(path, len(q), len(s), window)


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=40), st.integers(0, 6), st.integers(0, 6),
       st.sampled_from(["symmetric", "causal"]))
def test_tighter_window_never_cheaper(q, w1, w2, kind):
    s = np.roll(q, 1)
    lo, hi = sorted((w1, w2))
    assert dtw_cost(q, s, WindowConstraint(kind, lo)) >= dtw_cost(q, s, WindowConstraint(kind, hi))
    assert dtw_cost(q, s, WindowConstraint(kind, hi)) >= dtw_cost(q, s)


def test_path_validity_randomized():
    rng = np.random.default_rng(2024)
    for trial in range(10_000):
        n = int(rng.integers(1, 30))
        kind = ("none", "symmetric", "causal")[trial % 3]
        if kind == "causal":
            m = n
        else:
            m = int(rng.integers(1, 30))
        w = int(rng.integers(0, 8))
        if kind == "symmetric":
            w = max(w, abs(n - m))
        window = WindowConstraint(kind, None if kind == "none" else w)
        q, s = rng.normal(size=n), rng.normal(size=m)
        cost, path = dtw(q, s, window)
        check_path(path, n, m, window)
        assert path.cost(q, s) == pytest.approx(cost, rel=1e-12, abs=1e-12)
        # causality: never pair a prediction with a later observation
        if kind == "causal":
            assert np.all(path.j <= path.i)


def test_banded_work_scales_linearly():
    """Runtime grows linearly in n and sublinearly in the band width at this scale."""
    rng = np.random.default_rng(0)

    def best(n, w, reps=7):
        q, s = rng.normal(size=n), rng.normal(size=n)
        window = WindowConstraint.causal(w)
        dtw(q, s, window)
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            dtw(q, s, window)
            times.append(time.perf_counter() - t0)
        return min(times)

    small, large = best(20_000, 6), best(80_000, 6)
    assert large / small < 8  # linear would be 4, quadratic 16
    assert best(20_000, 48) / small < 16
