"""Independent reference implementations used by the tests.

Nothing here imports the package under test.
"""

from functools import lru_cache
from itertools import product

import numpy as np


# -- DTW -------------------------------------------------------------------


@lru_cache(maxsize=None)
def monotone_paths(n: int, m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Every boundary-to-boundary monotone, continuous path on an n x m grid (0-based)."""
    out = []

    def walk(i, j, acc):
        acc.append((i, j))
        if i == n - 1 and j == m - 1:
            out.append(tuple(acc))
        else:
            if i + 1 < n and j + 1 < m:
                walk(i + 1, j + 1, acc)
            if i + 1 < n:
                walk(i + 1, j, acc)
            if j + 1 < m:
                walk(i, j + 1, acc)
        acc.pop()

    walk(0, 0, [])
    return tuple(out)


def brute_dtw(q, s, admits=lambda i, j: True) -> float:
    best = np.inf
    for path in monotone_paths(len(q), len(s)):
        if all(admits(i, j) for i, j in path):
            best = min(best, sum(abs(q[i] - s[j]) for i, j in path))
    return best


def incidence(n: int, m: int) -> np.ndarray:
    """(paths, n*m) 0/1 matrix: which grid cells each path visits."""
    paths = monotone_paths(n, m)
    mat = np.zeros((len(paths), n * m), dtype=np.int64)
    for k, path in enumerate(paths):
        for i, j in path:
            mat[k, i * m + j] = 1
    return mat


def all_series(length: int, alphabet=(0, 1, 2)) -> np.ndarray:
    return np.array(list(product(alphabet, repeat=length)), dtype=np.int64)


def brute_min_costs(n: int, m: int, alphabet=(0, 1, 2)) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum path cost for every (q, s) pair of the given lengths, in integer arithmetic."""
    qs, ss = all_series(n, alphabet), all_series(m, alphabet)
    # float64 BLAS products of small integers are exact; cast back at the end
    inc = incidence(n, m).T.astype(np.float64)
    out = np.empty((len(qs), len(ss)), dtype=np.int64)
    for k, q in enumerate(qs):
        dist = np.abs(q[None, :, None] - ss[:, None, :]).reshape(len(ss), n * m).astype(np.float64)
        out[k] = np.rint((dist @ inc).min(axis=1)).astype(np.int64)
    return qs, ss, out


# -- metrics ---------------------------------------------------------------


def metric_oracle(m, o) -> dict:
    """Direct summation in Python floats plus a normal-equations line fit."""
    m = [float(x) for x in m]
    o = [float(x) for x in o]
    n = len(m)
    mm = sum(m) / n
    mo = sum(o) / n
    sse = sum((a - b) ** 2 for a, b in zip(m, o))
    cov = sum((a - mm) * (b - mo) for a, b in zip(m, o)) / n
    vm = sum((a - mm) ** 2 for a in m) / n
    vo = sum((b - mo) ** 2 for b in o) / n
    x = np.column_stack([np.ones(n), o])
    a, b = np.linalg.solve(x.T @ x, x.T @ np.asarray(m))
    return {
        "mse": sse / n,
        "rmse": (sse / n) ** 0.5,
        "r": cov / (vm * vo) ** 0.5,
        "a_offset": float(a),
        "b_slope": float(b),
        "mae": sum(abs(a_ - b_) for a_, b_ in zip(m, o)) / n,
        "me": sum(a_ - b_ for a_, b_ in zip(m, o)) / n,
        "pe": 1.0 - sse / sum((b_ - mo) ** 2 for b_ in o),
    }


# -- autocorrelation -------------------------------------------------------


def simulate_ar(phi, n: int, seed: int, burn: int = 500) -> np.ndarray:
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + burn)
    x = np.zeros(n + burn)
    p = len(phi)
    for t in range(p, n + burn):
        x[t] = sum(phi[k] * x[t - 1 - k] for k in range(p)) + e[t]
    return x[burn:]


def pacf_ols(x, max_lag: int) -> np.ndarray:
    """Last coefficient of the regression of x_t on x_{t-1..t-k} (intercept, overlapping rows only)."""
    x = np.asarray(x, dtype=float)
    out = [1.0]
    for k in range(1, max_lag + 1):
        y = x[k:]
        cols = [np.ones(y.size)] + [x[k - j:x.size - j] for j in range(1, k + 1)]
        coef, *_ = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)
        out.append(coef[-1])
    return np.asarray(out)


def pacf_padded_ols(x, max_lag: int) -> np.ndarray:
    """Same regression on the demeaned series zero-padded at both ends.

    Padding makes the normal equations use the full-sample lag products,
    i.e. the sample autocovariances divided by N, so this is the finite-sample
    counterpart of the Durbin-Levinson estimate without sharing its code.
    """
    x = np.asarray(x, dtype=float)
    z = x - x.mean()
    n = z.size
    out = [1.0]
    for k in range(1, max_lag + 1):
        pad = np.concatenate([np.zeros(k), z, np.zeros(k)])
        y = pad[k:n + 2 * k]
        cols = [pad[k - j:n + 2 * k - j] for j in range(1, k + 1)]
        coef, *_ = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)
        out.append(coef[-1])
    return np.asarray(out)


def ar_theory_pacf(phi, max_lag: int) -> np.ndarray:
    """Population PACF of a stationary AR(p) via its theoretical ACF."""
    phi = np.asarray(phi, dtype=float)
    p = phi.size
    # Yule-Walker for rho_1..rho_p, then recurse
    a = np.eye(p)
    b = np.zeros(p)
    for k in range(1, p + 1):
        b[k - 1] = phi[k - 1]
        for j in range(1, p + 1):
            lag = abs(k - j)
            if lag > 0:
                a[k - 1, lag - 1] -= phi[j - 1]
    rho = list(np.linalg.solve(a, b)) if p else []
    rho = [1.0] + rho
    while len(rho) <= max_lag:
        t = len(rho)
        rho.append(sum(phi[k] * rho[t - 1 - k] for k in range(p)))
    out = [1.0]
    for k in range(1, max_lag + 1):
        r = np.array([[rho[abs(i - j)] for j in range(k)] for i in range(k)])
        out.append(np.linalg.solve(r, np.array(rho[1:k + 1]))[-1])
    return np.asarray(out)
