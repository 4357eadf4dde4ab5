"""Seeded synthetic solar-wind/Dst data for tests and demos.

Solar-wind features are smooth random processes; Dst follows a
Burton-style injection/decay recursion driven by ``v * max(-Bz, 0)``, so it
has the strong hourly autocorrelation that makes persistence look good.
Solar-wind gaps are written with OMNI fill sentinels.
"""

from __future__ import annotations

import numpy as np

from .ingest import DEFAULT_FILLS
from .timeseries import FeatureFrame, TimeSeries, to_hours


def _ar1(rng, n, phi, sd, mean=0.0):
    e = rng.standard_normal(n) * sd * np.sqrt(1 - phi * phi)
    x = np.empty(n)
    x[0] = rng.standard_normal() * sd
    for t in range(1, n):
        x[t] = phi * x[t - 1] + e[t]
    return x + mean


def synthetic_arrays(hours: int, seed: int = 0, gap_rate: float = 0.002, max_gap: int = 12):
    """Raw arrays (with fills already substituted) and the validity masks."""
    rng = np.random.default_rng(seed)
    v = np.clip(_ar1(rng, hours, 0.995, 90.0, 420.0), 250.0, 1200.0)
    rho = np.exp(_ar1(rng, hours, 0.97, 0.5, np.log(5.0)))
    bz = _ar1(rng, hours, 0.9, 3.5)
    bt = np.abs(_ar1(rng, hours, 0.95, 3.0, 4.0))
    bmag = np.sqrt(bz ** 2 + bt ** 2)
    drive = v * np.maximum(-bz, 0.0) / 1000.0
    decay = np.exp(-1.0 / 8.0)
    noise = rng.standard_normal(hours) * 1.5
    dst = np.empty(hours)
    level = -10.0
    for t in range(hours):
        level = decay * level - 2.2 * drive[t] + 0.6 + noise[t]
        dst[t] = level
    dst = np.round(dst)

    arrays = {"v_sw": np.round(v, 1), "rho_sw": np.round(rho, 2), "b_z": np.round(bz, 2),
              "b_mag": np.round(bmag, 2), "dst": dst}
    valid = {k: np.ones(hours, dtype=bool) for k in arrays}
    # outages hit the plasma or field instrument as a block
    starts = np.flatnonzero(rng.random(hours) < gap_rate)
    for s in starts:
        length = int(rng.integers(1, max_gap + 1))
        group = ("v_sw", "rho_sw") if rng.random() < 0.5 else ("b_z", "b_mag")
        for name in group:
            valid[name][s:s + length] = False
    for name in ("v_sw", "rho_sw", "b_z", "b_mag"):
        arrays[name] = np.where(valid[name], arrays[name], DEFAULT_FILLS[name][0])
    return arrays, valid


def synthetic_frame(start="2001-01-01T00", hours: int = 24 * 365, seed: int = 0,
                    gap_rate: float = 0.002) -> FeatureFrame:
    arrays, valid = synthetic_arrays(hours, seed, gap_rate)
    t0 = to_hours(start)
    return FeatureFrame({k: TimeSeries(t0, arrays[k], valid[k]) for k in arrays})


def write_synthetic_csv(path, start="2001-01-01T00", hours: int = 24 * 365, seed: int = 0,
                        gap_rate: float = 0.002) -> None:
    """Write a synthetic table in the ``timestamp,v_sw,rho_sw,b_z,b_mag,dst`` layout, fills included."""
    from .timeseries import format_hours

    arrays, _ = synthetic_arrays(hours, seed, gap_rate)
    t0 = to_hours(start)
    names = list(arrays)
    with open(path, "w") as fh:
        fh.write("timestamp," + ",".join(names) + "\n")
        for k in range(hours):
            fh.write(format_hours(t0 + k) + "," + ",".join(repr(float(arrays[n][k])) for n in names) + "\n")
