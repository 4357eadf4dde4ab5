"""
Spotting a persistence forecast with the shift histogram
========================================================

A persistence forecast repeats the last observation. Its errors look
small for a smooth index, yet every prediction is just the observation
moved p hours later. The DTW shift histogram makes that visible.
"""

# %%
import numpy as np

from dstwarp import ForecastTable, TimeSeries, measure_all
from dstwarp.forecasters import persistence_forecast
from dstwarp.metrics import evaluate_table

rng = np.random.default_rng(0)
obs = TimeSeries(0, np.cumsum(rng.normal(size=5000)))
table = persistence_forecast(obs, 6)

# %%
# Point metrics degrade gently with the horizon and say nothing about timing.
for h, r in enumerate(evaluate_table(table), start=1):
    print(f"t+{h}h  rmse {r.rmse:5.2f}  r {r.r:.3f}  pe {r.pe:.3f}")

# %%
# With the causal window w = h almost every path step lands at shift h.
hist = measure_all(table)
print(hist.to_markdown())

# %%
# Compare with a forecast that knows the future: everything sits at zero.
perfect = np.stack([obs.values[table.origins + h] for h in range(1, 7)], axis=1)
print(measure_all(ForecastTable(table.origins, perfect, obs)).to_markdown())

# %%
from dstwarp.plots import shift_histogram_svg

shift_histogram_svg(hist, "persistence_shifts.svg")
