"""
Dynamic time warping on two short series
========================================

Align a forecast that lags its target and read the lag off the path.
"""

# %%
import numpy as np

from dstwarp import WindowConstraint, dtw, warp_values

obs = np.array([0, 0, 1, 4, 9, 4, 1, 0, 0, 0], dtype=float)
lagged = np.r_[obs[:1], obs[:1], obs[:-2]]  # the same bump, two steps late
print("obs   ", obs)
print("lagged", lagged)

# %%
# Unconstrained DTW finds a cheap alignment; the steps in the middle of
# the path sit two cells off the diagonal.
cost, path = dtw(lagged, obs)
print("cost", cost)
print("steps", list(zip(path.i.tolist(), path.j.tolist())))
print("shift per step", warp_values(path))

# %%
# The causal window only lets a prediction match the present or the past
# of the observation, and never by more than w hours.
for w in (0, 1, 2, 3):
    cost, path = dtw(lagged, obs, WindowConstraint.causal(w))
    print(f"w={w}: cost {cost:4.0f}, shifts {np.bincount(warp_values(path), minlength=w + 1)}")

# %%
# A plot of the cumulative-cost grid with the optimal path on top.
import matplotlib.pyplot as plt

from dstwarp.dtw import cumulative_grid

grid = cumulative_grid(lagged, obs, WindowConstraint.causal(3))
dense = np.array([[grid[i, j] for j in range(obs.size)] for i in range(lagged.size)])
fig, ax = plt.subplots(figsize=(4, 4))
ax.imshow(np.where(np.isfinite(dense), dense, np.nan), origin="lower", cmap="viridis")
_, path = dtw(lagged, obs, WindowConstraint.causal(3))
ax.plot(path.j, path.i, "w.-")
ax.set_xlabel("observation index j")
ax.set_ylabel("prediction index i")
fig.savefig("dtw_grid.png", dpi=100)
