"""
Why persistence is hard to beat: autocorrelation of Dst
=======================================================

Hourly Dst is strongly autocorrelated; its first difference is not.
"""

# %%
import numpy as np

from dstwarp.forecasters import difference
from dstwarp.plots import correlogram_svg, lag_plot_svg
from dstwarp.stats import acf, lag_pairs, pacf, significance_bound
from dstwarp.synthetic import synthetic_frame

dst = synthetic_frame(hours=2 * 8760, seed=3)["dst"]
bound = significance_bound(len(dst))

for name, series in [("Dst", dst), ("delta Dst", difference(dst))]:
    a = [round(r.value, 3) for r in acf(series, 6)]
    p = [round(r.value, 3) for r in pacf(series, 6)]
    print(f"{name:9s} acf {a}")
    print(f"{'':9s} pacf {p}")
print(f"95% band for white noise: +/-{bound:.3f}")

# %%
pairs = lag_pairs(dst, 1)
print("lag-1 correlation from the scatter:", np.corrcoef(pairs.T)[0, 1].round(3))
lag_plot_svg(pairs, "dst_lag1.svg", 1)
correlogram_svg(pacf(dst, 15), "dst_pacf.svg", "PACF", bound)
