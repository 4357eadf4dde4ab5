"""
Point metrics for a persistence baseline and a linear model
===========================================================

Synthetic solar wind drives a synthetic Dst. A scaled linear model on a
six-hour window is compared with persistence, first on Dst and then on
its first difference, where persistence loses all skill.
"""

# %%
from dstwarp.forecasters import ARForecaster, PersistenceForecaster, with_delta_dst
from dstwarp.ingest import SplitSpec, split_by_month
from dstwarp.metrics import evaluate_table
from dstwarp.synthetic import synthetic_frame
from dstwarp.timeseries import ForecastTable

frame = with_delta_dst(synthetic_frame(hours=3 * 8760, seed=1))
split = split_by_month(frame, SplitSpec(rng_seed=0))
print({name: len(part) for name, part in zip(split._fields, split)}, "months per set")


# %%
def score(model):
    model.fit(split.train)
    table = ForecastTable.concatenate([t for t in map(model.forecast, split.test) if len(t)])
    return evaluate_table(table)


for name, model in [("persistence", PersistenceForecaster()), ("linear AR", ARForecaster())]:
    rows = score(model)
    print(name.ljust(12), " ".join(f"{r.rmse:5.2f}" for r in rows), "rmse t+1..t+6")

# %%
# On the differenced series persistence predicts the last change, which is
# worse than predicting no change at all: PE drops below zero.
delta_p = score(PersistenceForecaster(target="delta_dst"))
delta_ar = score(ARForecaster(target="delta_dst", features=("v_sw", "rho_sw", "b_z", "b_mag", "delta_dst")))
print("persistence PE", [round(r.pe, 3) for r in delta_p])
print("linear AR PE  ", [round(r.pe, 3) for r in delta_ar])
