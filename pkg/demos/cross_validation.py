"""
Month-wise cross-validation
===========================

Months are shuffled with a seed and dealt into folds; the fixed test
months stay out of the pool. The spread over folds says how much of a
difference between two models is noise.
"""

# %%
from dstwarp.crossval import kfold_split, run_cv
from dstwarp.forecasters import ARForecaster, PersistenceForecaster
from dstwarp.synthetic import synthetic_frame
from dstwarp.timeseries import month_label

frame = synthetic_frame(hours=3 * 8760, seed=5)
print([[month_label(m) for m in fold] for fold in kfold_split(range(400, 409), 3, seed=0)])

# %%
for model in (PersistenceForecaster(), ARForecaster()):
    cv = run_cv(frame, model, k=5, seed=0)
    mean, std = cv.mean["rmse"], cv.std["rmse"]
    print(f"{cv.forecaster:12s}", "  ".join(f"{m:.2f}+/-{s:.2f}" for m, s in zip(mean, std)))
