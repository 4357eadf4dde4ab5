import json

import numpy as np
import pytest

from dstwarp.crossval import _aggregate, cv_months, kfold_split, run_cv
from dstwarp.forecasters import ARForecaster, PersistenceForecaster
from dstwarp.metrics import FIELDS, MetricReport
from dstwarp.synthetic import synthetic_frame
from dstwarp.timeseries import FeatureFrame, month_index


@pytest.fixture(scope="module")
def frame():
    return synthetic_frame(hours=24 * 365, seed=21)


def test_even_folds():
    folds = kfold_split(range(10), 5, seed=0)
    assert [len(f) for f in folds] == [2] * 5
    assert sorted(m for f in folds for m in f) == list(range(10))


def test_uneven_folds():
    folds = kfold_split(range(11), 5, seed=3)
    assert sorted(len(f) for f in folds) == [2, 2, 2, 2, 3]


def test_split_is_seeded():
    assert kfold_split(range(30), 10, 5) == kfold_split(range(30), 10, 5)
    assert kfold_split(range(30), 10, 5) != kfold_split(range(30), 10, 6)


def test_split_errors():
    with pytest.raises(ValueError):
        kfold_split(range(3), 4, 0)
    with pytest.raises(ValueError):
        kfold_split(range(3), 1, 0)


def report(value):
    return MetricReport(**{name: float(value) for name in FIELDS}, n=10)


def test_aggregate_two_folds():
    mean, std = _aggregate([[report(1.0)], [report(3.0)]])
    assert mean["rmse"] == [2.0]
    assert std["rmse"] == [pytest.approx(np.sqrt(2.0), rel=1e-15)]


def test_test_months_excluded(frame):
    pool = cv_months(frame)
    assert len(pool) == 9
    assert not {k % 12 + 1 for k in pool} & {4, 8, 12}
    assert len(cv_months(frame, exclude_months=())) == 12


def test_mean_of_fold_metrics(frame):
    cv = run_cv(frame, PersistenceForecaster(horizons=3), k=3, seed=1)
    for name in FIELDS:
        vals = np.array([[getattr(r, name) for r in fold] for fold in cv.per_fold])
        assert np.allclose(cv.mean[name], vals.mean(axis=0), rtol=0, atol=1e-12)
        assert np.allclose(cv.std[name], vals.std(axis=0, ddof=1), rtol=0, atol=1e-12)


class Spy(PersistenceForecaster):
    seen: list

    def fit(self, frames):
        type(self).seen.append({int(month_index(f.start)) for f in frames})


def test_training_never_sees_held_fold(frame):
    Spy.seen = []
    cv = run_cv(frame, Spy(horizons=1), k=3, seed=2)
    for fold, trained in zip(cv.folds, Spy.seen):
        assert not trained & set(fold)
        assert len(trained) + len(fold) == 9


def test_held_out_values_do_not_leak(frame):
    # corrupting the held fold's Dst changes its scores, never the fitted model
    cv = run_cv(frame, ARForecaster(horizons=2), k=3, seed=4)
    held = set(cv.folds[0])
    dst = frame["dst"].values.copy()
    keys = month_index(frame["dst"].times)
    dst[np.isin(keys, list(held))] *= -3
    mutated = FeatureFrame.from_arrays(frame.start, {**{n: frame[n].values for n in frame.names}, "dst": dst},
                                       {n: frame[n].valid for n in frame.names})
    again = run_cv(mutated, ARForecaster(horizons=2), k=3, seed=4)
    assert again.folds == cv.folds
    assert all(a.rmse != b.rmse for a, b in zip(again.per_fold[0], cv.per_fold[0]))

    months, mutated_months = cv_months(frame), cv_months(mutated)
    train = [m for m in sorted(months) if m not in held]
    a, b = ARForecaster(horizons=2), ARForecaster(horizons=2)
    a.fit([months[m] for m in train])
    b.fit([mutated_months[m] for m in train])
    a, b = a.model, b.model
    assert np.array_equal(a.coef, b.coef) and np.array_equal(a.intercept, b.intercept)


def test_jobs_invariance(frame):
    a = run_cv(frame, ARForecaster(horizons=2), k=3, seed=9, jobs=1)
    b = run_cv(frame, ARForecaster(horizons=2), k=3, seed=9, jobs=3)
    assert a.to_json() == b.to_json()


def test_outputs(frame):
    cv = run_cv(frame, PersistenceForecaster(horizons=2), k=3, seed=0)
    data = json.loads(cv.to_json({"seed": 0}))
    assert data["config"] == {"seed": 0}
    assert len(data["folds"]) == 3 and len(data["per_fold"][0]) == 2
    assert data["folds"][0][0].startswith("2001-")
    lines = cv.summary_csv().splitlines()
    assert lines[0] == "metric,horizon,mean,std"
    assert len(lines) == 1 + 2 * len(FIELDS)
