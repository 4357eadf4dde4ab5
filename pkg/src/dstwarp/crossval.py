"""k-fold cross-validation over calendar months."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from copy import deepcopy
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .forecasters import Forecaster
from .ingest import month_frames
from .metrics import FIELDS, MetricReport, evaluate_table
from .timeseries import FeatureFrame, ForecastTable, month_label


def kfold_split(months, k: int, seed: int) -> list[list]:
    """Shuffle ``months`` with ``seed`` and deal them round-robin into ``k`` folds.

    Fold sizes differ by at most one; each fold keeps its months sorted.
    """
    months = list(months)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > len(months):
        raise ValueError(f"{k} folds requested but only {len(months)} months")
    order = np.random.default_rng(seed).permutation(len(months))
    folds = [[] for _ in range(k)]
    for rank, idx in enumerate(order):
        folds[rank % k].append(months[idx])
    return [sorted(f) for f in folds]


@dataclass(frozen=True)
class CVReport:
    k: int
    seed: int
    forecaster: str
    folds: list
    per_fold: list
    mean: dict
    std: dict

    @property
    def horizons(self) -> int:
        return len(self.per_fold[0])

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "forecaster": self.forecaster,
            "folds": [[month_label(m) for m in f] for f in self.folds],
            "per_fold": [[r.to_dict() for r in fold] for fold in self.per_fold],
            "mean": self.mean,
            "std": self.std,
        }

    def to_json(self, config: dict | None = None) -> str:
        data = self.to_dict()
        if config is not None:
            data = {"config": config, **data}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "horizon", "mean", "std"])
        for name in FIELDS:
            for h in range(self.horizons):
                writer.writerow([name, h + 1, repr(self.mean[name][h]), repr(self.std[name][h])])
        return buf.getvalue()


def _aggregate(per_fold: list[list[MetricReport]]) -> tuple[dict, dict]:
    mean, std = {}, {}
    for name in FIELDS:
        vals = np.array([[getattr(r, name) for r in fold] for fold in per_fold])
        mean[name] = [float(v) for v in vals.mean(axis=0)]
        std[name] = [float(v) for v in vals.std(axis=0, ddof=1)]
    return mean, std


def cv_months(frame: FeatureFrame, exclude_months=frozenset({4, 8, 12})) -> dict[int, FeatureFrame]:
    """Month frames eligible for CV; calendar months in ``exclude_months`` are held back."""
    frames = month_frames(frame)
    return {k: f for k, f in frames.items() if k % 12 + 1 not in set(exclude_months)}


def run_cv(frame: FeatureFrame, forecaster: Forecaster, k: int = 10, seed: int = 0,
           exclude_months=frozenset({4, 8, 12}), jobs: int = 1) -> CVReport:
    """Fit on k-1 folds, evaluate on the held-out fold, for every fold.

    The forecaster's ``fit`` receives the training months and must derive
    any scaling from them alone. ``exclude_months`` keeps the fixed test
    months out of the pool (pass an empty set to use every month).
    """
    months = cv_months(frame, exclude_months)
    folds = kfold_split(sorted(months), k, seed)

    def one(idx: int) -> list[MetricReport]:
        model = deepcopy(forecaster)
        held = set(folds[idx])
        model.fit([months[m] for m in sorted(months) if m not in held])
        tables = [model.forecast(months[m]) for m in folds[idx]]
        tables = [t for t in tables if len(t)]
        if not tables:
            raise DataError(f"fold {idx} has no extractable windows")
        return evaluate_table(ForecastTable.concatenate(tables))

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            per_fold = list(pool.map(one, range(k)))
    else:
        per_fold = [one(i) for i in range(k)]
    mean, std = _aggregate(per_fold)
    return CVReport(k, seed, getattr(forecaster, "name", type(forecaster).__name__), folds, per_fold, mean, std)
