"""Baseline forecasters and the differencing transform.

Every forecaster produces a :class:`~dstwarp.timeseries.ForecastTable`. The
:class:`Forecaster` protocol (``fit`` on training frames, ``forecast`` on a
frame) is what cross-validation and the CLI drive; the linear
autoregressive model stands in for heavier learned models.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Protocol, Sequence

import numpy as np

from .errors import DataError
from .ingest import ScalingParams, WindowArrays, WindowSample, apply_scaling, fit_scaling, window_arrays
from .timeseries import FeatureFrame, ForecastTable, TimeSeries

log = logging.getLogger(__name__)

RIDGE = 1e-6


def persistence_forecast(obs: TimeSeries, horizons: int, origins=None) -> ForecastTable:
    """Forecast ``obs(t + h) = obs(t)`` for ``h = 1..horizons``.

    By default the origins are every hour ``t`` where ``obs`` is valid at
    ``t`` and at all targets ``t+1 .. t+horizons``, so each horizon is
    evaluated on the same sample set. Explicit ``origins`` (epoch hours)
    override this.
    """
    if horizons < 1:
        raise ValueError("horizons must be >= 1")
    if len(obs) <= horizons:
        raise DataError(f"series of length {len(obs)} is too short for {horizons} horizons")
    if origins is None:
        valid = obs.valid.astype(np.int64)
        csum = np.concatenate(([0], np.cumsum(valid)))
        t = np.arange(len(obs) - horizons)
        keep = csum[t + horizons + 1] - csum[t] == horizons + 1
        origins = t[keep] + obs.start
    origins = np.asarray(origins, dtype=np.int64)
    values, ok = obs.at(origins)
    preds = np.where(ok, values, np.nan)
    return ForecastTable(origins, np.repeat(preds[:, None], horizons, axis=1), obs)


def difference(series):
    """First difference ``x[t] - x[t-1]``.

    A :class:`TimeSeries` input gives a series starting one hour later whose
    cells are valid only where both neighbours are; array input gives an
    array.
    """
    if isinstance(series, TimeSeries):
        if len(series) < 2:
            raise DataError("difference needs at least two samples")
        return TimeSeries(series.start + 1, np.diff(series.values),
                          series.valid[1:] & series.valid[:-1])
    x = np.asarray(series, dtype=float)
    if x.size < 2:
        raise DataError("difference needs at least two samples")
    return np.diff(x)


def reintegrate(diff, anchor: float):
    """Inverse of :func:`difference`; ``anchor`` is the value preceding ``diff[0]``."""
    if isinstance(diff, TimeSeries):
        if not diff.valid.all():
            raise DataError("cannot reintegrate across invalid differences")
        return TimeSeries(diff.start - 1, reintegrate(diff.values, anchor))
    d = np.asarray(diff, dtype=float)
    if d.size < 1:
        raise DataError("reintegrate needs at least one difference")
    return np.concatenate(([float(anchor)], float(anchor) + np.cumsum(d)))


def with_delta_dst(frame: FeatureFrame, source: str = "dst", name: str = "delta_dst") -> FeatureFrame:
    """Append the first difference of ``source``; the first hour is dropped."""
    delta = difference(frame[source])
    trimmed = frame.slice(1, len(frame))
    return trimmed.with_feature(name, delta)


# -- linear autoregressive stand-in ----------------------------------------


@dataclass(frozen=True)
class ARSpec:
    """Linear map from a flattened input window to H future targets.

    ``coef`` has shape (H, features * (lag + 1)), flattened feature-major
    (all lags of the first feature, then the next). When ``scaling`` is set
    the model works in standardized units and forecasts are mapped back to
    the target's physical units.
    """

    lag: int = 6
    horizons: int = 6
    features: tuple = ("v_sw", "rho_sw", "b_z", "b_mag", "dst")
    target: str = "dst"
    coef: np.ndarray | None = None
    intercept: np.ndarray | None = None
    scaling: ScalingParams | None = None
    ridge: float = 0.0

    @property
    def fitted(self) -> bool:
        return self.coef is not None

    @property
    def n_inputs(self) -> int:
        return len(self.features) * (self.lag + 1)

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """Raw model output for stacked windows of shape (N, features, lag+1)."""
        if not self.fitted:
            raise ValueError("model is not fitted")
        x = np.asarray(inputs, dtype=float).reshape(len(inputs), -1)
        return x @ self.coef.T + self.intercept

    def to_dict(self) -> dict:
        return {
            "lag": self.lag,
            "horizons": self.horizons,
            "features": list(self.features),
            "target": self.target,
            "coef": None if self.coef is None else self.coef.tolist(),
            "intercept": None if self.intercept is None else self.intercept.tolist(),
            "scaling": None if self.scaling is None else self.scaling.to_dict(),
            "ridge": self.ridge,
        }

    @classmethod
    def from_dict(cls, data) -> "ARSpec":
        return cls(
            lag=int(data["lag"]),
            horizons=int(data["horizons"]),
            features=tuple(data["features"]),
            target=data["target"],
            coef=None if data.get("coef") is None else np.asarray(data["coef"], dtype=float),
            intercept=None if data.get("intercept") is None else np.asarray(data["intercept"], dtype=float),
            scaling=None if data.get("scaling") is None else ScalingParams.from_dict(data["scaling"]),
            ridge=float(data.get("ridge", 0.0)),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ARSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _stack(samples) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(samples, WindowArrays):
        return samples.inputs.reshape(len(samples), -1), samples.targets
    samples = list(samples)
    if not samples:
        raise DataError("no training samples")
    x = np.stack([np.asarray(s.inputs, dtype=float).reshape(-1) for s in samples])
    y = np.stack([np.asarray(s.target, dtype=float).reshape(-1) for s in samples])
    return x, y


def fit_ar(samples: Sequence[WindowSample] | WindowArrays, spec: ARSpec) -> ARSpec:
    """Least-squares fit of every horizon's target on the flattened window.

    A rank-deficient design is logged and solved with a ridge penalty of
    ``1e-6 * trace(X'X)`` on the non-intercept weights.
    """
    x, y = _stack(samples)
    if x.shape[1] != spec.n_inputs:
        raise DataError(f"windows have {x.shape[1]} inputs, model expects {spec.n_inputs}")
    if y.shape[1] != spec.horizons:
        raise DataError(f"windows have {y.shape[1]} targets, model expects {spec.horizons}")
    if x.shape[0] < spec.n_inputs + 1:
        raise DataError(f"need at least {spec.n_inputs + 1} samples, got {x.shape[0]}")
    design = np.hstack([x, np.ones((x.shape[0], 1))])
    gram = design.T @ design
    rhs = design.T @ y
    ridge = 0.0
    if np.linalg.matrix_rank(design) < design.shape[1]:
        ridge = RIDGE * float(np.trace(gram))
        log.warning("rank-deficient AR design (%d columns); using ridge %.3g", design.shape[1], ridge)
        penalty = np.full(design.shape[1], ridge)
        penalty[-1] = 0.0
        beta = np.linalg.solve(gram + np.diag(penalty), rhs)
    else:
        beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    return replace(spec, coef=np.ascontiguousarray(beta[:-1].T), intercept=beta[-1].copy(), ridge=ridge)


def ar_forecast(model: ARSpec, frame: FeatureFrame) -> ForecastTable:
    """Forecast at every origin of ``frame`` whose input window is complete.

    ``frame`` is in physical units; scaling (if the model carries it) is
    applied on the way in and undone on the way out.
    """
    if not model.fitted:
        raise ValueError("model is not fitted")
    scaled = apply_scaling(frame, model.scaling) if model.scaling is not None else frame
    win = window_arrays(scaled, model.lag, model.horizons, model.target, model.features)
    out = model.predict(win.inputs) if len(win) else np.empty((0, model.horizons))
    if model.scaling is not None:
        out = model.scaling.inverse(model.target, out)
    return ForecastTable(win.origins, out, frame[model.target])


# -- pluggable interface ---------------------------------------------------


class Forecaster(Protocol):
    name: str
    lag: int
    horizons: int
    target: str

    def fit(self, frames: Sequence[FeatureFrame]) -> None: ...

    def forecast(self, frame: FeatureFrame) -> ForecastTable: ...


def _sample_origins(frame: FeatureFrame, lag: int, horizons: int, target: str,
                    features: Sequence[str] | None) -> np.ndarray:
    return window_arrays(frame, lag, horizons, target, features).origins


@dataclass
class PersistenceForecaster:
    """Persistence on the sliding-window sample set of each frame.

    Using window origins (not every valid hour) keeps the evaluated samples
    identical to those a learned model would see.
    """

    lag: int = 6
    horizons: int = 6
    target: str = "dst"
    features: tuple | None = None
    name: str = "persistence"

    def fit(self, frames: Sequence[FeatureFrame]) -> None:
        pass

    def forecast(self, frame: FeatureFrame) -> ForecastTable:
        origins = _sample_origins(frame, self.lag, self.horizons, self.target, self.features)
        return persistence_forecast(frame[self.target], self.horizons, origins)


@dataclass
class ARForecaster:
    """Scaled linear AR model refit on each call to :meth:`fit`."""

    lag: int = 6
    horizons: int = 6
    target: str = "dst"
    features: tuple = ("v_sw", "rho_sw", "b_z", "b_mag", "dst")
    name: str = "ar"
    model: ARSpec | None = field(default=None, repr=False)

    def fit(self, frames: Sequence[FeatureFrame]) -> None:
        frames = [f.select(_needed(self.features, self.target)) for f in frames]
        params = fit_scaling(frames)
        wins = [window_arrays(apply_scaling(f, params), self.lag, self.horizons, self.target, self.features)
                for f in frames]
        wins = WindowArrays.concatenate([w for w in wins if len(w)] or wins)
        if not len(wins):
            raise DataError("no training windows")
        spec = ARSpec(self.lag, self.horizons, tuple(self.features), self.target, scaling=params)
        self.model = fit_ar(wins, spec)

    def forecast(self, frame: FeatureFrame) -> ForecastTable:
        if self.model is None:
            raise ValueError("forecaster is not fitted")
        return ar_forecast(self.model, frame.select(_needed(self.features, self.target)))


def _needed(features, target) -> list[str]:
    names = list(features)
    if target not in names:
        names.append(target)
    return names


def make_forecaster(kind: str, lag: int = 6, horizons: int = 6, target: str = "dst",
                    features: Sequence[str] | None = None) -> Forecaster:
    if kind == "persistence":
        return PersistenceForecaster(lag, horizons, target, None if features is None else tuple(features))
    if kind == "ar":
        if features is None:
            features = ("v_sw", "rho_sw", "b_z", "b_mag", target)
        return ARForecaster(lag, horizons, target, tuple(features))
    raise ValueError(f"unknown forecaster {kind!r}")
