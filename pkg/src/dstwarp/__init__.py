"""Forecast verification for hourly geomagnetic indices.

Classical point metrics, persistence and differenced baselines,
autocorrelation diagnostics, month-based splitting and cross-validation,
and a DTW-based measure of how far a forecast lags the observations.
"""

__version__ = "0.1.0"

from .dtw import CostGrid, WarpPath, WindowConstraint, backtrack, cumulative_grid, distance, dtw, dtw_cost
from .errors import DataError, DstWarpError, NumericalError
from .metrics import MetricReport, evaluate, linear_fit, mae, me, mse, pearson_r, prediction_efficiency, rmse
from .timeseries import FeatureFrame, ForecastTable, Segment, TimeSeries, contiguous_segments
from .warpmeasure import ShiftHistogram, WarpMeasureTable, measure_all, measure_horizon, warp_values

__all__ = [
    "CostGrid",
    "DataError",
    "DstWarpError",
    "FeatureFrame",
    "ForecastTable",
    "MetricReport",
    "NumericalError",
    "Segment",
    "ShiftHistogram",
    "TimeSeries",
    "WarpMeasureTable",
    "WarpPath",
    "WindowConstraint",
    "backtrack",
    "contiguous_segments",
    "cumulative_grid",
    "distance",
    "dtw",
    "dtw_cost",
    "evaluate",
    "linear_fit",
    "mae",
    "me",
    "measure_all",
    "measure_horizon",
    "mse",
    "pearson_r",
    "prediction_efficiency",
    "rmse",
    "warp_values",
]
