"""Forecast-quality metrics: MAPE, RMSE, MAE and directional accuracy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PointMetrics:
    """Error metrics over paired actual/predicted values.

    ``mape`` is a fraction (0.10 = 10%) over the pairs with nonzero actuals;
    it is None when every actual is zero. ``mape_excluded`` counts the
    zero-actual pairs left out of the MAPE mean.
    """

    mape: float | None
    rmse: float
    mae: float
    n_points: int
    mape_excluded: int


def point_metrics(actual, predicted) -> PointMetrics:
    """MAPE / RMSE / MAE over equal-length sequences.

    Zero-actual pairs are excluded from MAPE only (and counted); RMSE and MAE
    always cover every pair.
    """
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise ValueError(f"actual and predicted must be 1-d and equal length, got {a.shape} vs {p.shape}")
    if a.size < 1:
        raise ValueError("need at least one pair")
    err = a - p
    rmse = float(np.sqrt(np.mean(err**2)))
    mae = float(np.mean(np.abs(err)))
    nonzero = a != 0
    excluded = int(np.sum(~nonzero))
    if excluded == a.size:
        mape = None
    else:
        mape = float(np.mean(np.abs(err[nonzero]) / np.abs(a[nonzero])))
    return PointMetrics(mape=mape, rmse=rmse, mae=mae, n_points=int(a.size), mape_excluded=excluded)


def directional_accuracy(actual_monthly, predicted_monthly) -> float:
    """Fraction of consecutive pairs whose period-over-period change agrees
    in sign; an exact tie only matches an exact tie."""
    a = np.asarray(actual_monthly, dtype=float)
    p = np.asarray(predicted_monthly, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise ValueError(f"actual and predicted must be 1-d and equal length, got {a.shape} vs {p.shape}")
    if a.size < 2:
        raise ValueError(f"directional accuracy needs at least 2 points, got {a.size}")
    sign_a = np.sign(np.diff(a))
    sign_p = np.sign(np.diff(p))
    return float(np.mean(sign_a == sign_p))


@dataclass(frozen=True)
class EvalReport:
    """One row of the per-SKU, per-horizon evaluation report."""

    sku: str
    horizon_months: int
    mape: float | None
    rmse: float
    mae: float
    directional_accuracy: float | None
    n_points: int
    mape_excluded: int
