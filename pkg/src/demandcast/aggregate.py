"""Month-indexed rollups of daily forecasts for manufacturing planning."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np


def month_diff(forecast_date: date, cutoff_date: date) -> int:
    """Relative month index of a date from the cutoff month.

    0 for the cutoff's own month, 1 for the next month, negative for earlier
    months; the day-of-month plays no part.
    """
    return 12 * (forecast_date.year - cutoff_date.year) + (forecast_date.month - cutoff_date.month)


@dataclass(frozen=True)
class MonthlyForecast:
    """One SKU-month of aggregated demand with summed uncertainty bounds.

    ``days_covered`` counts the daily rows in the bucket; a value below the
    month's calendar length marks a partial month at an edge of the horizon.
    """

    sku: str
    year: int
    month: int
    month_diff: int
    sales: float
    lower: float
    upper: float
    days_covered: int

    def __post_init__(self) -> None:
        if not (self.lower <= self.sales <= self.upper):
            raise ValueError(
                f"{self.sku} {self.year}-{self.month:02d}: bounds must bracket sales, "
                f"got ({self.lower}, {self.sales}, {self.upper})"
            )


def monthly_totals(
    dates: Sequence[date],
    yhat: Sequence[float],
    sku: str,
    cutoff: date,
    lower: Sequence[float] | None = None,
    upper: Sequence[float] | None = None,
) -> list[MonthlyForecast]:
    """Sum daily predictions (and bounds) into (year, month) buckets.

    Buckets are indexed by their month offset from ``cutoff`` and sorted by
    it; daily bounds are summed as-is, so monthly bounds are conservative.
    Negative daily predictions pass through unclamped.
    """
    yhat = np.asarray(yhat, dtype=float)
    if len(dates) != yhat.size:
        raise ValueError(f"{len(dates)} dates vs {yhat.size} predictions")
    lower = yhat if lower is None else np.asarray(lower, dtype=float)
    upper = yhat if upper is None else np.asarray(upper, dtype=float)

    buckets: dict[tuple[int, int], list[int]] = {}
    for i, d in enumerate(dates):
        buckets.setdefault((d.year, d.month), []).append(i)

    out = []
    for (year, month), idx in buckets.items():
        idx = np.asarray(idx)
        out.append(
            MonthlyForecast(
                sku=sku,
                year=year,
                month=month,
                month_diff=month_diff(date(year, month, 1), cutoff),
                sales=float(yhat[idx].sum()),
                lower=float(lower[idx].sum()),
                upper=float(upper[idx].sum()),
                days_covered=len(idx),
            )
        )
    out.sort(key=lambda m: m.month_diff)
    return out
