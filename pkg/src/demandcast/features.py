"""The sixteen-regressor design: lags, rolling means, calendar flags and
smoothed epidemic signals, plus projection of those columns past the end of
the observed history.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .core import SkuSeries
from .errors import InsufficientHistoryError

LAG_DAYS = (1, 7, 14, 30, 60)
ROLLING_WINDOWS = (7, 14, 30)
WARMUP_DAYS = max(LAG_DAYS)

FLAG_NAMES = ("is_weekend", "is_summer_peak", "is_black_friday", "is_back_to_school", "is_holiday_season")

REGRESSOR_NAMES = (
    "lag_1",
    "lag_7",
    "lag_14",
    "lag_30",
    "lag_60",
    "rolling_mean_7",
    "rolling_mean_14",
    "rolling_mean_30",
    "is_weekend",
    "is_summer_peak",
    "is_black_friday",
    "is_back_to_school",
    "is_holiday_season",
    "quarter",
    "cases_7day_avg",
    "deaths_7day_avg",
)

# Columns whose future values are unknown at forecast time and therefore get
# the 3-period-mean projection; the rest are exact calendar functions.
RECURSIVE_COLUMNS = (
    "lag_1",
    "lag_7",
    "lag_14",
    "lag_30",
    "lag_60",
    "rolling_mean_7",
    "rolling_mean_14",
    "rolling_mean_30",
    "cases_7day_avg",
    "deaths_7day_avg",
)

CALENDAR_COLUMNS = FLAG_NAMES + ("quarter",)


@dataclass(frozen=True)
class FlagWindows:
    """Date spans of the binary high-demand-period indicators.

    Spans are inclusive (month, day) pairs within a calendar year; the
    late-November shopping window is anchored to the fourth Thursday of
    November (Friday through the following Monday).
    """

    summer_peak_start: tuple[int, int] = (5, 15)
    summer_peak_end: tuple[int, int] = (7, 15)
    back_to_school_start: tuple[int, int] = (8, 1)
    back_to_school_end: tuple[int, int] = (9, 15)
    holiday_season_start: tuple[int, int] = (11, 15)
    holiday_season_end: tuple[int, int] = (12, 31)


DEFAULT_FLAG_WINDOWS = FlagWindows()


def _in_span(d: date, start_md: tuple[int, int], end_md: tuple[int, int]) -> bool:
    return start_md <= (d.month, d.day) <= end_md


def thanksgiving(year: int) -> date:
    """Fourth Thursday of November."""
    nov1 = date(year, 11, 1)
    first_thursday = nov1 + timedelta(days=(3 - nov1.weekday()) % 7)
    return first_thursday + timedelta(days=21)


def calendar_flags(d: date, windows: FlagWindows = DEFAULT_FLAG_WINDOWS) -> tuple[int, int, int, int, int, int]:
    """(is_weekend, is_summer_peak, is_black_friday, is_back_to_school,
    is_holiday_season, quarter) for one date."""
    tg = thanksgiving(d.year)
    black_friday = int(tg < d <= tg + timedelta(days=4))
    return (
        int(d.weekday() >= 5),
        int(_in_span(d, windows.summer_peak_start, windows.summer_peak_end)),
        black_friday,
        int(_in_span(d, windows.back_to_school_start, windows.back_to_school_end)),
        int(_in_span(d, windows.holiday_season_start, windows.holiday_season_end)),
        (d.month + 2) // 3,
    )


def rolling_mean(values, window: int) -> np.ndarray:
    """Trailing mean over ``window`` days, expanding over the first
    window-1 positions so the output length matches the input."""
    if window < 1:
        raise ValueError(f"rolling window must be >= 1, got {window}")
    values = np.asarray(values, dtype=float)
    cs = np.concatenate(([0.0], np.cumsum(values)))
    n = values.size
    idx = np.arange(n)
    lo = np.maximum(idx - window + 1, 0)
    return (cs[idx + 1] - cs[lo]) / (idx - lo + 1)


def lag(values, offset: int) -> np.ndarray:
    """Shift values forward by ``offset`` days; the first ``offset`` entries
    are NaN (undefined)."""
    if offset < 1:
        raise ValueError(f"lag offset must be >= 1, got {offset}")
    values = np.asarray(values, dtype=float)
    out = np.full(values.size, np.nan)
    if offset < values.size:
        out[offset:] = values[:-offset]
    return out


def covid_features(merged: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """7-day rolling averages of the merged (cases, deaths) columns."""
    merged = np.asarray(merged, dtype=float)
    return rolling_mean(merged[:, 0], 7), rolling_mean(merged[:, 1], 7)


@dataclass(frozen=True)
class DesignMatrix:
    """Per-date regressor rows, optionally with aligned targets.

    Dates are contiguous; every column has one value per date. ``target`` is
    None for future (forecast-horizon) rows.
    """

    dates: tuple[date, ...]
    columns: dict[str, np.ndarray]
    target: np.ndarray | None = None

    def __post_init__(self) -> None:
        n = len(self.dates)
        for name, col in self.columns.items():
            if col.shape != (n,):
                raise ValueError(f"column {name!r} has shape {col.shape}, expected ({n},)")
        if self.target is not None and self.target.shape != (n,):
            raise ValueError(f"target has shape {self.target.shape}, expected ({n},)")

    def __len__(self) -> int:
        return len(self.dates)

    def matrix(self, names) -> np.ndarray:
        """Stack the named columns into an (n, len(names)) array."""
        return np.column_stack([self.columns[name] for name in names])


def assemble_design(
    series: SkuSeries,
    covid_pairs: np.ndarray,
    windows: FlagWindows = DEFAULT_FLAG_WINDOWS,
) -> DesignMatrix:
    """Build all 16 regressor columns for a series and trim the warm-up rows.

    The first 60 days carry undefined lags and are excluded from the training
    view; a series shorter than 61 days has no trainable rows.
    """
    n = len(series)
    if n <= WARMUP_DAYS:
        raise InsufficientHistoryError(
            f"series {series.sku!r} has {n} days; needs more than {WARMUP_DAYS} for any trainable row"
        )
    if np.asarray(covid_pairs).shape != (n, 2):
        raise ValueError(f"covid pairs have shape {np.asarray(covid_pairs).shape}, expected ({n}, 2)")

    values = series.values
    dates = series.dates()
    cols: dict[str, np.ndarray] = {}
    for d in LAG_DAYS:
        cols[f"lag_{d}"] = lag(values, d)
    for w in ROLLING_WINDOWS:
        cols[f"rolling_mean_{w}"] = rolling_mean(values, w)
    flags = np.array([calendar_flags(d, windows) for d in dates], dtype=float)
    for j, name in enumerate(FLAG_NAMES):
        cols[name] = flags[:, j]
    cols["quarter"] = flags[:, 5]
    cols["cases_7day_avg"], cols["deaths_7day_avg"] = covid_features(covid_pairs)

    keep = slice(WARMUP_DAYS, None)
    trimmed = {name: col[keep].copy() for name, col in cols.items()}
    return DesignMatrix(tuple(dates[WARMUP_DAYS:]), trimmed, values[keep].copy())


def project_future(
    history: DesignMatrix,
    horizon: int,
    windows: FlagWindows = DEFAULT_FLAG_WINDOWS,
    scenario: dict[date, tuple[float, float]] | None = None,
) -> DesignMatrix:
    """Regressor rows for the ``horizon`` days after the observed history.

    Recursive columns (lags, rolling means, epidemic averages) take the mean
    of their last three observed values, held constant across the horizon;
    calendar columns are computed exactly from each future date. A scenario
    mapping date -> (cases_7day_avg, deaths_7day_avg) overrides the projected
    epidemic columns on the dates it covers.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if len(history) < 3:
        raise ValueError(f"need at least 3 observed rows to project, got {len(history)}")

    future_dates = [history.dates[-1] + timedelta(days=i) for i in range(1, horizon + 1)]
    cols: dict[str, np.ndarray] = {}
    for name in history.columns:
        if name in RECURSIVE_COLUMNS:
            cols[name] = np.full(horizon, float(np.mean(history.columns[name][-3:])))
    flags = np.array([calendar_flags(d, windows) for d in future_dates], dtype=float)
    for j, name in enumerate(FLAG_NAMES):
        cols[name] = flags[:, j]
    cols["quarter"] = flags[:, 5]

    if scenario and "cases_7day_avg" in cols:
        for i, d in enumerate(future_dates):
            if d in scenario:
                cases, deaths = scenario[d]
                cols["cases_7day_avg"][i] = cases
                cols["deaths_7day_avg"][i] = deaths

    return DesignMatrix(tuple(future_dates), cols, None)
