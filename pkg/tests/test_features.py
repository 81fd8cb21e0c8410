from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, strategies as st

import demandcast as dc
from demandcast.errors import InsufficientHistoryError
from demandcast.features import (
    RECURSIVE_COLUMNS,
    WARMUP_DAYS,
    thanksgiving,
)

D = date


class TestRollingMean:
    def test_constant_series(self):
        assert list(dc.rolling_mean([5] * 7, 7)) == [5.0] * 7

    def test_arithmetic_sequence(self):
        out = dc.rolling_mean([1, 2, 3, 4, 5, 6, 7], 7)
        assert out[-1] == pytest.approx(4.0)

    def test_partial_window(self):
        assert list(dc.rolling_mean([2, 4], 7)) == [2.0, 3.0]

    def test_window_zero_rejected(self):
        with pytest.raises(ValueError):
            dc.rolling_mean([1.0], 0)

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=60))
    def test_window_one_is_identity(self, values):
        assert np.allclose(dc.rolling_mean(values, 1), values)

    @given(
        st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=1, max_size=60),
        st.integers(min_value=1, max_value=30),
    )
    def test_bounded_by_min_max(self, values, window):
        out = dc.rolling_mean(values, window)
        assert out.min() >= min(values) - 1e-9 * (1 + abs(min(values)))
        assert out.max() <= max(values) + 1e-9 * (1 + abs(max(values)))


class TestLag:
    def test_offset_one(self):
        out = dc.lag([10, 20, 30], 1)
        assert np.isnan(out[0]) and list(out[1:]) == [10.0, 20.0]

    def test_offset_equals_length(self):
        out = dc.lag([10, 20, 30], 3)
        assert np.isnan(out).all()

    def test_index_shift(self):
        values = np.arange(100, dtype=float)
        out = dc.lag(values, 60)
        assert np.array_equal(out[60:], values[:40])

    def test_offset_zero_rejected(self):
        with pytest.raises(ValueError):
            dc.lag([1.0], 0)


class TestCalendarFlags:
    def test_sunday_q1(self):
        flags = dc.calendar_flags(D(2023, 1, 1))  # Sunday
        assert flags == (1, 0, 0, 0, 0, 1)

    def test_black_friday_2023(self):
        # Fourth Thursday of November 2023 computed independently
        assert thanksgiving(2023) == D(2023, 11, 23)
        flags = dc.calendar_flags(D(2023, 11, 24))
        is_weekend, summer, bf, bts, season, quarter = flags
        assert bf == 1 and season == 1 and quarter == 4

    def test_cyber_monday_included_tuesday_not(self):
        assert dc.calendar_flags(D(2023, 11, 27))[2] == 1  # Monday after
        assert dc.calendar_flags(D(2023, 11, 28))[2] == 0
        assert dc.calendar_flags(D(2023, 11, 23))[2] == 0  # Thanksgiving itself

    def test_back_to_school(self):
        flags = dc.calendar_flags(D(2023, 8, 15))
        assert flags[3] == 1 and flags[5] == 3

    def test_window_edges(self):
        assert dc.calendar_flags(D(2023, 5, 15))[1] == 1
        assert dc.calendar_flags(D(2023, 5, 14))[1] == 0
        assert dc.calendar_flags(D(2023, 7, 15))[1] == 1
        assert dc.calendar_flags(D(2023, 7, 16))[1] == 0

    def test_quarter_all_months(self):
        quarters = [dc.calendar_flags(D(2023, m, 10))[5] for m in range(1, 13)]
        assert quarters == [1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4]

    @pytest.mark.parametrize("year", range(2018, 2027))
    def test_flag_day_counts_per_year(self, year):
        days = [D(year, 1, 1) + timedelta(days=i) for i in range(366 if year % 4 == 0 else 365)]
        flags = np.array([dc.calendar_flags(d) for d in days])
        assert flags[:, 0].sum() in (104, 105, 106)  # weekends
        assert flags[:, 1].sum() == 62  # May 15 - Jul 15
        assert flags[:, 2].sum() == 4  # Friday..Monday window
        assert flags[:, 3].sum() == 46  # Aug 1 - Sep 15
        assert flags[:, 4].sum() == 47  # Nov 15 - Dec 31

    def test_custom_windows(self):
        windows = dc.FlagWindows(summer_peak_start=(6, 1), summer_peak_end=(6, 30))
        assert dc.calendar_flags(D(2023, 5, 20), windows)[1] == 0
        assert dc.calendar_flags(D(2023, 6, 20), windows)[1] == 1


class TestCovidFeatures:
    def test_all_zero(self):
        cases, deaths = dc.covid_features(np.zeros((10, 2)))
        assert not cases.any() and not deaths.any()

    def test_constant(self):
        merged = np.column_stack([np.full(7, 7.0), np.zeros(7)])
        cases, _ = dc.covid_features(merged)
        assert cases[-1] == pytest.approx(7.0)

    def test_single_spike(self):
        merged = np.column_stack([np.array([0, 0, 0, 0, 0, 0, 70.0]), np.zeros(7)])
        cases, _ = dc.covid_features(merged)
        assert cases[-1] == pytest.approx(10.0)


class TestAssembleDesign:
    def _make(self, n, seed=0):
        rng = np.random.default_rng(seed)
        series = dc.SkuSeries("A", D(2020, 1, 1), rng.uniform(10, 20, n))
        merged = np.zeros((n, 2))
        return series, merged

    def test_warmup_row_count(self):
        series, merged = self._make(100)
        design = dc.assemble_design(series, merged)
        assert len(design) == 40
        assert design.dates[0] == D(2020, 1, 1) + timedelta(days=WARMUP_DAYS)

    def test_boundary_61(self):
        series, merged = self._make(61)
        assert len(dc.assemble_design(series, merged)) == 1

    def test_boundary_60_raises(self):
        series, merged = self._make(60)
        with pytest.raises(InsufficientHistoryError):
            dc.assemble_design(series, merged)

    def test_all_sixteen_columns_finite(self, small_dataset):
        _, _, _, _, design = small_dataset
        assert set(design.columns) == set(dc.REGRESSOR_NAMES)
        for name, col in design.columns.items():
            assert np.isfinite(col).all(), name

    def test_lag_columns_match_series(self, small_dataset):
        _, _, series, _, design = small_dataset
        lag30 = design.columns["lag_30"]
        assert lag30[0] == series.values[WARMUP_DAYS - 30]

    def test_target_attached(self, small_dataset):
        _, _, series, _, design = small_dataset
        assert np.array_equal(design.target, series.values[WARMUP_DAYS:])

    def test_flag_values_binary_quarter_range(self, small_dataset):
        _, _, _, _, design = small_dataset
        for name in ("is_weekend", "is_summer_peak", "is_black_friday", "is_back_to_school", "is_holiday_season"):
            assert set(np.unique(design.columns[name])) <= {0.0, 1.0}
        assert set(np.unique(design.columns["quarter"])) <= {1.0, 2.0, 3.0, 4.0}


class TestProjectFuture:
    def test_recursive_columns_constant_three_period_mean(self, small_dataset):
        _, _, _, _, design = small_dataset
        future = dc.project_future(design, 30)
        for name in RECURSIVE_COLUMNS:
            expected = np.mean(design.columns[name][-3:])
            assert np.all(future.columns[name] == expected), name

    def test_lag_example(self):
        dates = tuple(D(2021, 1, 1) + timedelta(days=i) for i in range(3))
        history = dc.DesignMatrix(dates, {"lag_1": np.array([10.0, 20.0, 30.0])})
        future = dc.project_future(history, 5)
        assert np.all(future.columns["lag_1"] == 20.0)

    def test_calendar_from_exact_dates(self, small_dataset):
        _, _, _, _, design = small_dataset
        future = dc.project_future(design, 30)
        for i, d in enumerate(future.dates):
            flags = dc.calendar_flags(d)
            assert future.columns["is_weekend"][i] == flags[0]
            assert future.columns["quarter"][i] == flags[5]

    def test_zero_covid_projects_zero(self):
        dates = tuple(D(2021, 1, 1) + timedelta(days=i) for i in range(4))
        history = dc.DesignMatrix(dates, {"cases_7day_avg": np.zeros(4), "deaths_7day_avg": np.zeros(4)})
        future = dc.project_future(history, 3)
        assert not future.columns["cases_7day_avg"].any()

    def test_requires_three_rows(self):
        dates = tuple(D(2021, 1, 1) + timedelta(days=i) for i in range(2))
        history = dc.DesignMatrix(dates, {"lag_1": np.array([1.0, 2.0])})
        with pytest.raises(ValueError):
            dc.project_future(history, 5)

    def test_scenario_override(self, small_dataset):
        _, _, _, _, design = small_dataset
        first = design.dates[-1] + timedelta(days=1)
        scenario = {first: (123.0, 4.5)}
        future = dc.project_future(design, 5, scenario=scenario)
        assert future.columns["cases_7day_avg"][0] == 123.0
        assert future.columns["deaths_7day_avg"][0] == 4.5
        base = np.mean(design.columns["cases_7day_avg"][-3:])
        assert np.all(future.columns["cases_7day_avg"][1:] == base)

    def test_future_dates_contiguous(self, small_dataset):
        _, _, _, _, design = small_dataset
        future = dc.project_future(design, 10)
        assert future.dates[0] == design.dates[-1] + timedelta(days=1)
        assert all((b - a).days == 1 for a, b in zip(future.dates, future.dates[1:]))
        assert future.target is None
