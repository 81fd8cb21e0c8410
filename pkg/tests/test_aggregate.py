from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, strategies as st

import demandcast as dc

D = date


class TestMonthDiff:
    def test_same_month(self):
        assert dc.month_diff(D(2024, 7, 31), D(2024, 7, 1)) == 0

    def test_two_months_ahead(self):
        assert dc.month_diff(D(2024, 9, 3), D(2024, 7, 15)) == 2

    def test_year_rollover(self):
        assert dc.month_diff(D(2024, 1, 1), D(2023, 12, 31)) == 1

    def test_negative_allowed(self):
        assert dc.month_diff(D(2023, 11, 30), D(2024, 1, 1)) == -2

    @given(st.dates(min_value=D(2018, 1, 1), max_value=D(2026, 12, 31)))
    def test_self_is_zero(self, d):
        assert dc.month_diff(d, d) == 0

    @given(
        st.dates(min_value=D(2018, 1, 1), max_value=D(2024, 12, 31)),
        st.dates(min_value=D(2018, 1, 1), max_value=D(2024, 12, 31)),
        st.integers(min_value=-12, max_value=12),
    )
    def test_translation_by_whole_months(self, a, b, k):
        def shift(d, months):
            total = d.year * 12 + (d.month - 1) + months
            return D(total // 12, total % 12 + 1, 1)

        assert dc.month_diff(shift(a, k), shift(b, k)) == dc.month_diff(a, b)


class TestMonthlyTotals:
    def test_ninety_days_from_august(self):
        dates = [D(2024, 8, 1) + timedelta(days=i) for i in range(90)]
        rows = dc.monthly_totals(dates, np.ones(90), "A", D(2024, 7, 31))
        by_diff = {r.month_diff: r for r in rows}
        assert by_diff[1].sales == 31.0 and by_diff[1].days_covered == 31
        assert by_diff[2].sales == 30.0
        assert by_diff[3].sales == 29.0 and by_diff[3].days_covered == 29

    def test_single_day(self):
        rows = dc.monthly_totals([D(2024, 8, 5)], np.array([4.5]), "A", D(2024, 7, 31))
        assert len(rows) == 1 and rows[0].sales == 4.5

    def test_mass_conservation(self):
        rng = np.random.default_rng(3)
        yhat = rng.uniform(-5, 50, 200)
        dates = [D(2024, 2, 10) + timedelta(days=i) for i in range(200)]
        rows = dc.monthly_totals(dates, yhat, "A", D(2024, 2, 9))
        assert sum(r.sales for r in rows) == pytest.approx(yhat.sum(), rel=1e-12)

    def test_sorted_and_consecutive(self):
        dates = [D(2024, 1, 15) + timedelta(days=i) for i in range(100)]
        rows = dc.monthly_totals(dates, np.ones(100), "A", D(2024, 1, 14))
        diffs = [r.month_diff for r in rows]
        assert diffs == sorted(diffs)
        assert diffs == list(range(diffs[0], diffs[-1] + 1))

    def test_bounds_summed(self):
        dates = [D(2024, 8, 1) + timedelta(days=i) for i in range(31)]
        yhat = np.full(31, 2.0)
        rows = dc.monthly_totals(dates, yhat, "A", D(2024, 7, 31), lower=yhat - 1, upper=yhat + 1)
        (row,) = rows
        assert row.lower == pytest.approx(31.0)
        assert row.upper == pytest.approx(93.0)

    def test_bounds_must_bracket(self):
        with pytest.raises(ValueError):
            dc.MonthlyForecast("A", 2024, 8, 1, 10.0, 11.0, 12.0, 31)

    def test_negative_yhat_unclamped(self):
        rows = dc.monthly_totals([D(2024, 8, 1)], np.array([-3.0]), "A", D(2024, 7, 31))
        assert rows[0].sales == -3.0
