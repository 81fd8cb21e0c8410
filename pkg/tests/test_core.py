from datetime import date

import numpy as np
import pytest
from hypothesis import given, strategies as st

import demandcast as dc
from demandcast.errors import ValidationError

D = date


class TestAlignSeries:
    def test_gap_fill(self):
        out = dc.align_series([(D(2020, 1, 1), "A", 3.0), (D(2020, 1, 3), "A", 5.0)])
        assert list(out["A"].values) == [3.0, 0.0, 5.0]
        assert out["A"].start == D(2020, 1, 1)

    def test_duplicates_sum(self):
        out = dc.align_series([(D(2020, 1, 1), "A", 2.0), (D(2020, 1, 1), "A", 4.0)])
        assert list(out["A"].values) == [6.0]

    def test_per_sku_partition(self):
        out = dc.align_series([(D(2020, 1, 1), "A", 1.0), (D(2020, 1, 1), "B", 7.0)])
        assert set(out) == {"A", "B"}
        assert len(out["A"]) == len(out["B"]) == 1

    def test_empty_input_gives_empty_map(self):
        assert dc.align_series([]) == {}

    def test_negative_quantity_rejected_with_row(self):
        with pytest.raises(ValidationError, match="2020-01-02"):
            dc.align_series([(D(2020, 1, 2), "A", -1.0)])

    def test_idempotent_on_contiguous_series(self):
        rows = [(D(2020, 1, 1 + i), "A", float(i)) for i in range(5)]
        once = dc.align_series(rows)["A"]
        again = dc.align_series(list(zip(once.dates(), ["A"] * len(once), once.values)))["A"]
        assert once.start == again.start
        assert np.array_equal(once.values, again.values)

    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=200),
                st.sampled_from(["A", "B", "C"]),
                st.floats(min_value=0, max_value=1e6, allow_nan=False),
            ),
            min_size=1,
            max_size=50,
        )
    )
    def test_mass_conservation_and_span(self, raw):
        rows = [(D(2021, 1, 1) + (D(2021, 1, 2) - D(2021, 1, 1)) * off, sku, q) for off, sku, q in raw]
        out = dc.align_series(rows)
        total_in = sum(q for _, _, q in rows)
        total_out = sum(s.values.sum() for s in out.values())
        assert total_out == pytest.approx(total_in, rel=1e-12)
        for sku, s in out.items():
            dates = [d for d, k, _ in rows if k == sku]
            assert len(s) == (max(dates) - min(dates)).days + 1


class TestSkuSeries:
    def test_requires_nonempty(self):
        with pytest.raises(ValidationError):
            dc.SkuSeries("A", D(2020, 1, 1), np.array([]))

    def test_rejects_negative_and_nonfinite(self):
        with pytest.raises(ValidationError):
            dc.SkuSeries("A", D(2020, 1, 1), np.array([1.0, -2.0]))
        with pytest.raises(ValidationError):
            dc.SkuSeries("A", D(2020, 1, 1), np.array([np.nan]))

    def test_sku_whitespace_rejected(self):
        with pytest.raises(ValidationError):
            dc.SkuSeries(" A", D(2020, 1, 1), np.array([1.0]))

    def test_values_read_only(self):
        s = dc.SkuSeries("A", D(2020, 1, 1), np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            s.values[0] = 9.0

    def test_end_and_dates(self):
        s = dc.SkuSeries("A", D(2020, 1, 30), np.arange(5, dtype=float))
        assert s.end == D(2020, 2, 3)
        assert s.dates()[0] == D(2020, 1, 30)
        assert s.dates()[-1] == D(2020, 2, 3)

    def test_head(self):
        s = dc.SkuSeries("A", D(2020, 1, 1), np.arange(10, dtype=float))
        h = s.head(4)
        assert len(h) == 4 and h.end == D(2020, 1, 4)
        with pytest.raises(ValueError):
            s.head(11)


class TestCovidDaily:
    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            dc.CovidDaily(D(2020, 3, 1), -1.0, 0.0)

    def test_valid(self):
        r = dc.CovidDaily(D(2020, 3, 1), 10.0, 1.0)
        assert r.new_cases == 10.0
