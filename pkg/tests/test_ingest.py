from datetime import date

import numpy as np
import pytest

import demandcast as dc
from demandcast.errors import ValidationError
from demandcast.ingest import COVID_COVERAGE_START

D = date


class TestParseSales:
    def test_single_row(self):
        rows = dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,3\n")
        assert rows == [(D(2020, 1, 1), "A", 3.0)]

    def test_header_only(self):
        assert dc.parse_sales(b"dt,sku,quantity\n") == []

    def test_negative_quantity_line_number(self):
        with pytest.raises(ValidationError, match="line 2"):
            dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,-1\n")

    def test_missing_header(self):
        with pytest.raises(ValidationError, match="header"):
            dc.parse_sales(b"date,sku,qty\n2020-01-01,A,1\n")

    def test_bad_date_line_number(self):
        with pytest.raises(ValidationError, match="line 3"):
            dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,1\n01/02/2020,A,1\n")

    def test_bad_number(self):
        with pytest.raises(ValidationError, match="quantity"):
            dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,abc\n")

    def test_crlf_endings(self):
        rows = dc.parse_sales(b"dt,sku,quantity\r\n2020-01-01,A,3\r\n")
        assert rows == [(D(2020, 1, 1), "A", 3.0)]

    def test_duplicate_rows_preserved(self):
        rows = dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,1\n2020-01-01,A,1\n")
        assert len(rows) == 2

    def test_extra_columns_ignored(self, caplog):
        rows = dc.parse_sales(b"dt,sku,quantity,channel\n2020-01-01,A,3,web\n")
        assert rows == [(D(2020, 1, 1), "A", 3.0)]

    def test_roundtrip_fixed_point(self):
        rows = dc.parse_sales(b"dt,sku,quantity\n2020-01-01,A,3.5\n2020-01-02,B,0\n")
        text = "dt,sku,quantity\n" + "\n".join(f"{d.isoformat()},{s},{q!r}" for d, s, q in rows) + "\n"
        assert dc.parse_sales(text.encode()) == rows


class TestParseCovid:
    def test_coverage_start_row(self):
        recs = dc.parse_covid(b"dt,new_cases,new_deaths\n2020-01-21,1,0\n")
        assert recs == [dc.CovidDaily(D(2020, 1, 21), 1.0, 0.0)]

    def test_sorted_output(self):
        recs = dc.parse_covid(b"dt,new_cases,new_deaths\n2020-03-02,5,1\n2020-03-01,4,0\n")
        assert [r.date for r in recs] == [D(2020, 3, 1), D(2020, 3, 2)]

    def test_duplicate_date_rejected(self):
        with pytest.raises(ValidationError, match="duplicate date"):
            dc.parse_covid(b"dt,new_cases,new_deaths\n2020-03-01,5,1\n2020-03-01,4,0\n")

    def test_negative_count_rejected(self):
        with pytest.raises(ValidationError, match="negative"):
            dc.parse_covid(b"dt,new_cases,new_deaths\n2020-03-01,-5,1\n")


class TestParseHolidays:
    def test_window_span(self):
        specs = dc.parse_holidays(b"name,date,lower_window,upper_window\nblack_friday,2023-11-24,-1,3\n")
        (h,) = specs
        assert (h.lower_window, h.upper_window) == (-1, 3)
        assert h.date == D(2023, 11, 24)

    def test_single_day(self):
        (h,) = dc.parse_holidays(b"name,date,lower_window,upper_window\nx,2023-01-02,0,0\n")
        assert (h.lower_window, h.upper_window) == (0, 0)

    def test_positive_lower_window_rejected(self):
        with pytest.raises(ValidationError, match="lower_window"):
            dc.parse_holidays(b"name,date,lower_window,upper_window\nx,2023-01-02,1,2\n")

    def test_same_name_recurs(self):
        specs = dc.parse_holidays(
            b"name,date,lower_window,upper_window\npromo,2022-11-25,0,0\npromo,2023-11-24,0,0\n"
        )
        assert len(specs) == 2 and {h.name for h in specs} == {"promo"}


class TestMergeCovid:
    def _series(self, start, n):
        return dc.SkuSeries("A", start, np.ones(n))

    def test_pre_pandemic_all_zero(self):
        series = self._series(D(2019, 6, 1), 10)
        covid = [dc.CovidDaily(D(2020, 3, 1), 100.0, 2.0)]
        merged = dc.merge_covid(series, covid)
        assert merged.shape == (10, 2)
        assert not merged.any()

    def test_exact_join(self):
        series = self._series(D(2020, 3, 1), 3)
        covid = [dc.CovidDaily(D(2020, 3, 2), 100.0, 2.0)]
        merged = dc.merge_covid(series, covid)
        assert list(merged[1]) == [100.0, 2.0]
        assert not merged[0].any() and not merged[2].any()

    def test_trailing_zero_fill_after_last_record(self):
        series = self._series(D(2020, 3, 1), 5)
        covid = [dc.CovidDaily(D(2020, 3, 2), 10.0, 1.0)]
        merged = dc.merge_covid(series, covid)
        assert not merged[2:].any()

    def test_records_before_coverage_start_ignored(self):
        series = self._series(COVID_COVERAGE_START - (D(2020, 1, 22) - D(2020, 1, 21)) * 3, 7)
        covid = [dc.CovidDaily(D(2020, 1, 19), 9.0, 9.0), dc.CovidDaily(D(2020, 1, 21), 5.0, 1.0)]
        merged = dc.merge_covid(series, covid)
        assert not merged[:3].any()
        assert list(merged[3]) == [5.0, 1.0]

    def test_output_length_matches_series(self, small_dataset):
        _, _, series, covid, _ = small_dataset
        assert dc.merge_covid(series, covid).shape == (len(series), 2)

    def test_never_invents_nonzero(self, small_dataset):
        _, _, series, covid, _ = small_dataset
        merged = dc.merge_covid(series, covid)
        known = {(r.new_cases, r.new_deaths) for r in covid}
        for row in merged:
            if row.any():
                assert (row[0], row[1]) in known
