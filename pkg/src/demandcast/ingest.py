"""Parsing and validation of the delimited input files, plus the COVID join.

All files are UTF-8 comma-delimited text with an exact header; extra columns
are tolerated with a warning, dates are strict ISO-8601. Errors carry 1-based
line numbers (the header is line 1).
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from datetime import date

import numpy as np

from .core import CovidDaily, SkuSeries, _check_sku
from .errors import ValidationError

logger = logging.getLogger(__name__)

SALES_HEADER = ("dt", "sku", "quantity")
COVID_HEADER = ("dt", "new_cases", "new_deaths")
HOLIDAYS_HEADER = ("name", "date", "lower_window", "upper_window")
SCENARIO_HEADER = ("dt", "cases_7day_avg", "deaths_7day_avg")

# First day of usable epidemic reporting; series dates before it always join
# to (0, 0) regardless of what the covid file contains.
COVID_COVERAGE_START = date(2020, 1, 21)


@dataclass(frozen=True)
class HolidaySpec:
    """A named event window: ``lower_window`` days before through
    ``upper_window`` days after ``date``, both inclusive."""

    name: str
    date: date
    lower_window: int
    upper_window: int

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("holiday name must be non-empty")
        if self.lower_window > 0 or self.upper_window < 0:
            raise ValidationError(
                f"holiday {self.name!r} on {self.date.isoformat()}: "
                f"need lower_window <= 0 <= upper_window, got ({self.lower_window}, {self.upper_window})"
            )


def _rows(data: bytes, expected_header: tuple[str, ...], what: str):
    """Yield (line_number, row-dict) for each data row, checking the header."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValidationError(f"{what} file is not valid UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError(f"{what} file is empty; expected header {','.join(expected_header)}") from None
    header = [h.strip() for h in header]
    if tuple(header[: len(expected_header)]) != expected_header:
        raise ValidationError(
            f"{what} file has header {','.join(header)!r}; expected {','.join(expected_header)!r}"
        )
    extra = header[len(expected_header) :]
    if extra:
        logger.warning("%s file: ignoring extra columns %s", what, extra)
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(expected_header):
            raise ValidationError(f"{what} file line {lineno}: expected {len(expected_header)} fields, got {len(row)}")
        yield lineno, dict(zip(expected_header, (cell.strip() for cell in row)))


def _parse_date(raw: str, what: str, lineno: int) -> date:
    try:
        return date.fromisoformat(raw)
    except ValueError:
        raise ValidationError(f"{what} file line {lineno}: unparseable date {raw!r} (expected YYYY-MM-DD)") from None


def _parse_number(raw: str, what: str, lineno: int, field: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{what} file line {lineno}: unparseable {field} {raw!r}") from None
    if not np.isfinite(value):
        raise ValidationError(f"{what} file line {lineno}: non-finite {field} {raw!r}")
    return value


def parse_sales(data: bytes) -> list[tuple[date, str, float]]:
    """Parse a ``dt,sku,quantity`` file into one tuple per data row.

    Duplicate (date, sku) rows are preserved here; `core.align_series` sums
    them.
    """
    out: list[tuple[date, str, float]] = []
    for lineno, row in _rows(data, SALES_HEADER, "sales"):
        d = _parse_date(row["dt"], "sales", lineno)
        quantity = _parse_number(row["quantity"], "sales", lineno, "quantity")
        if quantity < 0:
            raise ValidationError(f"sales file line {lineno}: negative quantity {quantity!r}")
        try:
            sku = _check_sku(row["sku"])
        except ValidationError as exc:
            raise ValidationError(f"sales file line {lineno}: {exc}") from None
        out.append((d, sku, quantity))
    return out


def parse_covid(data: bytes) -> list[CovidDaily]:
    """Parse a ``dt,new_cases,new_deaths`` file, sorted by date, dates unique."""
    records: list[CovidDaily] = []
    seen: dict[date, int] = {}
    for lineno, row in _rows(data, COVID_HEADER, "covid"):
        d = _parse_date(row["dt"], "covid", lineno)
        if d in seen:
            raise ValidationError(f"covid file line {lineno}: duplicate date {d.isoformat()} (first at line {seen[d]})")
        seen[d] = lineno
        cases = _parse_number(row["new_cases"], "covid", lineno, "new_cases")
        deaths = _parse_number(row["new_deaths"], "covid", lineno, "new_deaths")
        if cases < 0 or deaths < 0:
            raise ValidationError(f"covid file line {lineno}: negative count")
        records.append(CovidDaily(d, cases, deaths))
    records.sort(key=lambda r: r.date)
    return records


def parse_holidays(data: bytes) -> list[HolidaySpec]:
    """Parse a ``name,date,lower_window,upper_window`` file.

    The same name may recur on multiple dates (annual holidays).
    """
    out: list[HolidaySpec] = []
    for lineno, row in _rows(data, HOLIDAYS_HEADER, "holidays"):
        d = _parse_date(row["date"], "holidays", lineno)
        try:
            lower = int(row["lower_window"])
            upper = int(row["upper_window"])
        except ValueError:
            raise ValidationError(f"holidays file line {lineno}: windows must be integers") from None
        try:
            out.append(HolidaySpec(row["name"], d, lower, upper))
        except ValidationError as exc:
            raise ValidationError(f"holidays file line {lineno}: {exc}") from None
    return out


def parse_scenario(data: bytes) -> dict[date, tuple[float, float]]:
    """Parse a future-COVID override file: ``dt,cases_7day_avg,deaths_7day_avg``."""
    out: dict[date, tuple[float, float]] = {}
    for lineno, row in _rows(data, SCENARIO_HEADER, "scenario"):
        d = _parse_date(row["dt"], "scenario", lineno)
        if d in out:
            raise ValidationError(f"scenario file line {lineno}: duplicate date {d.isoformat()}")
        cases = _parse_number(row["cases_7day_avg"], "scenario", lineno, "cases_7day_avg")
        deaths = _parse_number(row["deaths_7day_avg"], "scenario", lineno, "deaths_7day_avg")
        if cases < 0 or deaths < 0:
            raise ValidationError(f"scenario file line {lineno}: negative value")
        out[d] = (cases, deaths)
    return out


def merge_covid(
    series: SkuSeries,
    covid: list[CovidDaily],
    coverage_start: date = COVID_COVERAGE_START,
) -> np.ndarray:
    """Per-date (new_cases, new_deaths) aligned to the series axis, shape (n, 2).

    Dates outside reporting coverage (before ``coverage_start`` or after the
    last covid record) and dates with no matching record join to (0, 0).
    """
    by_date = {r.date: (r.new_cases, r.new_deaths) for r in covid if r.date >= coverage_start}
    out = np.zeros((len(series), 2))
    for i, d in enumerate(series.dates()):
        pair = by_date.get(d)
        if pair is not None:
            out[i] = pair
    return out
