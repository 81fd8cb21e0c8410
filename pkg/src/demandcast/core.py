"""Domain types shared by all modules, plus date-axis alignment.

Dates are plain ``datetime.date`` values throughout; a day is the finest
granularity anywhere in the pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Iterable

import numpy as np

from .errors import ValidationError


def _check_sku(sku: str) -> str:
    if not sku or sku != sku.strip():
        raise ValidationError(f"invalid sku id {sku!r}: must be non-empty with no surrounding whitespace")
    return sku


@dataclass(frozen=True)
class SkuSeries:
    """One SKU's daily demand history on a contiguous date axis.

    ``values[i]`` is the demand on ``start + i`` days; every calendar day in
    the span has exactly one entry.
    """

    sku: str
    start: date
    values: np.ndarray

    def __post_init__(self) -> None:
        _check_sku(self.sku)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValidationError(f"series for {self.sku!r} must hold at least one daily value")
        if not np.all(np.isfinite(values)):
            raise ValidationError(f"series for {self.sku!r} contains non-finite values")
        if np.any(values < 0):
            raise ValidationError(f"series for {self.sku!r} contains negative values")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def end(self) -> date:
        return self.start + timedelta(days=len(self) - 1)

    def dates(self) -> list[date]:
        return [self.start + timedelta(days=i) for i in range(len(self))]

    def head(self, n_days: int) -> "SkuSeries":
        """First ``n_days`` of the series (used for CV training views)."""
        if not 1 <= n_days <= len(self):
            raise ValueError(f"cannot take {n_days} days from a {len(self)}-day series")
        return SkuSeries(self.sku, self.start, self.values[:n_days].copy())


@dataclass(frozen=True)
class CovidDaily:
    """One day of reported epidemic counts."""

    date: date
    new_cases: float
    new_deaths: float

    def __post_init__(self) -> None:
        for name in ("new_cases", "new_deaths"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"{name} on {self.date.isoformat()} must be finite and >= 0, got {v!r}")


def align_series(observations: Iterable[tuple[date, str, float]]) -> dict[str, SkuSeries]:
    """Partition raw (date, sku, quantity) rows into contiguous daily series.

    Days with no observation are zero-filled (a day with no orders is a
    zero-sales day); duplicate (date, sku) rows are summed. Returns one
    series per SKU spanning its earliest to latest observed date.
    """
    per_sku: dict[str, dict[date, float]] = {}
    for row in observations:
        d, sku, quantity = row
        _check_sku(sku)
        if not math.isfinite(quantity) or quantity < 0:
            raise ValidationError(f"negative or non-finite quantity in row ({d.isoformat()}, {sku!r}, {quantity!r})")
        per_sku.setdefault(sku, {})
        per_sku[sku][d] = per_sku[sku].get(d, 0.0) + quantity

    out: dict[str, SkuSeries] = {}
    for sku, by_date in per_sku.items():
        first, last = min(by_date), max(by_date)
        n = (last - first).days + 1
        values = np.zeros(n)
        for d, q in by_date.items():
            values[(d - first).days] = q
        out[sku] = SkuSeries(sku, first, values)
    return out
