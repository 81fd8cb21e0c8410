"""Synthetic dataset generator with known ground-truth components.

Demand is built from exactly the components the forecaster estimates (trend,
Fourier seasonality, holiday effects, smoothed epidemic signals with known
coefficients) plus Gaussian noise, floored at zero; the generating parameters
ship alongside the data so recovery tests read their expected values instead
of hard-coding them.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .core import SkuSeries
from .features import rolling_mean
from .ingest import COVID_COVERAGE_START, HolidaySpec
from .model import ADDITIVE, MULTIPLICATIVE, ChangepointGrid, fourier_basis, trend_value


@dataclass(frozen=True)
class Wave:
    """One log-normal epidemic wave peaking ``peak_day`` days after reporting
    starts, with log-scale ``width`` controlling its spread."""

    amplitude: float
    peak_day: int
    width: float

    def curve(self, days_since_start: np.ndarray) -> np.ndarray:
        t = np.maximum(days_since_start + 1.0, 1e-9)
        return self.amplitude * np.exp(-((np.log(t / self.peak_day)) ** 2) / (2.0 * self.width**2))


@dataclass(frozen=True)
class SynthSpec:
    """Full description of one synthetic SKU's generating process."""

    sku: str = "synth-sku"
    start: date = date(2019, 6, 1)
    span_days: int = 900
    base_level: float = 100.0
    slope_per_day: float = 0.05
    trend_changes: tuple[tuple[int, float], ...] = ()  # (day index, slope change per day)
    weekly_coeffs: tuple[float, ...] = ()  # Fourier coefficients, period 7
    yearly_coeffs: tuple[float, ...] = ()  # Fourier coefficients, period 365.25
    holidays: tuple[tuple[HolidaySpec, float], ...] = ()
    covid_beta_cases: float = 0.0
    covid_beta_deaths: float = 0.0
    case_waves: tuple[Wave, ...] = (Wave(900.0, 100, 0.35), Wave(1400.0, 400, 0.30))
    death_waves: tuple[Wave, ...] = (Wave(18.0, 114, 0.35), Wave(28.0, 414, 0.30))
    covid_end: date = date(2023, 3, 23)
    noise_sigma: float = 0.0
    mode: str = ADDITIVE
    seed: int = 0

    def __post_init__(self) -> None:
        if self.span_days < 120:
            raise ValueError(f"span_days must be >= 120, got {self.span_days}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.mode not in (ADDITIVE, MULTIPLICATIVE):
            raise ValueError(f"mode must be additive or multiplicative, got {self.mode!r}")


@dataclass(frozen=True)
class SynthResult:
    """Generated file bytes plus the ground-truth record."""

    sales_csv: bytes
    covid_csv: bytes
    holidays_csv: bytes
    truth: dict[str, object]

    def truth_bytes(self) -> bytes:
        lines = [f"{k}={v}" for k, v in self.truth.items()]
        return ("\n".join(lines) + "\n").encode("utf-8")

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sales.csv").write_bytes(self.sales_csv)
        (out / "covid.csv").write_bytes(self.covid_csv)
        (out / "holidays.csv").write_bytes(self.holidays_csv)
        (out / "truth.txt").write_bytes(self.truth_bytes())


def _covid_series(spec: SynthSpec) -> tuple[list[date], np.ndarray, np.ndarray]:
    """Daily reported counts from the wave shapes, covering reporting start
    through min(series end, reporting end)."""
    series_end = spec.start + timedelta(days=spec.span_days - 1)
    end = min(series_end, spec.covid_end)
    if end < COVID_COVERAGE_START:
        return [], np.zeros(0), np.zeros(0)
    n = (end - COVID_COVERAGE_START).days + 1
    dates = [COVID_COVERAGE_START + timedelta(days=i) for i in range(n)]
    t = np.arange(n, dtype=float)
    cases = sum((w.curve(t) for w in spec.case_waves), np.zeros(n))
    deaths = sum((w.curve(t) for w in spec.death_waves), np.zeros(n))
    return dates, np.round(cases), np.round(deaths)


def components(spec: SynthSpec) -> dict[str, np.ndarray]:
    """Noise-free generating components on the sales date axis."""
    n = spec.span_days
    day_idx = np.arange(n, dtype=float)
    t_norm = day_idx / (n - 1)

    if spec.trend_changes:
        days = np.array([d for d, _ in spec.trend_changes], dtype=float)
        order = np.argsort(days)
        grid = ChangepointGrid(days[order] / (n - 1))
        deltas = np.array([spec.trend_changes[i][1] for i in order]) * (n - 1)
        trend = trend_value(t_norm, spec.slope_per_day * (n - 1), spec.base_level, grid, deltas)
    else:
        trend = spec.base_level + spec.slope_per_day * day_idx

    seasonal = np.zeros(n)
    if spec.weekly_coeffs:
        order = len(spec.weekly_coeffs) // 2
        seasonal = seasonal + fourier_basis(day_idx, 7.0, order) @ np.asarray(spec.weekly_coeffs)
    if spec.yearly_coeffs:
        order = len(spec.yearly_coeffs) // 2
        seasonal = seasonal + fourier_basis(day_idx, 365.25, order) @ np.asarray(spec.yearly_coeffs)

    holiday = np.zeros(n)
    dates = [spec.start + timedelta(days=i) for i in range(n)]
    for hspec, effect in spec.holidays:
        covered = {hspec.date + timedelta(days=off) for off in range(hspec.lower_window, hspec.upper_window + 1)}
        for i, d in enumerate(dates):
            if d in covered:
                holiday[i] += effect

    covid_dates, cases, deaths = _covid_series(spec)
    merged = np.zeros((n, 2))
    by_date = {d: i for i, d in enumerate(covid_dates)}
    for i, d in enumerate(dates):
        j = by_date.get(d)
        if j is not None:
            merged[i] = (cases[j], deaths[j])
    cases_avg = rolling_mean(merged[:, 0], 7)
    deaths_avg = rolling_mean(merged[:, 1], 7)
    covid = spec.covid_beta_cases * cases_avg + spec.covid_beta_deaths * deaths_avg

    if spec.mode == MULTIPLICATIVE:
        noiseless = trend * (1.0 + seasonal) + holiday + covid
    else:
        noiseless = trend + seasonal + holiday + covid
    return {
        "trend": trend,
        "seasonal": seasonal,
        "holiday": holiday,
        "covid": covid,
        "cases_7day_avg": cases_avg,
        "deaths_7day_avg": deaths_avg,
        "noiseless": noiseless,
    }


def generate(spec: SynthSpec) -> SynthResult:
    """Produce sales/covid/holidays files and the ground-truth record.

    Byte-identical for a given spec (the seed drives all randomness).
    """
    rng = np.random.default_rng(spec.seed)
    parts = components(spec)
    noiseless = parts["noiseless"]
    noise = rng.normal(0.0, spec.noise_sigma, spec.span_days) if spec.noise_sigma > 0 else np.zeros(spec.span_days)
    demand = noiseless + noise
    floored = int(np.sum(demand < 0))
    demand = np.maximum(demand, 0.0)

    dates = [spec.start + timedelta(days=i) for i in range(spec.span_days)]
    sales_lines = ["dt,sku,quantity"]
    sales_lines += [f"{d.isoformat()},{spec.sku},{float(v)!r}" for d, v in zip(dates, demand)]
    sales_csv = ("\n".join(sales_lines) + "\n").encode("utf-8")

    covid_dates, cases, deaths = _covid_series(spec)
    covid_lines = ["dt,new_cases,new_deaths"]
    covid_lines += [
        f"{d.isoformat()},{int(c)},{int(v)}" for d, c, v in zip(covid_dates, cases, deaths)
    ]
    covid_csv = ("\n".join(covid_lines) + "\n").encode("utf-8")

    holiday_lines = ["name,date,lower_window,upper_window"]
    holiday_lines += [
        f"{h.name},{h.date.isoformat()},{h.lower_window},{h.upper_window}" for h, _ in spec.holidays
    ]
    holidays_csv = ("\n".join(holiday_lines) + "\n").encode("utf-8")

    truth: dict[str, object] = {
        "sku": spec.sku,
        "start": spec.start.isoformat(),
        "span_days": spec.span_days,
        "base_level": spec.base_level,
        "slope_per_day": spec.slope_per_day,
        "mode": spec.mode,
        "covid_beta_cases": spec.covid_beta_cases,
        "covid_beta_deaths": spec.covid_beta_deaths,
        "noise_sigma": spec.noise_sigma,
        "seed": spec.seed,
        "mean_level": float(np.mean(noiseless)),
        "floored_days": floored,
    }
    for i, (day, delta) in enumerate(spec.trend_changes):
        truth[f"trend_change_{i}_day"] = day
        truth[f"trend_change_{i}_slope"] = delta
    for i, c in enumerate(spec.weekly_coeffs):
        truth[f"weekly_coeff_{i}"] = c
    for i, c in enumerate(spec.yearly_coeffs):
        truth[f"yearly_coeff_{i}"] = c
    for i, w in enumerate(spec.case_waves):
        truth[f"case_wave_{i}"] = f"{w.amplitude}:{w.peak_day}:{w.width}"
    for i, w in enumerate(spec.death_waves):
        truth[f"death_wave_{i}"] = f"{w.amplitude}:{w.peak_day}:{w.width}"
    for i, (h, effect) in enumerate(spec.holidays):
        truth[f"holiday_{i}"] = f"{h.name}:{h.date.isoformat()}:{effect}"

    return SynthResult(sales_csv=sales_csv, covid_csv=covid_csv, holidays_csv=holidays_csv, truth=truth)


def demand_series(spec: SynthSpec) -> SkuSeries:
    """The generated demand as an in-memory series (same draw as `generate`)."""
    rng = np.random.default_rng(spec.seed)
    noiseless = components(spec)["noiseless"]
    noise = rng.normal(0.0, spec.noise_sigma, spec.span_days) if spec.noise_sigma > 0 else np.zeros(spec.span_days)
    return SkuSeries(spec.sku, spec.start, np.maximum(noiseless + noise, 0.0))
