from datetime import date

import numpy as np
import pytest

import demandcast as dc
from demandcast.synth import components


def build_dataset(spec: dc.SynthSpec):
    """Generate a spec and run it through the ingestion path."""
    result = dc.generate(spec)
    series = dc.align_series(dc.parse_sales(result.sales_csv))[spec.sku]
    covid = dc.parse_covid(result.covid_csv)
    return result, series, covid


def noise_for(spec_kwargs: dict, fraction: float) -> float:
    """noise_sigma equal to `fraction` of the noiseless mean level."""
    probe = dc.SynthSpec(**{**spec_kwargs, "noise_sigma": 0.0})
    return fraction * float(np.mean(components(probe)["noiseless"]))


@pytest.fixture(scope="session")
def small_dataset():
    """A 400-day series with covid effect and weekly seasonality."""
    spec = dc.SynthSpec(
        sku="unit-sku",
        span_days=400,
        base_level=100.0,
        slope_per_day=0.05,
        weekly_coeffs=(4.0, 2.0, 1.0, 0.5, 0.0, 0.0),
        covid_beta_deaths=1.5,
        noise_sigma=2.0,
        seed=11,
    )
    result, series, covid = build_dataset(spec)
    merged = dc.merge_covid(series, covid)
    design = dc.assemble_design(series, merged)
    return spec, result, series, covid, design


@pytest.fixture(scope="session")
def fitted_additive(small_dataset):
    _, _, series, _, design = small_dataset
    model = dc.fit(design, dc.Hyperparameters(), sku=series.sku)
    return design, model


@pytest.fixture(scope="session")
def holidays_sample():
    return [
        dc.HolidaySpec("promo", date(2019, 11, 29), -1, 3),
        dc.HolidaySpec("promo", date(2020, 11, 27), -1, 3),
        dc.HolidaySpec("launch", date(2020, 3, 2), 0, 0),
    ]
