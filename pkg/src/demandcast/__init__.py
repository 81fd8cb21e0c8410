"""SKU-level daily demand forecasting for manufacturing planning.

Pipeline: parse sales/covid/holiday files, build the 16-regressor design,
fit the structural decomposition (trend changepoints, Fourier seasonality,
holiday effects, external regressors), tune hyperparameters per SKU by
expanding-window cross-validation, and roll daily forecasts up to monthly
planning totals with uncertainty bounds.
"""

from .aggregate import MonthlyForecast, month_diff, monthly_totals
from .core import CovidDaily, SkuSeries, align_series
from .errors import (
    CheckpointError,
    ConfigError,
    InsufficientHistoryError,
    NonConvergenceError,
    ValidationError,
)
from .features import (
    DesignMatrix,
    FlagWindows,
    REGRESSOR_NAMES,
    assemble_design,
    calendar_flags,
    covid_features,
    lag,
    project_future,
    rolling_mean,
)
from .ingest import (
    HolidaySpec,
    merge_covid,
    parse_covid,
    parse_holidays,
    parse_sales,
    parse_scenario,
)
from .metrics import EvalReport, PointMetrics, directional_accuracy, point_metrics
from .model import (
    FittedModel,
    Hyperparameters,
    Prediction,
    Seasonality,
    SKU_PRESETS,
    fit,
    fourier_basis,
    holiday_matrix,
    load_model,
    place_changepoints,
    predict,
    sample_intervals,
    save_model,
    trend_value,
)
from .synth import SynthSpec, SynthResult, Wave, generate
from .tuning import (
    CvSplit,
    SearchResult,
    SearchSpace,
    TuneCheckpoint,
    cross_validate,
    make_cv_splits,
    read_checkpoint,
    search,
)

__version__ = "0.1.0"

__all__ = [
    "CheckpointError",
    "ConfigError",
    "CovidDaily",
    "CvSplit",
    "DesignMatrix",
    "EvalReport",
    "FittedModel",
    "FlagWindows",
    "HolidaySpec",
    "Hyperparameters",
    "InsufficientHistoryError",
    "MonthlyForecast",
    "NonConvergenceError",
    "PointMetrics",
    "Prediction",
    "REGRESSOR_NAMES",
    "SKU_PRESETS",
    "SearchResult",
    "SearchSpace",
    "Seasonality",
    "SkuSeries",
    "SynthResult",
    "SynthSpec",
    "TuneCheckpoint",
    "ValidationError",
    "Wave",
    "align_series",
    "assemble_design",
    "calendar_flags",
    "covid_features",
    "cross_validate",
    "directional_accuracy",
    "fit",
    "fourier_basis",
    "generate",
    "holiday_matrix",
    "lag",
    "load_model",
    "make_cv_splits",
    "merge_covid",
    "month_diff",
    "monthly_totals",
    "parse_covid",
    "parse_holidays",
    "parse_sales",
    "parse_scenario",
    "place_changepoints",
    "point_metrics",
    "predict",
    "project_future",
    "read_checkpoint",
    "rolling_mean",
    "sample_intervals",
    "save_model",
    "search",
    "trend_value",
]
