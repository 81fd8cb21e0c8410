"""SKU-specific hyperparameter optimization.

Random search over the six knobs, scored by mean MAPE of monthly aggregates
over expanding-window cross-validation splits. Trial 0 is always the fixed
default configuration, so the search result can never score worse than the
default under the same splits. Every completed trial is appended to a
checkpoint file; rerunning with the same seed and checkpoint resumes where
the previous run stopped and reaches an identical result.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

from .aggregate import monthly_totals
from .core import CovidDaily, SkuSeries
from .errors import CheckpointError, ConfigError
from .features import DEFAULT_FLAG_WINDOWS, FlagWindows, assemble_design, project_future
from .ingest import HolidaySpec, merge_covid
from .metrics import point_metrics
from .model import (
    DEFAULT_SEASONALITIES,
    SEARCH_BOUNDS,
    Hyperparameters,
    Seasonality,
    fit,
    predict,
)

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1

DEFAULT_HYPERPARAMETERS = Hyperparameters(
    changepoint_prior_scale=0.05,
    seasonality_prior_scale=10.0,
    holidays_prior_scale=10.0,
    seasonality_mode="additive",
    changepoint_range=0.8,
    n_changepoints=25,
)

# Month-offset buckets the CV error is scored on (the 1-, 2- and 3-month
# planning horizons).
SCORED_MONTHS = (1, 2, 3)


@dataclass(frozen=True)
class SearchSpace:
    """Per-knob sampling ranges; defaults match the documented search bounds."""

    changepoint_prior_scale: tuple[float, float] = SEARCH_BOUNDS["changepoint_prior_scale"]
    seasonality_prior_scale: tuple[float, float] = SEARCH_BOUNDS["seasonality_prior_scale"]
    holidays_prior_scale: tuple[float, float] = SEARCH_BOUNDS["holidays_prior_scale"]
    changepoint_range: tuple[float, float] = SEARCH_BOUNDS["changepoint_range"]
    n_changepoints: tuple[int, int] = SEARCH_BOUNDS["n_changepoints"]
    modes: tuple[str, ...] = ("additive", "multiplicative")

    def content_hash(self) -> str:
        text = repr(
            (
                self.changepoint_prior_scale,
                self.seasonality_prior_scale,
                self.holidays_prior_scale,
                self.changepoint_range,
                self.n_changepoints,
                self.modes,
            )
        )
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]

    def draw(self, seed: int, trial: int) -> Hyperparameters:
        """Hyperparameters for one trial; trial 0 is always the default set."""
        if trial == 0:
            return DEFAULT_HYPERPARAMETERS
        rng = np.random.default_rng([seed, trial])

        def log_uniform(lo: float, hi: float) -> float:
            return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

        return Hyperparameters(
            changepoint_prior_scale=log_uniform(*self.changepoint_prior_scale),
            seasonality_prior_scale=log_uniform(*self.seasonality_prior_scale),
            holidays_prior_scale=log_uniform(*self.holidays_prior_scale),
            seasonality_mode=str(rng.choice(self.modes)),
            changepoint_range=float(rng.uniform(*self.changepoint_range)),
            n_changepoints=int(rng.integers(self.n_changepoints[0], self.n_changepoints[1] + 1)),
        )


@dataclass(frozen=True)
class CvSplit:
    """One expanding-window split: train through ``train_end``, score the
    ``horizon_days`` that follow."""

    train_days: int
    train_end: date
    test_start: date
    test_end: date

    @property
    def horizon_days(self) -> int:
        return (self.test_end - self.test_start).days + 1


def make_cv_splits(
    start: date,
    span_days: int,
    initial_train_days: int,
    period_days: int,
    horizon_days: int,
) -> list[CvSplit]:
    """Expanding-window splits: cutoffs every ``period_days`` starting at
    ``initial_train_days``, keeping only splits whose test span fits."""
    if horizon_days < 1:
        raise ConfigError(f"horizon_days must be >= 1, got {horizon_days}")
    if period_days < 1:
        raise ConfigError(f"period_days must be >= 1, got {period_days}")
    splits = []
    train_days = initial_train_days
    while train_days + horizon_days <= span_days:
        train_end = start + timedelta(days=train_days - 1)
        splits.append(
            CvSplit(
                train_days=train_days,
                train_end=train_end,
                test_start=train_end + timedelta(days=1),
                test_end=train_end + timedelta(days=horizon_days),
            )
        )
        train_days += period_days
    if not splits:
        raise ConfigError(
            f"no usable CV splits: span {span_days} days, initial train {initial_train_days}, horizon {horizon_days}"
        )
    return splits


def default_cv_geometry(span_days: int, horizon_days: int = 90, period_days: int = 30) -> tuple[int, int, int]:
    """(initial_train_days, period_days, horizon_days) for a series length."""
    initial = max(365, int(round(0.4 * span_days)))
    return initial, period_days, horizon_days


def cross_validate(
    series: SkuSeries,
    covid: Sequence[CovidDaily],
    holidays: Sequence[HolidaySpec],
    hp: Hyperparameters,
    splits: Sequence[CvSplit],
    seasonalities: Sequence[Seasonality] = DEFAULT_SEASONALITIES,
    flag_windows: FlagWindows = DEFAULT_FLAG_WINDOWS,
) -> float:
    """Mean MAPE over splits, scored on monthly aggregates at month offsets
    1-3 from each cutoff.

    A split whose fit fails is skipped with a warning; if every split fails
    the error propagates.
    """
    mapes = []
    failure: Exception | None = None
    for split in splits:
        try:
            mapes.append(
                _score_split(series, covid, holidays, hp, split, seasonalities, flag_windows)
            )
        except Exception as exc:  # noqa: BLE001 - a bad split must not sink the search
            failure = exc
            logger.warning("skipping CV split ending %s: %s", split.train_end.isoformat(), exc)
    if not mapes:
        raise ConfigError(f"all {len(splits)} CV splits failed; last error: {failure}")
    return float(np.mean(mapes))


def _score_split(
    series: SkuSeries,
    covid: Sequence[CovidDaily],
    holidays: Sequence[HolidaySpec],
    hp: Hyperparameters,
    split: CvSplit,
    seasonalities: Sequence[Seasonality],
    flag_windows: FlagWindows,
) -> float:
    if split.train_days + split.horizon_days > len(series):
        raise ConfigError(f"split at {split.train_end.isoformat()} exceeds the series span")
    train = series.head(split.train_days)
    merged = merge_covid(train, list(covid))
    design = assemble_design(train, merged, flag_windows)
    model = fit(design, hp, holidays, seasonalities, sku=series.sku)
    future = project_future(design, split.horizon_days, flag_windows)
    prediction = predict(model, future)

    cutoff = split.train_end
    predicted_rows = monthly_totals(list(future.dates), prediction.yhat, series.sku, cutoff)
    actual_values = series.values[split.train_days : split.train_days + split.horizon_days]
    actual_rows = monthly_totals(list(future.dates), actual_values, series.sku, cutoff)

    predicted = {row.month_diff: row.sales for row in predicted_rows}
    actual = {row.month_diff: row.sales for row in actual_rows}
    months = [m for m in SCORED_MONTHS if m in predicted and m in actual]
    if not months:
        raise ConfigError(f"split at {cutoff.isoformat()}: no scored month buckets in a {split.horizon_days}-day horizon")
    result = point_metrics([actual[m] for m in months], [predicted[m] for m in months])
    if result.mape is None:
        raise ConfigError(f"split at {cutoff.isoformat()}: every monthly actual is zero; MAPE undefined")
    return result.mape


@dataclass(frozen=True)
class TrialRecord:
    index: int
    hp: Hyperparameters
    mape: float


@dataclass(frozen=True)
class TuneCheckpoint:
    """Parsed checkpoint state: completed trials for one (sku, seed, space)."""

    sku: str
    seed: int
    space_hash: str
    trials: tuple[TrialRecord, ...]

    @property
    def best(self) -> TrialRecord | None:
        if not self.trials:
            return None
        return min(self.trials, key=lambda t: (t.mape, t.index))


@dataclass(frozen=True)
class SearchResult:
    best: TrialRecord
    trials: tuple[TrialRecord, ...]


def _header_line(sku: str, seed: int, space_hash: str) -> str:
    return f"#tune\tv{CHECKPOINT_VERSION}\t{sku}\t{seed}\t{space_hash}"


def _record_line(record: TrialRecord) -> str:
    hp = record.hp
    return "\t".join(
        [
            str(record.index),
            repr(hp.changepoint_prior_scale),
            repr(hp.seasonality_prior_scale),
            repr(hp.holidays_prior_scale),
            hp.seasonality_mode,
            repr(hp.changepoint_range),
            str(hp.n_changepoints),
            repr(record.mape),
        ]
    )


def _parse_record(line: str, lineno: int, path: Path) -> TrialRecord:
    parts = line.split("\t")
    if len(parts) != 8:
        raise CheckpointError(f"{path}: line {lineno}: expected 8 fields, got {len(parts)}")
    try:
        hp = Hyperparameters(
            changepoint_prior_scale=float(parts[1]),
            seasonality_prior_scale=float(parts[2]),
            holidays_prior_scale=float(parts[3]),
            seasonality_mode=parts[4],
            changepoint_range=float(parts[5]),
            n_changepoints=int(parts[6]),
        )
        return TrialRecord(index=int(parts[0]), hp=hp, mape=float(parts[7]))
    except (ValueError, KeyError) as exc:
        raise CheckpointError(f"{path}: line {lineno}: unparseable record: {exc}") from None


def read_checkpoint(path: str | Path) -> TuneCheckpoint:
    """Parse and validate a checkpoint file."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise CheckpointError(f"{path}: empty checkpoint")
    head = lines[0].split("\t")
    if len(head) != 5 or head[0] != "#tune":
        raise CheckpointError(f"{path}: malformed header {lines[0]!r}")
    if head[1] != f"v{CHECKPOINT_VERSION}":
        raise CheckpointError(f"{path}: unsupported checkpoint version {head[1]!r}")
    try:
        seed = int(head[3])
    except ValueError:
        raise CheckpointError(f"{path}: non-integer seed in header") from None
    trials = [_parse_record(line, i, path) for i, line in enumerate(lines[1:], start=2) if line]
    for expected, record in enumerate(trials):
        if record.index != expected:
            raise CheckpointError(f"{path}: trial indices not contiguous (found {record.index}, expected {expected})")
    return TuneCheckpoint(sku=head[2], seed=seed, space_hash=head[4], trials=tuple(trials))


def search(
    series: SkuSeries,
    covid: Sequence[CovidDaily],
    holidays: Sequence[HolidaySpec],
    space: SearchSpace,
    budget: int,
    seed: int,
    checkpoint_path: str | Path,
    splits: Sequence[CvSplit] | None = None,
    seasonalities: Sequence[Seasonality] = DEFAULT_SEASONALITIES,
    flag_windows: FlagWindows = DEFAULT_FLAG_WINDOWS,
) -> SearchResult:
    """Deterministic random search; returns the minimum-MAPE trial.

    Ties break toward the lower trial index. On restart with the same seed,
    space and checkpoint path, completed trials are skipped and the final
    result matches an uninterrupted run exactly.
    """
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    if splits is None:
        initial, period, horizon = default_cv_geometry(len(series))
        splits = make_cv_splits(series.start, len(series), initial, period, horizon)

    path = Path(checkpoint_path)
    space_hash = space.content_hash()
    done: list[TrialRecord] = []
    if path.exists() and path.stat().st_size > 0:
        ck = read_checkpoint(path)
        if ck.sku != series.sku:
            raise CheckpointError(f"{path}: checkpoint is for sku {ck.sku!r}, not {series.sku!r}")
        if ck.seed != seed:
            raise CheckpointError(f"{path}: checkpoint seed {ck.seed} does not match invocation seed {seed}")
        if ck.space_hash != space_hash:
            raise CheckpointError(f"{path}: search space changed since the checkpoint was written")
        for record in ck.trials:
            if record.hp != space.draw(seed, record.index):
                raise CheckpointError(f"{path}: trial {record.index} parameters do not match the seeded draw")
        done = list(ck.trials)
        logger.info("resuming %s from %d completed trials", path, len(done))
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_header_line(series.sku, seed, space_hash) + "\n", encoding="utf-8")

    trials = list(done)
    with path.open("a", encoding="utf-8") as ck_file:
        for index in range(len(done), budget):
            hp = space.draw(seed, index)
            mape = cross_validate(series, covid, holidays, hp, splits, seasonalities, flag_windows)
            record = TrialRecord(index=index, hp=hp, mape=mape)
            ck_file.write(_record_line(record) + "\n")
            ck_file.flush()
            trials.append(record)

    trials = trials[:budget]
    best = min(trials, key=lambda t: (t.mape, t.index))
    return SearchResult(best=best, trials=tuple(trials))
