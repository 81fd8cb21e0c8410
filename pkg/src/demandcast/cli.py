"""Command-line surface: validate, tune, fit, forecast, evaluate, synth, report.

Every command is deterministic given its flags and seed; output files carry
no timestamps. Exit codes: 0 success, 1 internal error, 2 input/validation
error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .aggregate import MonthlyForecast, month_diff, monthly_totals
from .core import align_series
from .errors import CheckpointError, ConfigError, ValidationError
from .features import DEFAULT_FLAG_WINDOWS, FlagWindows, assemble_design, project_future
from .ingest import merge_covid, parse_covid, parse_holidays, parse_sales, parse_scenario
from .metrics import EvalReport, directional_accuracy, point_metrics
from .model import (
    SKU_PRESETS,
    Hyperparameters,
    fit,
    load_model,
    predict,
    sample_intervals,
    save_model,
)
from .synth import SynthSpec, Wave, generate
from .tuning import SearchSpace, default_cv_geometry, make_cv_splits, search

logger = logging.getLogger(__name__)

DAILY_HEADER = "ds,sku,yhat,yhat_lower,yhat_upper,trend,weekly,yearly,holidays,regressors"
MONTHLY_HEADER = "sku,year,month,month_diff,sales,lower,upper,days_covered"
METRICS_HEADER = "sku,horizon_months,mape,rmse,mae,directional_accuracy,n_points,mape_excluded"


@dataclass
class RunConfig:
    """Declarative defaults for CLI runs; explicit flags always win.

    Round-trips through JSON (see config.example.json).
    """

    sales: str | None = None
    covid: str | None = None
    holidays: str | None = None
    scenario: str | None = None
    checkpoint: str | None = None
    output_dir: str | None = None
    horizon: int = 90
    interval_level: float = 0.8
    seed: int = 0
    budget: int = 40
    initial_train_days: int | None = None
    period_days: int = 30
    horizon_days: int = 90
    presets: dict[str, Hyperparameters] = field(default_factory=lambda: dict(SKU_PRESETS))
    flag_windows: FlagWindows = DEFAULT_FLAG_WINDOWS

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        raw = json.loads(text)
        cfg = cls()
        for key in (
            "sales",
            "covid",
            "holidays",
            "scenario",
            "checkpoint",
            "output_dir",
            "horizon",
            "interval_level",
            "seed",
            "budget",
            "initial_train_days",
            "period_days",
            "horizon_days",
        ):
            if key in raw:
                setattr(cfg, key, raw[key])
        if "presets" in raw:
            cfg.presets = {name: Hyperparameters.from_dict(d) for name, d in raw["presets"].items()}
        if "flag_windows" in raw:
            fw = raw["flag_windows"]

            def pair(name, default):
                return tuple(fw.get(name, default))

            cfg.flag_windows = FlagWindows(
                summer_peak_start=pair("summer_peak_start", DEFAULT_FLAG_WINDOWS.summer_peak_start),
                summer_peak_end=pair("summer_peak_end", DEFAULT_FLAG_WINDOWS.summer_peak_end),
                back_to_school_start=pair("back_to_school_start", DEFAULT_FLAG_WINDOWS.back_to_school_start),
                back_to_school_end=pair("back_to_school_end", DEFAULT_FLAG_WINDOWS.back_to_school_end),
                holiday_season_start=pair("holiday_season_start", DEFAULT_FLAG_WINDOWS.holiday_season_start),
                holiday_season_end=pair("holiday_season_end", DEFAULT_FLAG_WINDOWS.holiday_season_end),
            )
        return cfg

    def to_json(self) -> str:
        fw = self.flag_windows
        payload = {
            "sales": self.sales,
            "covid": self.covid,
            "holidays": self.holidays,
            "scenario": self.scenario,
            "checkpoint": self.checkpoint,
            "output_dir": self.output_dir,
            "horizon": self.horizon,
            "interval_level": self.interval_level,
            "seed": self.seed,
            "budget": self.budget,
            "initial_train_days": self.initial_train_days,
            "period_days": self.period_days,
            "horizon_days": self.horizon_days,
            "presets": {name: hp.to_dict() for name, hp in self.presets.items()},
            "flag_windows": {
                "summer_peak_start": list(fw.summer_peak_start),
                "summer_peak_end": list(fw.summer_peak_end),
                "back_to_school_start": list(fw.back_to_school_start),
                "back_to_school_end": list(fw.back_to_school_end),
                "holiday_season_start": list(fw.holiday_season_start),
                "holiday_season_end": list(fw.holiday_season_end),
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _load_config(args) -> RunConfig:
    if getattr(args, "config", None):
        return RunConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    return RunConfig()


def _pick(flag_value, config_value, default=None):
    if flag_value is not None:
        return flag_value
    if config_value is not None:
        return config_value
    return default


def _read(path: str, what: str) -> bytes:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"{what} file not found: {path}")
    return p.read_bytes()


def _require(value, flag: str):
    if value is None:
        raise ValidationError(f"missing required option {flag} (set it on the command line or in the config file)")
    return value


def _load_inputs(sales_path: str, covid_path: str | None, holidays_path: str | None):
    observations = parse_sales(_read(sales_path, "sales"))
    covid = parse_covid(_read(covid_path, "covid")) if covid_path else []
    holidays = parse_holidays(_read(holidays_path, "holidays")) if holidays_path else []
    return align_series(observations), covid, holidays


def _series_for(series_by_sku, sku: str):
    if sku not in series_by_sku:
        known = ", ".join(sorted(series_by_sku)) or "<none>"
        raise ValidationError(f"sku {sku!r} not present in the sales file (found: {known})")
    return series_by_sku[sku]


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_monthly(path: Path, rows: list[MonthlyForecast]) -> None:
    lines = [MONTHLY_HEADER]
    for r in rows:
        lines.append(
            f"{r.sku},{r.year},{r.month},{r.month_diff},{_fmt(r.sales)},{_fmt(r.lower)},{_fmt(r.upper)},{r.days_covered}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    cfg = _load_config(args)
    sales_path = _require(_pick(args.sales, cfg.sales), "--sales")
    covid_path = _pick(args.covid, cfg.covid)
    holidays_path = _pick(args.holidays, cfg.holidays)

    failures = 0
    try:
        series_by_sku = align_series(parse_sales(_read(sales_path, "sales")))
        n_days = sum(len(s) for s in series_by_sku.values())
        print(f"sales: OK ({len(series_by_sku)} skus, {n_days} series days)")
        for sku in sorted(series_by_sku):
            s = series_by_sku[sku]
            print(f"  {sku}: {s.start.isoformat()} .. {s.end.isoformat()} ({len(s)} days, total {s.values.sum():.1f})")
    except ValidationError as exc:
        failures += 1
        print(f"sales: INVALID: {exc}")
    if covid_path:
        try:
            covid = parse_covid(_read(covid_path, "covid"))
            span = f"{covid[0].date.isoformat()} .. {covid[-1].date.isoformat()}" if covid else "empty"
            print(f"covid: OK ({len(covid)} records, {span})")
        except ValidationError as exc:
            failures += 1
            print(f"covid: INVALID: {exc}")
    if holidays_path:
        try:
            holidays = parse_holidays(_read(holidays_path, "holidays"))
            print(f"holidays: OK ({len(holidays)} entries, {len({h.name for h in holidays})} names)")
        except ValidationError as exc:
            failures += 1
            print(f"holidays: INVALID: {exc}")
    return 2 if failures else 0


def _cmd_tune(args) -> int:
    cfg = _load_config(args)
    sales_path = _require(_pick(args.sales, cfg.sales), "--sales")
    covid_path = _pick(args.covid, cfg.covid)
    holidays_path = _pick(args.holidays, cfg.holidays)
    checkpoint = _require(_pick(args.checkpoint, cfg.checkpoint), "--checkpoint")
    out_dir = Path(_pick(args.out, cfg.output_dir, "."))
    budget = _pick(args.budget, cfg.budget, 40)
    seed = _pick(args.seed, cfg.seed, 0)

    series_by_sku, covid, holidays = _load_inputs(sales_path, covid_path, holidays_path)
    series = _series_for(series_by_sku, args.sku)

    initial = _pick(args.initial_train_days, cfg.initial_train_days)
    period = _pick(args.period_days, cfg.period_days, 30)
    horizon = _pick(args.horizon_days, cfg.horizon_days, 90)
    if initial is None:
        initial, period, horizon = default_cv_geometry(len(series), horizon, period)
    splits = make_cv_splits(series.start, len(series), initial, period, horizon)
    print(f"tuning {args.sku}: {budget} trials, {len(splits)} CV splits, seed {seed}")

    result = search(
        series,
        covid,
        holidays,
        SearchSpace(),
        budget=budget,
        seed=seed,
        checkpoint_path=checkpoint,
        splits=splits,
        flag_windows=cfg.flag_windows,
    )

    out_dir.mkdir(parents=True, exist_ok=True)
    best_path = out_dir / f"{args.sku}_best_params.json"
    best_payload = dict(result.best.hp.to_dict(), cv_mape=result.best.mape, trial=result.best.index)
    best_path.write_text(json.dumps(best_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    trials_path = out_dir / f"{args.sku}_trials.csv"
    lines = ["trial,changepoint_prior_scale,seasonality_prior_scale,holidays_prior_scale,seasonality_mode,changepoint_range,n_changepoints,mean_mape"]
    for t in result.trials:
        hp = t.hp
        lines.append(
            f"{t.index},{_fmt(hp.changepoint_prior_scale)},{_fmt(hp.seasonality_prior_scale)},{_fmt(hp.holidays_prior_scale)},"
            f"{hp.seasonality_mode},{_fmt(hp.changepoint_range)},{hp.n_changepoints},{_fmt(t.mape)}"
        )
    trials_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"best trial {result.best.index}: CV MAPE {100 * result.best.mape:.2f}%")
    print(f"wrote {best_path} and {trials_path}")
    return 0


def _hp_from_args(args, cfg: RunConfig) -> Hyperparameters:
    if args.params and args.preset:
        raise ValidationError("pass either --params or --preset, not both")
    if args.params:
        raw = json.loads(_read(args.params, "params").decode("utf-8"))
        return Hyperparameters.from_dict(raw)
    if args.preset:
        if args.preset not in cfg.presets:
            known = ", ".join(sorted(cfg.presets))
            raise ValidationError(f"unknown preset {args.preset!r} (available: {known})")
        return cfg.presets[args.preset]
    raise ValidationError("missing hyperparameters: pass --params FILE or --preset NAME")


def _cmd_fit(args) -> int:
    cfg = _load_config(args)
    sales_path = _require(_pick(args.sales, cfg.sales), "--sales")
    covid_path = _pick(args.covid, cfg.covid)
    holidays_path = _pick(args.holidays, cfg.holidays)
    hp = _hp_from_args(args, cfg)

    series_by_sku, covid, holidays = _load_inputs(sales_path, covid_path, holidays_path)
    series = _series_for(series_by_sku, args.sku)
    if args.cutoff:
        cutoff = date.fromisoformat(args.cutoff)
        n_days = (cutoff - series.start).days + 1
        if n_days < 1:
            raise ValidationError(f"cutoff {args.cutoff} is before the series start {series.start.isoformat()}")
        series = series.head(min(n_days, len(series)))

    merged = merge_covid(series, covid)
    design = assemble_design(series, merged, cfg.flag_windows)
    model = fit(design, hp, holidays, sku=series.sku)
    save_model(model, args.out)
    print(
        f"fitted {series.sku}: {len(design)} training rows "
        f"({design.dates[0].isoformat()} .. {design.dates[-1].isoformat()}), "
        f"mode {model.mode}, residual sigma {model.residual_sigma * model.y_scale:.3f}"
    )
    print(f"wrote {args.out}")
    return 0


def _cmd_forecast(args) -> int:
    cfg = _load_config(args)
    sales_path = _require(_pick(args.sales, cfg.sales), "--sales")
    covid_path = _pick(args.covid, cfg.covid)
    scenario_path = _pick(args.scenario, cfg.scenario)
    out_dir = Path(_pick(args.out, cfg.output_dir, "."))
    horizon = _pick(args.horizon, cfg.horizon, 90)
    level = _pick(args.level, cfg.interval_level, 0.8)
    seed = _pick(args.seed, cfg.seed, 0)

    model = load_model(args.model)
    sku = args.sku or model.sku
    series_by_sku, covid, _ = _load_inputs(sales_path, covid_path, None)
    series = _series_for(series_by_sku, sku)
    cutoff = date.fromisoformat(args.cutoff) if args.cutoff else series.end
    n_days = (cutoff - series.start).days + 1
    if n_days > len(series):
        raise ValidationError(f"cutoff {cutoff.isoformat()} is past the sales history end {series.end.isoformat()}")
    if n_days < 1:
        raise ValidationError(f"cutoff {cutoff.isoformat()} is before the series start {series.start.isoformat()}")
    series = series.head(n_days)

    scenario = parse_scenario(_read(scenario_path, "scenario")) if scenario_path else None
    merged = merge_covid(series, covid)
    design = assemble_design(series, merged, cfg.flag_windows)
    future = project_future(design, horizon, cfg.flag_windows, scenario)
    prediction = predict(model, future)
    lower, upper = sample_intervals(model, future, n_samples=args.samples, level=level, seed=seed)

    seasonal_units = {}
    for name, vals in prediction.seasonal.items():
        seasonal_units[name] = vals * prediction.trend if prediction.mode == "multiplicative" else vals
    weekly = seasonal_units.get("weekly", np.zeros(horizon))
    yearly = seasonal_units.get("yearly", np.zeros(horizon))
    extra = sum(
        (v for n, v in seasonal_units.items() if n not in ("weekly", "yearly")), np.zeros(horizon)
    )
    yearly = yearly + extra

    out_dir.mkdir(parents=True, exist_ok=True)
    daily_path = out_dir / "forecast_daily.csv"
    lines = [DAILY_HEADER]
    for i, d in enumerate(future.dates):
        lines.append(
            f"{d.isoformat()},{sku},{_fmt(prediction.yhat[i])},{_fmt(lower[i])},{_fmt(upper[i])},"
            f"{_fmt(prediction.trend[i])},{_fmt(weekly[i])},{_fmt(yearly[i])},"
            f"{_fmt(prediction.holidays[i])},{_fmt(prediction.regressors[i])}"
        )
    daily_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    monthly = monthly_totals(list(future.dates), prediction.yhat, sku, cutoff, lower, upper)
    monthly_path = out_dir / "forecast_monthly.csv"
    _write_monthly(monthly_path, monthly)
    print(f"forecast {sku}: cutoff {cutoff.isoformat()}, horizon {horizon} days, level {level}")
    print(f"wrote {daily_path} and {monthly_path}")
    return 0


def _parse_daily_forecast(data: bytes):
    lines = data.decode("utf-8").splitlines()
    if not lines or lines[0] != DAILY_HEADER:
        raise ValidationError(f"forecast file must start with header {DAILY_HEADER!r}")
    dates, skus, yhat = [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 10:
            raise ValidationError(f"forecast file line {lineno}: expected 10 fields, got {len(parts)}")
        dates.append(date.fromisoformat(parts[0]))
        skus.append(parts[1])
        yhat.append(float(parts[2]))
    if not dates:
        raise ValidationError("forecast file has no rows")
    if len(set(skus)) != 1:
        raise ValidationError(f"forecast file mixes skus: {sorted(set(skus))}")
    return skus[0], dates, np.asarray(yhat)


def _cmd_evaluate(args) -> int:
    sku, f_dates, f_yhat = _parse_daily_forecast(_read(args.forecast, "forecast"))
    observations = parse_sales(_read(args.actuals, "actuals"))
    series_by_sku = align_series(observations)
    series = _series_for(series_by_sku, sku)

    cutoff = f_dates[0] - timedelta(days=1)
    actual_by_date = {d: v for d, v in zip(series.dates(), series.values)}
    common = [i for i, d in enumerate(f_dates) if d in actual_by_date]
    if not common:
        raise ValidationError("actuals do not cover any forecast dates")
    dates = [f_dates[i] for i in common]
    yhat = f_yhat[common]
    actual = np.array([actual_by_date[d] for d in dates])

    pred_rows = {r.month_diff: r.sales for r in monthly_totals(dates, yhat, sku, cutoff)}
    act_rows = {r.month_diff: r.sales for r in monthly_totals(dates, actual, sku, cutoff)}

    reports: list[EvalReport] = []
    for h in (1, 2, 3):
        if h not in pred_rows or h not in act_rows:
            continue
        months = [m for m in range(1, h + 1) if m in pred_rows and m in act_rows]
        pm = point_metrics([act_rows[m] for m in months], [pred_rows[m] for m in months])
        da_months = ([0] if 0 in pred_rows and 0 in act_rows else []) + months
        da = None
        if len(da_months) >= 2:
            da = directional_accuracy([act_rows[m] for m in da_months], [pred_rows[m] for m in da_months])
        reports.append(
            EvalReport(
                sku=sku,
                horizon_months=h,
                mape=pm.mape,
                rmse=pm.rmse,
                mae=pm.mae,
                directional_accuracy=da,
                n_points=pm.n_points,
                mape_excluded=pm.mape_excluded,
            )
        )
    if not reports:
        raise ValidationError("no complete month buckets shared by forecast and actuals")

    lines = [METRICS_HEADER]
    for r in reports:
        mape = "" if r.mape is None else _fmt(r.mape)
        da = "" if r.directional_accuracy is None else _fmt(r.directional_accuracy)
        lines.append(f"{r.sku},{r.horizon_months},{mape},{_fmt(r.rmse)},{_fmt(r.mae)},{da},{r.n_points},{r.mape_excluded}")
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    for r in reports:
        mape_txt = "n/a" if r.mape is None else f"{100 * r.mape:.2f}%"
        print(f"{sku} {r.horizon_months}-month: MAPE {mape_txt} RMSE {r.rmse:.2f} MAE {r.mae:.2f}")
    print(f"wrote {args.out}")
    return 0


def _wave(raw) -> Wave:
    return Wave(float(raw[0]), int(raw[1]), float(raw[2]))


def _cmd_synth(args) -> int:
    raw = json.loads(_read(args.spec, "synth spec").decode("utf-8"))
    kwargs = {}
    simple = {
        "sku": str,
        "span_days": int,
        "base_level": float,
        "slope_per_day": float,
        "covid_beta_cases": float,
        "covid_beta_deaths": float,
        "noise_sigma": float,
        "mode": str,
        "seed": int,
    }
    for key, cast in simple.items():
        if key in raw:
            kwargs[key] = cast(raw[key])
    if "start" in raw:
        kwargs["start"] = date.fromisoformat(raw["start"])
    if "covid_end" in raw:
        kwargs["covid_end"] = date.fromisoformat(raw["covid_end"])
    for key in ("weekly_coeffs", "yearly_coeffs"):
        if key in raw:
            kwargs[key] = tuple(float(v) for v in raw[key])
    if "trend_changes" in raw:
        kwargs["trend_changes"] = tuple((int(d), float(v)) for d, v in raw["trend_changes"])
    for key in ("case_waves", "death_waves"):
        if key in raw:
            kwargs[key] = tuple(_wave(w) for w in raw[key])
    if "holidays" in raw:
        from .ingest import HolidaySpec

        kwargs["holidays"] = tuple(
            (HolidaySpec(h["name"], date.fromisoformat(h["date"]), int(h["lower_window"]), int(h["upper_window"])), float(h["effect"]))
            for h in raw["holidays"]
        )
    result = generate(SynthSpec(**kwargs))
    result.write(args.out)
    print(f"wrote sales.csv, covid.csv, holidays.csv, truth.txt to {args.out}")
    return 0


def _cmd_report(args) -> int:
    lines = _read(args.monthly, "monthly forecast").decode("utf-8").splitlines()
    if not lines or lines[0] != MONTHLY_HEADER:
        raise ValidationError(f"monthly file must start with header {MONTHLY_HEADER!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 8:
            raise ValidationError(f"monthly file line {lineno}: expected 8 fields")
        rows.append(
            MonthlyForecast(
                sku=parts[0],
                year=int(parts[1]),
                month=int(parts[2]),
                month_diff=int(parts[3]),
                sales=float(parts[4]),
                lower=float(parts[5]),
                upper=float(parts[6]),
                days_covered=int(parts[7]),
            )
        )
    if not rows:
        raise ValidationError("monthly file has no rows")

    print(f"{'sku':<14} {'month':<8} {'m+':>3} {'sales':>12} {'lower':>12} {'upper':>12} {'days':>5}")
    print("-" * 72)
    by_sku: dict[str, list[MonthlyForecast]] = {}
    for r in rows:
        by_sku.setdefault(r.sku, []).append(r)
    for sku in sorted(by_sku):
        total = 0.0
        for r in sorted(by_sku[sku], key=lambda x: x.month_diff):
            partial = "*" if r.days_covered < 28 else " "
            print(
                f"{r.sku:<14} {r.year}-{r.month:02d}  {r.month_diff:>3} {r.sales:>12.1f} {r.lower:>12.1f} "
                f"{r.upper:>12.1f} {r.days_covered:>4}{partial}"
            )
            total += r.sales
        print(f"{sku:<14} {'total':<8} {'':>3} {total:>12.1f}")
        print("-" * 72)
    print("* partial month (fewer than 28 days covered)")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="demandcast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file with default paths and settings")

    p = sub.add_parser("validate", help="parse and validate the input files")
    add_common(p)
    p.add_argument("--sales")
    p.add_argument("--covid")
    p.add_argument("--holidays")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("tune", help="per-SKU hyperparameter search with checkpointing")
    add_common(p)
    p.add_argument("--sku", required=True)
    p.add_argument("--sales")
    p.add_argument("--covid")
    p.add_argument("--holidays")
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--checkpoint")
    p.add_argument("--out", help="output directory for best-params and trial log")
    p.add_argument("--initial-train-days", type=int, dest="initial_train_days")
    p.add_argument("--period-days", type=int, dest="period_days")
    p.add_argument("--horizon-days", type=int, dest="horizon_days")
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("fit", help="fit a model and write the model file")
    add_common(p)
    p.add_argument("--sku", required=True)
    p.add_argument("--sales")
    p.add_argument("--covid")
    p.add_argument("--holidays")
    p.add_argument("--params", help="hyperparameters JSON file (e.g. tune output)")
    p.add_argument("--preset", help=f"named preset ({', '.join(sorted(SKU_PRESETS))})")
    p.add_argument("--cutoff", help="train only on data through this date (YYYY-MM-DD)")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("forecast", help="forecast from a fitted model")
    add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--sku", help="defaults to the model's sku")
    p.add_argument("--sales")
    p.add_argument("--covid")
    p.add_argument("--scenario", help="future covid override file")
    p.add_argument("--horizon", type=int)
    p.add_argument("--cutoff", help="forecast from this date (default: end of sales history)")
    p.add_argument("--level", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=1000, help="Monte-Carlo samples for intervals")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("evaluate", help="score a daily forecast against actuals")
    add_common(p)
    p.add_argument("--forecast", required=True, help="daily forecast csv")
    p.add_argument("--actuals", required=True, help="sales csv with the realized demand")
    p.add_argument("--out", required=True, help="metrics report csv to write")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    add_common(p)
    p.add_argument("--spec", required=True, help="synth spec JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("report", help="human-readable monthly planning table")
    add_common(p)
    p.add_argument("--monthly", required=True, help="monthly forecast csv")
    p.set_defaults(func=_cmd_report)

    return parser


def execute(argv: list[str]) -> int:
    """Run one CLI command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValidationError, ConfigError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports and exits
        logger.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
