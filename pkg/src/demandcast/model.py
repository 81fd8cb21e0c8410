"""Structural demand forecaster.

The model decomposes daily demand into a piecewise-linear trend with
L1-penalized slope changes, Fourier seasonalities, holiday effects and linear
external regressors:

    additive:        y = g(t) + s(t) + h(t) + sum_i beta_i x_i(t) + noise
    multiplicative:  y = g(t) * (1 + s(t)) + h(t) + sum_i beta_i x_i(t) + noise

Fitting minimizes squared error on max-scaled targets plus an L1 penalty
(weight 1/changepoint_prior_scale) on the trend slope changes and L2
penalties (weight 1/(2*scale^2)) on seasonal, holiday and regressor
coefficients. The multiplicative form is solved by alternating exact
minimization of the trend/holiday/regressor block and the seasonal block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import NonConvergenceError
from .features import REGRESSOR_NAMES, DesignMatrix
from .ingest import HolidaySpec

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"

# Search-range bounds for each tunable knob; enforced when tuning, relaxable
# for direct fits.
SEARCH_BOUNDS = {
    "changepoint_prior_scale": (0.001, 0.5),
    "seasonality_prior_scale": (1.0, 50.0),
    "holidays_prior_scale": (1.0, 25.0),
    "changepoint_range": (0.8, 0.97),
    "n_changepoints": (15, 55),
}

DEFAULT_REGRESSOR_SIGMA = 10.0

MODEL_FILE_VERSION = 1


@dataclass(frozen=True)
class Hyperparameters:
    """The six knobs governing trend, seasonality and holiday flexibility."""

    changepoint_prior_scale: float = 0.05
    seasonality_prior_scale: float = 10.0
    holidays_prior_scale: float = 10.0
    seasonality_mode: str = ADDITIVE
    changepoint_range: float = 0.8
    n_changepoints: int = 25

    def __post_init__(self) -> None:
        if self.seasonality_mode not in (ADDITIVE, MULTIPLICATIVE):
            raise ValueError(f"seasonality_mode must be additive or multiplicative, got {self.seasonality_mode!r}")
        for name in ("changepoint_prior_scale", "seasonality_prior_scale", "holidays_prior_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0 < self.changepoint_range <= 1:
            raise ValueError(f"changepoint_range must be in (0, 1], got {self.changepoint_range}")
        if self.n_changepoints < 1:
            raise ValueError(f"n_changepoints must be >= 1, got {self.n_changepoints}")

    def check_search_bounds(self) -> None:
        """Raise if any knob lies outside its tuning search range."""
        for name, (lo, hi) in SEARCH_BOUNDS.items():
            v = getattr(self, name)
            if not lo <= v <= hi:
                raise ValueError(f"{name}={v} outside search range [{lo}, {hi}]")

    def to_dict(self) -> dict:
        return {
            "changepoint_prior_scale": self.changepoint_prior_scale,
            "seasonality_prior_scale": self.seasonality_prior_scale,
            "holidays_prior_scale": self.holidays_prior_scale,
            "seasonality_mode": self.seasonality_mode,
            "changepoint_range": self.changepoint_range,
            "n_changepoints": self.n_changepoints,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Hyperparameters":
        return cls(
            changepoint_prior_scale=float(d["changepoint_prior_scale"]),
            seasonality_prior_scale=float(d["seasonality_prior_scale"]),
            holidays_prior_scale=float(d["holidays_prior_scale"]),
            seasonality_mode=str(d["seasonality_mode"]),
            changepoint_range=float(d["changepoint_range"]),
            n_changepoints=int(d["n_changepoints"]),
        )


# Per-SKU presets tuned for the four mattress height variants. The 12-inch
# variant ships with a second, much stiffer trend prior that suits its stable
# demand; see README for when to prefer it.
SKU_PRESETS: dict[str, Hyperparameters] = {
    "10-inch": Hyperparameters(0.2, 50.0, 25.0, MULTIPLICATIVE, 0.97, 55),
    "12-inch": Hyperparameters(0.12, 40.0, 25.0, MULTIPLICATIVE, 0.92, 48),
    "12-inch-stable": Hyperparameters(0.01, 40.0, 25.0, MULTIPLICATIVE, 0.92, 48),
}


@dataclass(frozen=True)
class Seasonality:
    """One Fourier seasonality: a period in days and its expansion order."""

    name: str
    period_days: float
    fourier_order: int


DEFAULT_SEASONALITIES = (Seasonality("weekly", 7.0, 3), Seasonality("yearly", 365.25, 10))


@dataclass(frozen=True)
class ChangepointGrid:
    """Candidate trend-change times on the normalized training axis [0, 1]."""

    locations: np.ndarray

    def __post_init__(self) -> None:
        locations = np.asarray(self.locations, dtype=float)
        if locations.ndim != 1 or np.any(np.diff(locations) <= 0) or np.any(locations <= 0):
            raise ValueError("changepoint locations must be strictly increasing and > 0")
        locations.flags.writeable = False
        object.__setattr__(self, "locations", locations)

    def __len__(self) -> int:
        return int(self.locations.size)


def place_changepoints(n: int, range_frac: float, span: int) -> ChangepointGrid:
    """``n`` candidate changepoints uniformly spaced over the first
    ``range_frac`` of the normalized time axis, excluding 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < range_frac <= 1:
        raise ValueError(f"range_frac must be in (0, 1], got {range_frac}")
    if span < 2:
        raise ValueError(f"span must cover at least 2 days, got {span}")
    return ChangepointGrid(range_frac * np.arange(1, n + 1) / (n + 1))


def trend_value(t, k: float, m: float, grid: ChangepointGrid, deltas) -> np.ndarray:
    """Piecewise-linear trend at normalized time(s) ``t``.

    Continuity at each changepoint is built in: a slope change of delta_j at
    s_j contributes delta_j * max(t - s_j, 0).
    """
    t = np.asarray(t, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape != (len(grid),):
        raise ValueError(f"deltas length {deltas.shape} does not match {len(grid)} changepoints")
    hinge = np.maximum(t[..., None] - grid.locations, 0.0)
    return k * t + m + hinge @ deltas


def fourier_basis(t, period: float, order: int) -> np.ndarray:
    """[sin(2*pi*j*t/period), cos(2*pi*j*t/period)] for j = 1..order,
    stacked along the last axis."""
    if period <= 0:
        raise ValueError(f"period must be > 0, got {period}")
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    t = np.asarray(t, dtype=float)
    angles = 2.0 * np.pi * np.arange(1, order + 1) * t[..., None] / period
    out = np.empty(t.shape + (2 * order,))
    out[..., 0::2] = np.sin(angles)
    out[..., 1::2] = np.cos(angles)
    return out


def holiday_matrix(dates: Sequence[date], holidays: Sequence[HolidaySpec]) -> tuple[tuple[str, ...], np.ndarray]:
    """Per-date indicator columns, one per holiday name (sorted), pooling all
    occurrences and windows of that name."""
    names = tuple(sorted({h.name for h in holidays}))
    covered: dict[str, set[date]] = {name: set() for name in names}
    for h in holidays:
        for off in range(h.lower_window, h.upper_window + 1):
            covered[h.name].add(h.date + timedelta(days=off))
    out = np.zeros((len(dates), len(names)))
    for j, name in enumerate(names):
        days = covered[name]
        for i, d in enumerate(dates):
            if d in days:
                out[i, j] = 1.0
    return names, out


@dataclass(frozen=True)
class FittedModel:
    """All estimated parameters of one fit, on the scaled axis.

    Predictions multiply back by ``y_scale``. ``gammas`` keep the trend
    continuous at each changepoint: gamma_j = -s_j * delta_j.
    """

    sku: str
    y_scale: float
    k: float
    m: float
    deltas: np.ndarray
    seasonal_coeffs: dict[str, np.ndarray]
    holiday_coeffs: dict[str, float]
    regressor_coeffs: dict[str, float]
    residual_sigma: float
    mode: str
    changepoints: ChangepointGrid
    train_start: date
    train_end: date
    seasonalities: tuple[Seasonality, ...]
    holidays: tuple[HolidaySpec, ...]
    objective_trace: tuple[float, ...] = field(default=(), repr=False)

    @property
    def gammas(self) -> np.ndarray:
        return -self.changepoints.locations * self.deltas

    def t_norm(self, dates: Sequence[date]) -> np.ndarray:
        """Normalized time: 0 at train start, 1 at train end, >1 beyond."""
        span = (self.train_end - self.train_start).days
        return np.array([(d - self.train_start).days / span for d in dates])

    def day_index(self, dates: Sequence[date]) -> np.ndarray:
        return np.array([(d - self.train_start).days for d in dates], dtype=float)


@dataclass(frozen=True)
class Prediction:
    """Point forecast with named components, on the original demand scale.

    In additive mode ``yhat = trend + sum(seasonal) + holidays + regressors``;
    in multiplicative mode the seasonal components are dimensionless fractions
    and ``yhat = trend * (1 + sum(seasonal)) + holidays + regressors``.
    """

    dates: tuple[date, ...]
    yhat: np.ndarray
    trend: np.ndarray
    seasonal: dict[str, np.ndarray]
    holidays: np.ndarray
    regressors: np.ndarray
    mode: str


def _soft_threshold(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _cd_l1(G: np.ndarray, b: np.ndarray, l1: np.ndarray, theta0: np.ndarray, tol: float, max_sweeps: int) -> np.ndarray:
    """Cyclic coordinate descent for min theta'G theta - 2 b'theta + sum l1|theta|.

    G must be PSD with the L2 weights already folded into its diagonal.
    Converges when no coordinate moves by more than ``tol`` in a sweep.
    """
    p = b.size
    theta = theta0.copy()
    diag = np.diag(G).copy()
    active = diag > 1e-12 * (np.abs(diag).max() + 1.0)
    theta[~active] = 0.0
    q = G @ theta
    for _ in range(max_sweeps):
        max_move = 0.0
        for j in range(p):
            if not active[j]:
                continue
            rho = b[j] - q[j] + diag[j] * theta[j]
            new = _soft_threshold(rho, 0.5 * l1[j]) / diag[j]
            move = new - theta[j]
            if move != 0.0:
                q += G[:, j] * move
                theta[j] = new
                max_move = max(max_move, abs(move))
        if max_move < tol:
            break
    return theta


def _solve_penalized_ls(
    X: np.ndarray,
    y: np.ndarray,
    l1: np.ndarray,
    l2: np.ndarray,
    theta0: np.ndarray | None = None,
    tol: float = 1e-10,
    max_sweeps: int = 50_000,
) -> np.ndarray:
    """Exact minimizer of ||y - X theta||^2 + sum l2 theta^2 + sum l1 |theta|.

    The quadratic-only coordinates are eliminated in closed form (Schur
    complement); coordinate descent then solves the reduced L1 problem, which
    yields the joint optimum of the full convex objective.
    """
    p = X.shape[1]
    is_l1 = l1 > 0
    if not np.any(is_l1):
        A = X.T @ X + np.diag(l2)
        return np.linalg.solve(A, X.T @ y)

    Q = ~is_l1
    Xq, Xl = X[:, Q], X[:, is_l1]
    A = Xq.T @ Xq + np.diag(l2[Q])
    C = Xq.T @ Xl
    Z = np.linalg.solve(A, np.column_stack([C, Xq.T @ y]))
    Zc, zy = Z[:, :-1], Z[:, -1]
    G = Xl.T @ Xl - C.T @ Zc + np.diag(l2[is_l1])
    G = 0.5 * (G + G.T)
    b = Xl.T @ y - C.T @ zy

    theta_l0 = theta0[is_l1] if theta0 is not None else np.zeros(int(is_l1.sum()))
    theta_l = _cd_l1(G, b, l1[is_l1], theta_l0, tol, max_sweeps)
    theta_q = zy - Zc @ theta_l

    theta = np.empty(p)
    theta[Q] = theta_q
    theta[is_l1] = theta_l
    return theta


@dataclass
class FitProblem:
    """Design blocks, penalty weights and objectives for one fit.

    Parameter packing: [k, m, deltas, seasonal coefficients (per configured
    seasonality, in order), holiday coefficients, regressor coefficients].
    Targets are already scaled by ``y_scale``.
    """

    dates: tuple[date, ...]
    y: np.ndarray
    y_scale: float
    mode: str
    grid: ChangepointGrid
    base: np.ndarray  # (n, 2) columns [t_norm, 1]
    hinges: np.ndarray  # (n, S) changepoint hinge columns
    seasonal_blocks: dict[str, np.ndarray]
    holiday_names: tuple[str, ...]
    holiday_block: np.ndarray
    regressor_names: tuple[str, ...]
    regressor_block: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    slices: dict[str, slice]

    @property
    def n_params(self) -> int:
        return self.l1.size

    def _seasonal_matrix(self) -> np.ndarray:
        blocks = list(self.seasonal_blocks.values())
        return np.hstack(blocks) if blocks else np.zeros((len(self.y), 0))

    def full_matrix(self) -> np.ndarray:
        return np.hstack(
            [self.base, self.hinges, self._seasonal_matrix(), self.holiday_block, self.regressor_block]
        )

    def split(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(trend params incl. deltas, seasonal, holiday, regressor) views."""
        s = self.slices
        trend = theta[: s["deltas"].stop]
        return trend, theta[s["seasonal"]], theta[s["holiday"]], theta[s["regressor"]]

    def components(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Scaled (trend g, seasonal total s, holiday h, regressor r) rows."""
        trend, seas, hol, reg = self.split(theta)
        g = self.base @ trend[:2] + self.hinges @ trend[2:]
        s = self._seasonal_matrix() @ seas
        h = self.holiday_block @ hol
        r = self.regressor_block @ reg
        return g, s, h, r

    def model_values(self, theta: np.ndarray) -> np.ndarray:
        g, s, h, r = self.components(theta)
        if self.mode == MULTIPLICATIVE:
            return g * (1.0 + s) + h + r
        return g + s + h + r

    def objective_smooth(self, theta: np.ndarray) -> float:
        """Squared error plus the L2 penalties (everything differentiable)."""
        resid = self.y - self.model_values(theta)
        return float(resid @ resid + self.l2 @ (theta**2))

    def gradient_smooth(self, theta: np.ndarray) -> np.ndarray:
        """Analytic gradient of ``objective_smooth``."""
        g, s, h, r = self.components(theta)
        grad = 2.0 * self.l2 * theta
        sl = self.slices
        if self.mode == MULTIPLICATIVE:
            resid = self.y - (g * (1.0 + s) + h + r)
            w = resid * (1.0 + s)
            grad[:2] += -2.0 * (self.base.T @ w)
            grad[sl["deltas"]] += -2.0 * (self.hinges.T @ w)
            grad[sl["seasonal"]] += -2.0 * (self._seasonal_matrix().T @ (resid * g))
        else:
            resid = self.y - (g + s + h + r)
            grad[:2] += -2.0 * (self.base.T @ resid)
            grad[sl["deltas"]] += -2.0 * (self.hinges.T @ resid)
            grad[sl["seasonal"]] += -2.0 * (self._seasonal_matrix().T @ resid)
        grad[sl["holiday"]] += -2.0 * (self.holiday_block.T @ resid)
        grad[sl["regressor"]] += -2.0 * (self.regressor_block.T @ resid)
        return grad

    def objective(self, theta: np.ndarray) -> float:
        return self.objective_smooth(theta) + float(self.l1 @ np.abs(theta))


def build_fit_problem(
    design: DesignMatrix,
    hp: Hyperparameters,
    holidays: Sequence[HolidaySpec] = (),
    seasonalities: Sequence[Seasonality] = DEFAULT_SEASONALITIES,
    regressor_sigma: float = DEFAULT_REGRESSOR_SIGMA,
) -> FitProblem:
    """Assemble the matrices and penalty weights for ``fit``."""
    if design.target is None:
        raise ValueError("design has no targets; cannot fit")
    dates = design.dates
    if len(dates) < 2:
        raise ValueError("need at least 2 distinct dates to fit")
    y = np.asarray(design.target, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("target contains non-finite values")
    unknown = set(design.columns) - set(REGRESSOR_NAMES)
    if unknown:
        raise ValueError(f"unknown regressor columns: {sorted(unknown)}")
    for name, col in design.columns.items():
        if not np.all(np.isfinite(col)):
            raise ValueError(f"regressor column {name!r} contains non-finite values")

    y_max = float(y.max())
    y_scale = y_max if y_max > 0 else 1.0

    span = (dates[-1] - dates[0]).days
    t_norm = np.array([(d - dates[0]).days / span for d in dates])
    day_idx = np.array([(d - dates[0]).days for d in dates], dtype=float)

    grid = place_changepoints(hp.n_changepoints, hp.changepoint_range, span + 1)
    base = np.column_stack([t_norm, np.ones(len(dates))])
    hinges = np.maximum(t_norm[:, None] - grid.locations, 0.0)

    seasonal_blocks = {s.name: fourier_basis(day_idx, s.period_days, s.fourier_order) for s in seasonalities}
    holiday_names, holiday_block = holiday_matrix(dates, holidays)
    regressor_names = tuple(n for n in REGRESSOR_NAMES if n in design.columns)
    regressor_block = (
        design.matrix(regressor_names) if regressor_names else np.zeros((len(dates), 0))
    )

    n_seasonal = sum(2 * s.fourier_order for s in seasonalities)
    s_cp = slice(2, 2 + len(grid))
    s_seas = slice(s_cp.stop, s_cp.stop + n_seasonal)
    s_hol = slice(s_seas.stop, s_seas.stop + len(holiday_names))
    s_reg = slice(s_hol.stop, s_hol.stop + len(regressor_names))
    p = s_reg.stop

    l1 = np.zeros(p)
    l1[s_cp] = 1.0 / hp.changepoint_prior_scale
    l2 = np.zeros(p)
    l2[s_seas] = 1.0 / (2.0 * hp.seasonality_prior_scale**2)
    l2[s_hol] = 1.0 / (2.0 * hp.holidays_prior_scale**2)
    l2[s_reg] = 1.0 / (2.0 * regressor_sigma**2)

    return FitProblem(
        dates=dates,
        y=y / y_scale,
        y_scale=y_scale,
        mode=hp.seasonality_mode,
        grid=grid,
        base=base,
        hinges=hinges,
        seasonal_blocks=seasonal_blocks,
        holiday_names=holiday_names,
        holiday_block=holiday_block,
        regressor_names=regressor_names,
        regressor_block=regressor_block,
        l1=l1,
        l2=l2,
        slices={"deltas": s_cp, "seasonal": s_seas, "holiday": s_hol, "regressor": s_reg},
    )


def _fit_additive(problem: FitProblem) -> tuple[np.ndarray, list[float]]:
    X = problem.full_matrix()
    theta = _solve_penalized_ls(X, problem.y, problem.l1, problem.l2)
    return theta, [problem.objective(theta)]


def _fit_multiplicative(
    problem: FitProblem, max_iter: int = 200, rel_tol: float = 1e-8
) -> tuple[np.ndarray, list[float]]:
    """Alternating minimization for the bilinear trend * (1 + seasonal) form.

    Each iteration solves (a) the trend/holiday/regressor block with the
    seasonal coefficients fixed (soft-threshold updates for the trend
    deltas), (b) the seasonal block -- jointly with the holiday/regressor
    coefficients, which alias seasonal shapes -- with the trend fixed, and
    (c) a damped joint Gauss-Newton step on the full parameter vector, which
    is near-exact for a bilinear model and stops the two-block scheme from
    crawling along its scale-degenerate valley. Every stage is accepted only
    if it does not increase the penalized objective, so the objective trace
    is non-increasing.
    """
    sl = problem.slices
    theta = np.zeros(problem.n_params)
    F = problem._seasonal_matrix()
    Xrest = np.hstack([problem.holiday_block, problem.regressor_block])
    keep_a = np.ones(problem.n_params, dtype=bool)
    keep_a[sl["seasonal"]] = False
    l1_a, l2_a = problem.l1[keep_a], problem.l2[keep_a]
    l2_b = np.concatenate([problem.l2[sl["seasonal"]], problem.l2[sl["holiday"]], problem.l2[sl["regressor"]]])
    n_seasonal = F.shape[1]
    n_holiday = len(problem.holiday_names)
    n_trend = 2 + len(problem.grid)

    trace: list[float] = []
    prev = np.inf
    for _ in range(max_iter):
        amplitude = 1.0 + F @ theta[sl["seasonal"]]
        Xa = np.hstack([problem.base * amplitude[:, None], problem.hinges * amplitude[:, None], Xrest])
        theta_a = _solve_penalized_ls(Xa, problem.y, l1_a, l2_a, theta0=theta[keep_a])
        theta[:n_trend] = theta_a[:n_trend]
        theta[sl["holiday"]] = theta_a[n_trend : n_trend + n_holiday]
        theta[sl["regressor"]] = theta_a[n_trend + n_holiday :]

        if n_seasonal:
            g = problem.base @ theta[:2] + problem.hinges @ theta[sl["deltas"]]
            Xb = np.hstack([F * g[:, None], Xrest])
            A = Xb.T @ Xb + np.diag(l2_b)
            theta_b = np.linalg.solve(A, Xb.T @ (problem.y - g))
            theta[sl["seasonal"]] = theta_b[:n_seasonal]
            theta[sl["holiday"]] = theta_b[n_seasonal : n_seasonal + n_holiday]
            theta[sl["regressor"]] = theta_b[n_seasonal + n_holiday :]

        obj = problem.objective(theta)

        g, s, h, r = problem.components(theta)
        X_lin = np.hstack(
            [
                problem.base * (1.0 + s)[:, None],
                problem.hinges * (1.0 + s)[:, None],
                F * g[:, None],
                problem.holiday_block,
                problem.regressor_block,
            ]
        )
        z = problem.y - (g * (1.0 + s) + h + r) + X_lin @ theta
        theta_gn = _solve_penalized_ls(X_lin, z, problem.l1, problem.l2, theta0=theta)
        step = theta_gn - theta
        alpha = 1.0
        for _ in range(8):
            candidate_obj = problem.objective(theta + alpha * step)
            if candidate_obj < obj:
                theta = theta + alpha * step
                obj = candidate_obj
                break
            alpha *= 0.5

        trace.append(obj)
        if np.isfinite(prev) and abs(prev - obj) <= rel_tol * max(abs(prev), 1e-12):
            return theta, trace
        prev = obj
    raise NonConvergenceError(
        f"multiplicative fit did not converge in {max_iter} iterations (objective {prev:.6e})",
        last_objective=float(prev),
    )


def fit(
    design: DesignMatrix,
    hp: Hyperparameters,
    holidays: Sequence[HolidaySpec] = (),
    seasonalities: Sequence[Seasonality] = DEFAULT_SEASONALITIES,
    regressor_sigma: float = DEFAULT_REGRESSOR_SIGMA,
    sku: str = "",
) -> FittedModel:
    """Fit the penalized decomposition to a training design with targets."""
    problem = build_fit_problem(design, hp, holidays, seasonalities, regressor_sigma)
    if hp.seasonality_mode == MULTIPLICATIVE:
        theta, trace = _fit_multiplicative(problem)
    else:
        theta, trace = _fit_additive(problem)

    resid = problem.y - problem.model_values(theta)
    sigma = max(float(np.std(resid)), 1e-12)

    sl = problem.slices
    offset = sl["seasonal"].start
    seasonal_coeffs: dict[str, np.ndarray] = {}
    for s in seasonalities:
        width = 2 * s.fourier_order
        seasonal_coeffs[s.name] = theta[offset : offset + width].copy()
        offset += width
    holiday_coeffs = {name: float(v) for name, v in zip(problem.holiday_names, theta[sl["holiday"]])}
    regressor_coeffs = {name: float(v) for name, v in zip(problem.regressor_names, theta[sl["regressor"]])}

    return FittedModel(
        sku=sku,
        y_scale=problem.y_scale,
        k=float(theta[0]),
        m=float(theta[1]),
        deltas=theta[sl["deltas"]].copy(),
        seasonal_coeffs=seasonal_coeffs,
        holiday_coeffs=holiday_coeffs,
        regressor_coeffs=regressor_coeffs,
        residual_sigma=sigma,
        mode=hp.seasonality_mode,
        changepoints=problem.grid,
        train_start=design.dates[0],
        train_end=design.dates[-1],
        seasonalities=tuple(seasonalities),
        holidays=tuple(holidays),
        objective_trace=tuple(trace),
    )


def _scaled_components(
    model: FittedModel, dates: Sequence[date], columns: dict[str, np.ndarray]
) -> tuple[np.ndarray, dict[str, np.ndarray], np.ndarray, np.ndarray]:
    """(trend, per-season seasonal, holiday, regressor) rows on the scaled axis."""
    t = model.t_norm(dates)
    day_idx = model.day_index(dates)
    g = trend_value(t, model.k, model.m, model.changepoints, model.deltas)
    seasonal = {
        s.name: fourier_basis(day_idx, s.period_days, s.fourier_order) @ model.seasonal_coeffs[s.name]
        for s in model.seasonalities
    }
    names, H = holiday_matrix(dates, model.holidays)
    h = H @ np.array([model.holiday_coeffs[n] for n in names]) if names else np.zeros(len(dates))
    r = np.zeros(len(dates))
    for name, beta in model.regressor_coeffs.items():
        if name not in columns:
            raise ValueError(f"missing regressor column: {name!r}")
        r = r + beta * np.asarray(columns[name], dtype=float)
    return g, seasonal, h, r


def predict(model: FittedModel, future: DesignMatrix) -> Prediction:
    """Point forecast with named components for the rows of ``future``.

    Components come back on the original demand scale, except that in
    multiplicative mode the seasonal components stay dimensionless (see
    ``Prediction``).
    """
    g, seasonal, h, r = _scaled_components(model, future.dates, future.columns)
    s_total = sum(seasonal.values(), np.zeros(len(future)))
    ys = model.y_scale
    if model.mode == MULTIPLICATIVE:
        trend = g * ys
        holiday = h * ys
        regressor = r * ys
        yhat = trend * (1.0 + s_total) + holiday + regressor
        seasonal_out = seasonal
    else:
        trend = g * ys
        holiday = h * ys
        regressor = r * ys
        seasonal_out = {name: vals * ys for name, vals in seasonal.items()}
        yhat = trend + sum(seasonal_out.values(), np.zeros(len(future))) + holiday + regressor
    return Prediction(
        dates=future.dates,
        yhat=yhat,
        trend=trend,
        seasonal=seasonal_out,
        holidays=holiday,
        regressors=regressor,
        mode=model.mode,
    )


def sample_intervals(
    model: FittedModel,
    future: DesignMatrix,
    n_samples: int = 1000,
    level: float = 0.8,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo (lower, upper) bounds per future date, original scale.

    Each sample perturbs the trend with slope changes at potential future
    changepoints -- occurring at the historical changepoint rate, with
    Laplace magnitudes scaled by the mean fitted |delta| -- and adds
    observation noise. Deterministic for a given seed.
    """
    if n_samples < 100:
        raise ValueError(f"n_samples must be >= 100, got {n_samples}")
    if not 0 < level < 1:
        raise ValueError(f"level must be in (0, 1), got {level}")

    g, seasonal, h, r = _scaled_components(model, future.dates, future.columns)
    s_total = sum(seasonal.values(), np.zeros(len(future)))
    if model.mode == MULTIPLICATIVE:
        yhat_scaled = g * (1.0 + s_total) + h + r
        trend_gain = 1.0 + s_total
    else:
        yhat_scaled = g + s_total + h + r
        trend_gain = np.ones(len(future))

    horizon = len(future)
    n_cp = len(model.changepoints)
    tau_hat = float(np.mean(np.abs(model.deltas))) if n_cp else 0.0
    span_days = (model.train_end - model.train_start).days + 1
    # Historical changepoint rate: n candidates spread over the leading
    # range_frac of the training span. The grid's top location is
    # range_frac * n / (n + 1), so recover range_frac from it.
    range_frac = float(np.max(model.changepoints.locations)) * (n_cp + 1) / n_cp
    change_prob = min(1.0, n_cp / (range_frac * span_days))

    rng = np.random.default_rng(seed)
    occurs = rng.random((n_samples, horizon)) < change_prob
    magnitudes = rng.laplace(0.0, tau_hat, (n_samples, horizon)) if tau_hat > 0 else np.zeros((n_samples, horizon))
    noise = rng.normal(0.0, model.residual_sigma, (n_samples, horizon))

    t_f = model.t_norm(future.dates)
    hinge = np.maximum(t_f[:, None] - t_f[None, :], 0.0)
    trend_shift = (occurs * magnitudes) @ hinge.T

    samples = yhat_scaled[None, :] + trend_shift * trend_gain[None, :] + noise
    q_lo, q_hi = (1.0 - level) / 2.0, (1.0 + level) / 2.0
    lower = np.quantile(samples, q_lo, axis=0) * model.y_scale
    upper = np.quantile(samples, q_hi, axis=0) * model.y_scale
    return lower, upper


def save_model(model: FittedModel, path: str | Path) -> None:
    """Write a fitted model as versioned, human-inspectable JSON."""
    payload = {
        "version": MODEL_FILE_VERSION,
        "sku": model.sku,
        "y_scale": model.y_scale,
        "k": model.k,
        "m": model.m,
        "deltas": model.deltas.tolist(),
        "changepoints": model.changepoints.locations.tolist(),
        "seasonal_coeffs": {k: v.tolist() for k, v in model.seasonal_coeffs.items()},
        "seasonalities": [
            {"name": s.name, "period_days": s.period_days, "fourier_order": s.fourier_order}
            for s in model.seasonalities
        ],
        "holiday_coeffs": model.holiday_coeffs,
        "holidays": [
            {"name": h.name, "date": h.date.isoformat(), "lower_window": h.lower_window, "upper_window": h.upper_window}
            for h in model.holidays
        ],
        "regressor_coeffs": model.regressor_coeffs,
        "residual_sigma": model.residual_sigma,
        "mode": model.mode,
        "train_start": model.train_start.isoformat(),
        "train_end": model.train_end.isoformat(),
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> FittedModel:
    """Read a model file written by ``save_model``."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    version = payload.get("version")
    if version != MODEL_FILE_VERSION:
        raise ValueError(f"unsupported model file version {version!r} (expected {MODEL_FILE_VERSION})")
    return FittedModel(
        sku=payload["sku"],
        y_scale=float(payload["y_scale"]),
        k=float(payload["k"]),
        m=float(payload["m"]),
        deltas=np.asarray(payload["deltas"], dtype=float),
        seasonal_coeffs={k: np.asarray(v, dtype=float) for k, v in payload["seasonal_coeffs"].items()},
        holiday_coeffs={k: float(v) for k, v in payload["holiday_coeffs"].items()},
        regressor_coeffs={k: float(v) for k, v in payload["regressor_coeffs"].items()},
        residual_sigma=float(payload["residual_sigma"]),
        mode=payload["mode"],
        changepoints=ChangepointGrid(np.asarray(payload["changepoints"], dtype=float)),
        train_start=date.fromisoformat(payload["train_start"]),
        train_end=date.fromisoformat(payload["train_end"]),
        seasonalities=tuple(
            Seasonality(s["name"], float(s["period_days"]), int(s["fourier_order"]))
            for s in payload["seasonalities"]
        ),
        holidays=tuple(
            HolidaySpec(h["name"], date.fromisoformat(h["date"]), int(h["lower_window"]), int(h["upper_window"]))
            for h in payload["holidays"]
        ),
    )
