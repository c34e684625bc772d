"""Track fitting and forward prediction.

A fit minimizes the mean squared distance between an observed track and a
trajectory family. Each family splits its parameters into a nonlinear part,
searched by a bounded Nelder-Mead simplex from seeded random starts, and a
linear part solved by least squares inside every objective evaluation:

- approx: Omega0, mu, t0 nonlinear; A0..A4 linear
- exact: Omega0, beta, mu, t0, c nonlinear; X0, V0 linear
- hopf-phi: c1, c2 nonlinear; c3, c4, c5 linear
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from ..configs.defaults import (
    EXACT_FIT_GRID,
    EXACT_FIT_TOL,
    FIT_BUDGET,
    FIT_FATOL,
    FIT_RESTARTS,
    FIT_SEED,
    FIT_SIMPLEX_FRACTION,
    FIT_XATOL,
    PREDICT_SAMPLES,
)
from ..errors import FitFailureError, InvalidParameterError, TrackError
from ..models.base import FitFamily
from ..models.fitting import FitBounds, FitResult, Interval, ObservedTrack, RestartRecord
from ..models.hill import TWO_PI, HillPotential
from ..models.hopf import PhiClosedForm
from ..models.trajectory import ApproxTrajectoryParams, TrajectoryParams
from ..utils.env import get_workers
from .hill_floquet import floquet_solution
from .hopf_chain import phi_closed_form
from .trajectory import exact_position_complex, first_approx_basis, first_approx_complex

logger = logging.getLogger(__name__)

TrackModel = Callable[[np.ndarray], np.ndarray]

# Design: (offset, basis) with model = offset + basis @ coefficients
Design = Tuple[np.ndarray, np.ndarray]

AMPLITUDES = ("A0", "A1", "A2", "A3", "A4")
BETAS = ("beta0_re", "beta0_im", "beta1_re", "beta1_im", "beta2_re", "beta2_im")

NONLINEAR_NAMES: Dict[FitFamily, Tuple[str, ...]] = {
    FitFamily.APPROX: ("omega0", "mu", "t0"),
    FitFamily.EXACT: ("omega0", *BETAS, "mu", "t0", "c"),
    FitFamily.HOPF_PHI: ("c1", "c2"),
}


def track_mse(track: ObservedTrack, model: Union[TrackModel, FitResult]) -> float:
    """Mean over samples of (x1 - X1(t))^2 + (x2 - X2(t))^2.

    Args:
        track: Observed track with at least two samples
        model: Callable mapping times to complex positions X1 + i X2, or a
            FitResult evaluated with evaluate_fit

    Returns:
        Mean squared error

    Raises:
        TrackError: If the track has fewer than two samples

    See:
        docs/tools/fitting.md for reference
    """
    if len(track) < 2:
        raise TrackError(f"a track needs at least two samples, got {len(track)}")
    if isinstance(model, FitResult):
        predicted = evaluate_fit(model, track.t).positions()
    else:
        predicted = np.asarray(model(track.t), dtype=complex)
    return float(np.mean(np.abs(track.positions() - predicted) ** 2))


def _complex_params(params: Dict[str, float], name: str) -> complex:
    return complex(params[f"{name}_re"], params[f"{name}_im"])


def _split_complex(name: str, value: complex) -> Dict[str, float]:
    return {f"{name}_re": float(value.real), f"{name}_im": float(value.imag)}


def _approx_design(x: np.ndarray, t: np.ndarray, omega: float) -> Design:
    apar = ApproxTrajectoryParams(omega0=x[0], mu=x[1], t0=x[2], omega=omega)
    basis = first_approx_basis(t, apar)
    return np.zeros(t.size, dtype=complex), basis


def _exact_parts(x: np.ndarray, omega: float) -> Tuple[TrajectoryParams, HillPotential]:
    pot = HillPotential.from_reals(float(x[0]), [float(v) for v in x[1:7]])
    par = TrajectoryParams(pot=pot, c=float(x[9]), mu=float(x[7]), t0=float(x[8]), omega=omega)
    return par, pot


def _exact_design(x: np.ndarray, t: np.ndarray, omega: float) -> Design:
    par, pot = _exact_parts(x, omega)
    fl = floquet_solution(pot, tol=EXACT_FIT_TOL, grid_size=EXACT_FIT_GRID)
    offset = exact_position_complex(t, par, fl)
    basis = np.column_stack([np.ones(t.size), (1j / omega) * (np.exp(-1j * omega * t) - 1.0)])
    return offset, basis


def _hopf_design(x: np.ndarray, t: np.ndarray, omega: float) -> Design:
    c1, c2 = float(x[0]), float(x[1])
    if c1 == c2 or np.any(t + c1 < 0) or np.any(t + c2 <= 0):
        raise InvalidParameterError(f"shifts c1={c1}, c2={c2} leave the domain of the closed form")
    root = np.sqrt((t + c1) / (t + c2))
    basis = np.column_stack([root, t, np.ones(t.size)]).astype(complex)
    return np.zeros(t.size, dtype=complex), basis


DESIGNS: Dict[FitFamily, Callable[[np.ndarray, np.ndarray, float], Design]] = {
    FitFamily.APPROX: _approx_design,
    FitFamily.EXACT: _exact_design,
    FitFamily.HOPF_PHI: _hopf_design,
}


def _solve_linear(design: Design, z: np.ndarray, real: bool) -> Tuple[np.ndarray, float]:
    offset, basis = design
    residual = z - offset
    if real:
        coefficients = np.linalg.lstsq(basis.real, residual.real, rcond=None)[0].astype(complex)
    else:
        coefficients = np.linalg.lstsq(basis, residual, rcond=None)[0]
    fitted = offset + basis @ coefficients
    return coefficients, float(np.mean(np.abs(z - fitted) ** 2))


class _Objective:
    """MSE of one family as a function of its nonlinear parameters."""

    def __init__(self, family: FitFamily, track: ObservedTrack, omega: float) -> None:
        self.family = family
        self.t = np.asarray(track.t)
        self.z = track.positions()
        self.omega = omega
        self.real = family == FitFamily.HOPF_PHI

    def solve(self, x: np.ndarray) -> Tuple[np.ndarray, float]:
        design = DESIGNS[self.family](np.asarray(x, dtype=float), self.t, self.omega)
        return _solve_linear(design, self.z, self.real)

    def __call__(self, x: np.ndarray) -> float:
        try:
            _, mse = self.solve(x)
        except (ValueError, ArithmeticError, np.linalg.LinAlgError):
            return np.inf
        return mse if np.isfinite(mse) else np.inf


def _search_box(
    family: FitFamily, bounds: FitBounds, track: ObservedTrack, omega: float
) -> Tuple[List[Interval], List[Interval]]:
    """Bounds of the nonlinear parameters and the Omega0 branches to cycle."""
    if family == FitFamily.HOPF_PHI:
        t_first, t_last = track.window
        duration = max(t_last - t_first, 1e-12)
        shift = (-t_first + 1e-6 * duration, -t_first + bounds.shift_span * duration)
        return [shift, shift], []
    t0 = bounds.t0 if bounds.t0 is not None else (0.0, TWO_PI / omega)
    branches = list(bounds.omega0_branches)
    if family == FitFamily.APPROX:
        return [branches[0], bounds.mu, t0], branches
    return [branches[0], *([bounds.beta] * 6), bounds.mu, t0, bounds.c], branches


def _initial_simplex(start: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    step = FIT_SIMPLEX_FRACTION * (upper - lower)
    simplex = np.tile(start, (start.size + 1, 1))
    for i in range(start.size):
        forward = start[i] + step[i]
        simplex[i + 1, i] = forward if forward <= upper[i] else start[i] - step[i]
    return simplex


def _run_restart(
    index: int,
    objective: _Objective,
    box: List[Interval],
    branches: List[Interval],
    seed: int,
    budget: int,
) -> Tuple[RestartRecord, np.ndarray]:
    rng = np.random.default_rng([seed, index])
    limits = list(box)
    if branches:
        limits[0] = branches[index % len(branches)]
    lower = np.array([lo for lo, _ in limits], dtype=float)
    upper = np.array([hi for _, hi in limits], dtype=float)
    start = rng.uniform(lower, upper)

    result = minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=limits,
        options={
            "maxfev": budget,
            "xatol": FIT_XATOL,
            "fatol": FIT_FATOL,
            "initial_simplex": _initial_simplex(start, lower, upper),
        },
    )
    mse = float(result.fun) if np.isfinite(result.fun) else np.inf
    record = RestartRecord(
        index=index,
        start=[float(v) for v in start],
        mse=mse,
        nfev=int(result.nfev),
        converged=bool(result.success),
    )
    logger.debug(f"[Fit Track] restart {index}: mse={mse:.6g}, nfev={result.nfev}, converged={result.success}")
    return record, np.asarray(result.x, dtype=float)


def _assemble_params(family: FitFamily, x: np.ndarray, coefficients: np.ndarray) -> Dict[str, float]:
    params = {name: float(value) for name, value in zip(NONLINEAR_NAMES[family], x)}
    if family == FitFamily.APPROX:
        for name, value in zip(AMPLITUDES, coefficients):
            params.update(_split_complex(name, value))
    elif family == FitFamily.EXACT:
        params.update(_split_complex("X0", coefficients[0]))
        params.update(_split_complex("V0", coefficients[1]))
    else:
        params["c3"] = float(coefficients[0].real) * (params["c2"] - params["c1"])
        params["c4"] = float(coefficients[1].real)
        params["c5"] = float(coefficients[2].real)
    return params


def fit_track(
    track: ObservedTrack,
    family: Union[FitFamily, str] = FitFamily.APPROX,
    omega: Optional[float] = None,
    bounds: Optional[FitBounds] = None,
    budget: int = FIT_BUDGET,
    seed: int = FIT_SEED,
    restarts: int = FIT_RESTARTS,
    workers: Optional[int] = None,
) -> FitResult:
    """Fit a trajectory family to an observed track.

    Args:
        track: Observed track with at least two samples
        family: approx, exact or hopf-phi
        omega: Coriolis parameter, required by the vortex families
        bounds: Search box of the nonlinear parameters
        budget: Objective evaluations allowed per restart
        seed: Seed of the restart sampler
        restarts: Number of simplex restarts
        workers: Threads running restarts; defaults to SINGCHAIN_WORKERS

    Returns:
        FitResult of the best restart, ordered by (mse, restart index)

    Raises:
        TrackError: If the track has fewer than two samples
        InvalidParameterError: For a missing omega or non-positive budget
        FitFailureError: If no restart produced a finite MSE

    See:
        docs/tools/fitting.md for reference
    """
    family = FitFamily(family)
    bounds = bounds or FitBounds()
    if len(track) < 2:
        raise TrackError(f"a track needs at least two samples, got {len(track)}")
    if budget <= 0 or restarts <= 0:
        raise InvalidParameterError(f"budget and restarts must be positive, got {budget} and {restarts}")
    if family == FitFamily.HOPF_PHI:
        omega = None
    elif omega is None or not omega > 0:
        raise InvalidParameterError(f"the {family.value} family needs a positive omega, got {omega}")

    objective = _Objective(family, track, omega or 0.0)
    box, branches = _search_box(family, bounds, track, omega or 0.0)
    workers = workers or get_workers()
    logger.info(
        f"[Fit Track] family={family.value}, samples={len(track)}, restarts={restarts}, "
        f"budget={budget}, seed={seed}, workers={workers}"
    )

    def run(index: int) -> Tuple[RestartRecord, np.ndarray]:
        return _run_restart(index, objective, box, branches, seed, budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    else:
        outcomes = [run(index) for index in range(restarts)]

    records = [record for record, _ in outcomes]
    best_record, best_x = min(outcomes, key=lambda item: (item[0].mse, item[0].index))
    if not np.isfinite(best_record.mse):
        raise FitFailureError(f"all {restarts} restarts failed to evaluate the {family.value} family")

    coefficients, mse = objective.solve(best_x)
    if not best_record.converged:
        logger.warning(f"[Fit Track] best restart {best_record.index} stopped on the evaluation budget")
    result = FitResult(
        family=family,
        omega=omega,
        params=_assemble_params(family, best_x, coefficients),
        mse=mse,
        n_restarts_used=restarts,
        converged=best_record.converged,
        seed=seed,
        budget=budget,
        fit_window=track.window,
        restarts=records,
    )
    logger.info(f"[Fit Track] best restart {best_record.index}: mse={mse:.6g}")
    return result


def family_model(result: FitResult) -> TrackModel:
    """Callable evaluating the fitted family at arbitrary times.

    Raises:
        ConfigurationError: If the parameters violate the family invariants
        NumericalError: If the exact family's potential is no longer stable

    See:
        docs/tools/fitting.md for reference
    """
    p = result.params
    family = FitFamily(result.family)
    if family == FitFamily.HOPF_PHI:
        closed = PhiClosedForm(c1=p["c1"], c2=p["c2"], c3=p["c3"], c4=p["c4"], c5=p["c5"])
        return lambda t: np.asarray(phi_closed_form(closed, t), dtype=float).astype(complex)

    omega = float(result.omega or 0.0)
    if family == FitFamily.APPROX:
        apar = ApproxTrajectoryParams(
            omega0=p["omega0"],
            mu=p["mu"],
            t0=p["t0"],
            omega=omega,
            **{name: _complex_params(p, name) for name in AMPLITUDES},
        )
        return lambda t: first_approx_complex(t, apar)

    par, pot = _exact_parts(np.array([p[name] for name in NONLINEAR_NAMES[FitFamily.EXACT]]), omega)
    par = par.model_copy(update={"X0": _complex_params(p, "X0"), "V0": _complex_params(p, "V0")})
    fl = floquet_solution(pot, tol=EXACT_FIT_TOL, grid_size=EXACT_FIT_GRID)
    return lambda t: exact_position_complex(t, par, fl)


def evaluate_fit(result: FitResult, times: Sequence[float]) -> ObservedTrack:
    """Evaluate a fitted family at the given times, inside or outside the window.

    Args:
        result: Fit result
        times: Strictly increasing times

    Returns:
        ObservedTrack of model positions

    See:
        docs/tools/fitting.md for reference
    """
    t = np.asarray(times, dtype=float)
    X = np.asarray(family_model(result)(t), dtype=complex)
    return ObservedTrack(t=t, x1=X.real, x2=X.imag)


def predict(
    result: FitResult, t_range: Interval, samples: int = PREDICT_SAMPLES, allow_unconverged: bool = False
) -> ObservedTrack:
    """Extrapolate a fit forward from the end of its window.

    Args:
        result: Fit result
        t_range: (t_start, t_end) with fit-window end <= t_start <= t_end
        samples: Number of evenly spaced prediction times
        allow_unconverged: Extrapolate a non-converged fit with a warning instead of failing

    Returns:
        ObservedTrack of predicted positions

    Raises:
        InvalidParameterError: If t_range starts before the fit window ends
        FitFailureError: If the fit did not converge and allow_unconverged is False

    See:
        docs/tools/fitting.md for reference
    """
    t_start, t_end = float(t_range[0]), float(t_range[1])
    window_end = result.fit_window[1]
    if t_start < window_end:
        raise InvalidParameterError(f"prediction starts at {t_start}, before the fit window ends at {window_end}")
    if t_end < t_start or samples < 1:
        raise InvalidParameterError(f"invalid prediction range ({t_start}, {t_end}) with {samples} samples")
    if not result.converged:
        if not allow_unconverged:
            raise FitFailureError("the best restart of this fit did not converge; refit with a larger budget")
        logger.warning("[Predict] extrapolating a fit whose best restart did not converge")
    count = 1 if t_end == t_start else samples
    track = evaluate_fit(result, np.linspace(t_start, t_end, count))
    logger.info(f"[Predict] {len(track)} samples on [{t_start:.6g}, {t_end:.6g}]")
    return track
