#!/usr/bin/env python3
"""
singchain command-line interface

Subcommands run the shock-front chain, the vortex chain, the Hill analysis,
closed-form trajectories, track fitting, prediction and the acceptance
suites. Structured inputs are JSON, series are CSV.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np

from .configs.defaults import (
    FIT_BUDGET,
    FIT_RESTARTS,
    FIT_SEED,
    FLOQUET_GRID,
    HILL_TOL,
    HOPF_DEFAULT_ORDER,
    PREDICT_SAMPLES,
)
from .errors import ConfigurationError, PhysicalityError
from .models import (
    ApproxTrajectoryParams,
    FitBounds,
    FitResult,
    HillPotential,
    HopfChainState,
    RunConfig,
    TrajectoryParams,
    VortexInitialConditions,
    VortexSeries,
)
from .tools.fitting import fit_track, predict
from .tools.hill_floquet import classify_stability, floquet_solution, monodromy, potential_value
from .tools.hopf_chain import godunov_reference, integrate_hopf_chain, taylor_profile
from .tools.trajectory import circle_approx, exact_trajectory_table, position_first_approx
from .tools.verify import run_suite
from .tools.vortex_chain import amplitude_factor, integrate_vortex_chain, rotation_angle
from .utils.decorators import EXIT_CONFIGURATION, EXIT_NUMERICAL, EXIT_OK, EXIT_UNEXPECTED, handle_cli_errors
from .utils.env import configure_logging, get_atol, get_log_level_name, get_rtol, load_environment
from .utils.io import parse_float_list, read_json, read_track, write_csv, write_json, write_track

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ["t", "X1", "X2", "V1", "V2", "rho0"]


def common_options(default_out: str) -> Callable[[Callable[..., int]], Callable[..., int]]:
    """Attach --out, --tol and --seed to a subcommand."""

    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        func = click.option("--seed", type=int, default=None, help="Seed of random choices")(func)
        func = click.option("--tol", type=float, default=None, help="Relative tolerance")(func)
        func = click.option("--out", type=click.Path(dir_okay=False), default=default_out, show_default=True)(func)
        return func

    return decorator


def _run_config(
    subcommand: str,
    inputs: Sequence[Optional[str]],
    out: Optional[str],
    tol: Optional[float],
    seed: Optional[int],
    **options: Any,
) -> RunConfig:
    config = RunConfig(
        subcommand=subcommand,
        inputs=[path for path in inputs if path],
        out=out,
        rtol=tol if tol is not None else get_rtol(),
        atol=get_atol(),
        seed=seed,
        log_level=get_log_level_name(),
        options=options,
    )
    logger.debug(f"[Run Config] {config.model_dump_json()}")
    return config


def _pad_coefficients(values: Sequence[float], n: int, name: str) -> List[float]:
    """Zero-pad Taylor coefficients to n + 1 entries."""
    if not isinstance(n, int) or n < 0:
        raise ConfigurationError(f"closure order must be a non-negative integer, got {n}")
    if not values:
        raise ConfigurationError(f"{name} needs at least one coefficient")
    if len(values) > n + 1:
        raise ConfigurationError(f"{name} has {len(values)} coefficients, more than n + 1 = {n + 1}")
    return [float(v) for v in values] + [0.0] * (n + 1 - len(values))


@click.group()
def cli() -> None:
    """Singularity chains: shock fronts, vortex chains and typhoon-eye tracks."""
    configure_logging()


@cli.command()
@click.option("--init", "init_path", type=click.Path(dir_okay=False), help="JSON with phi, H, A and optional n")
@click.option("--H", "H_text", default=None, help="Background coefficients, e.g. 0.2,0.5")
@click.option("--A", "A_text", default=None, help="Jump coefficients, e.g. 1,-0.3")
@click.option(
    "--n", "order", type=int, default=None, help=f"Closure order [default: n from --init, else {HOPF_DEFAULT_ORDER}]"
)
@click.option("--t-end", type=float, required=True)
@click.option("--samples", type=int, default=201, show_default=True)
@click.option("--oracle-cells", type=int, default=None, help="Also track the front with a Godunov oracle")
@common_options("hopf.csv")
@handle_cli_errors
def hopf(
    init_path: Optional[str],
    H_text: Optional[str],
    A_text: Optional[str],
    order: Optional[int],
    t_end: float,
    samples: int,
    oracle_cells: Optional[int],
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Integrate the cut shock-front chain.

    Coefficients shorter than n + 1 are padded with zeros. With
    --oracle-cells, <out>_oracle.csv holds t, shock_pos and the chain front
    chain_phi at the same times.
    """
    config = _run_config(
        "hopf", [init_path], out, tol, seed, n=order, t_end=t_end, samples=samples, oracle_cells=oracle_cells
    )
    if init_path:
        data = read_json(init_path)
        H, A = data.get("H", []), data.get("A", [])
        phi = data.get("phi", 0.0)
        n = order if order is not None else data.get("n", HOPF_DEFAULT_ORDER)
    elif H_text and A_text:
        H, A = parse_float_list(H_text), parse_float_list(A_text)
        phi = 0.0
        n = order if order is not None else HOPF_DEFAULT_ORDER
    else:
        raise click.UsageError("give either --init or both --H and --A")
    state = HopfChainState(phi=phi, H=_pad_coefficients(H, n, "H"), A=_pad_coefficients(A, n, "A"), n=n)

    times = np.linspace(0.0, t_end, samples)
    series = integrate_hopf_chain(state, (0.0, t_end), tol=config.rtol, t_eval=times, atol=config.atol)
    write_csv(out, series.columns(), series.table())

    if oracle_cells:
        track = godunov_reference(taylor_profile(state), t_end, oracle_cells, t_eval=series.t)
        oracle_path = Path(out).with_name(f"{Path(out).stem}_oracle.csv")
        rows = np.column_stack([track.t, track.shock_pos, series.phi])
        write_csv(oracle_path, ["t", "shock_pos", "chain_phi"], rows)
    click.echo(f"wrote {len(series)} samples to {out} ({series.stop_reason})")
    return EXIT_OK


@cli.command()
@click.option("--init", "init_path", type=click.Path(dir_okay=False), required=True, help="Flat JSON initial data")
@click.option("--omega", type=float, default=None, help="Coriolis parameter, overrides the JSON value")
@click.option("--t-end", type=float, required=True)
@click.option("--samples", type=int, default=201, show_default=True)
@common_options("chain.csv")
@handle_cli_errors
def chain(
    init_path: str,
    omega: Optional[float],
    t_end: float,
    samples: int,
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Integrate the closed vortex chain."""
    config = _run_config("chain", [init_path], out, tol, seed, omega=omega, t_end=t_end, samples=samples)
    initial = VortexInitialConditions.model_validate(read_json(init_path))
    params = initial.params if omega is None else initial.params.model_copy(update={"omega": omega})
    Theta0 = initial.shape.Theta0 if initial.shape else 0.0

    times = np.linspace(0.0, t_end, samples)
    try:
        series = integrate_vortex_chain(
            initial.state, params, (0.0, t_end), tol=config.rtol, t_eval=times, atol=config.atol
        )
    except PhysicalityError as e:
        if e.partial is not None:
            partial = e.partial
            write_csv(out, partial.columns(), _chain_rows(partial, Theta0))
            logger.error(f"[Chain] wrote the {len(partial)} samples reached before rho0 vanished to {out}")
        raise

    write_csv(out, series.columns(), _chain_rows(series, Theta0))
    click.echo(f"wrote {len(series)} samples to {out}")
    return EXIT_OK


def _chain_rows(series: VortexSeries, Theta0: float) -> np.ndarray:
    return np.column_stack([series.t, series.y, rotation_angle(series, Theta0), amplitude_factor(series)])


def _hill_potential(params_path: Optional[str], omega0: Optional[float], beta_text: str) -> HillPotential:
    if params_path:
        return HillPotential.model_validate(read_json(params_path))
    if omega0 is None:
        raise click.UsageError("give either --params or --omega0")
    return HillPotential.from_reals(omega0, parse_float_list(beta_text))


@cli.command()
@click.option("--params", "params_path", type=click.Path(dir_okay=False), help="JSON with omega0 and beta0..2")
@click.option("--omega0", type=float, default=None)
@click.option("--beta", "beta_text", default="0,0,0,0,0,0", show_default=True, help="Six reals: re/im of beta0..2")
@click.option("--grid", type=int, default=FLOQUET_GRID, show_default=True)
@click.option("--floquet-out", type=click.Path(dir_okay=False), default=None, help="CSV of Phi, q, g, theta")
@common_options("hill.json")
@handle_cli_errors
def hill(
    params_path: Optional[str],
    omega0: Optional[float],
    beta_text: str,
    grid: int,
    floquet_out: Optional[str],
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Classify a Hill potential and compute its Floquet solution."""
    hill_tol = tol if tol is not None else HILL_TOL
    _run_config("hill", [params_path], out, hill_tol, seed, omega0=omega0, beta=beta_text, grid=grid)
    pot = _hill_potential(params_path, omega0, beta_text)

    report = classify_stability(monodromy(pot, hill_tol))
    summary: Dict[str, Any] = {
        "potential": pot,
        "stability": report.stability,
        "trace": report.trace,
        "det": report.det,
        "index": report.index,
        "quasi_momentum": None,
    }
    # The summary is written even when the Floquet solution does not exist
    write_json(out, summary)
    fl = floquet_solution(pot, hill_tol, grid)
    summary["quasi_momentum"] = fl.quasi_momentum
    write_json(out, summary)
    if floquet_out:
        rows = np.column_stack([fl.phi, potential_value(pot, fl.phi), fl.g, fl.theta])
        write_csv(floquet_out, ["Phi", "q", "g", "theta"], rows)
    click.echo(f"{report.stability}: trace={report.trace:.12g}, Omega={fl.quasi_momentum:.12g}")
    return EXIT_OK


@cli.command()
@click.option("--params", "params_path", type=click.Path(dir_okay=False), required=True)
@click.option("--t-start", type=float, default=0.0, show_default=True)
@click.option("--t-end", type=float, required=True)
@click.option("--samples", type=int, default=201, show_default=True)
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False), default=None, help="Circle JSON (approx)")
@common_options("trajectory.csv")
@handle_cli_errors
def trajectory(
    params_path: str,
    t_start: float,
    t_end: float,
    samples: int,
    summary_path: Optional[str],
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Evaluate a closed-form vortex trajectory.

    The parameter file carries "family": "exact" (default when "pot" is
    present) or "approx".
    """
    hill_tol = tol if tol is not None else HILL_TOL
    _run_config("trajectory", [params_path], out, hill_tol, seed, t_start=t_start, t_end=t_end, samples=samples)
    if not t_end >= t_start:
        raise click.UsageError(f"--t-end {t_end} precedes --t-start {t_start}")
    data = read_json(params_path)
    family = data.pop("family", "exact" if "pot" in data else "approx")
    times = np.linspace(t_start, t_end, samples)

    if family == "exact":
        par = TrajectoryParams.model_validate(data)
        fl = floquet_solution(par.pot, hill_tol)
        write_csv(out, TRAJECTORY_COLUMNS, exact_trajectory_table(times, par, fl))
    elif family == "approx":
        apar = ApproxTrajectoryParams.model_validate(data)
        x1, x2 = position_first_approx(times, apar)
        write_csv(out, ["t", "X1", "X2"], np.column_stack([times, x1, x2]))
        if summary_path:
            write_json(summary_path, circle_approx(apar))
    else:
        raise click.UsageError(f"unknown trajectory family '{family}'")
    click.echo(f"wrote {samples} samples to {out}")
    return EXIT_OK


@cli.command()
@click.option("--track", "track_path", type=click.Path(dir_okay=False), required=True, help="CSV t,x1,x2")
@click.option(
    "--family", type=click.Choice(["approx", "exact", "hopf-phi"]), default="approx", show_default=True
)
@click.option("--omega", type=float, default=None, help="Coriolis parameter (vortex families)")
@click.option("--bounds", "bounds_path", type=click.Path(dir_okay=False), default=None, help="FitBounds JSON")
@click.option("--budget", type=int, default=FIT_BUDGET, show_default=True)
@click.option("--restarts", type=int, default=FIT_RESTARTS, show_default=True)
@click.option("--workers", type=int, default=None, help="Threads for restarts (SINGCHAIN_WORKERS)")
@common_options("fit.json")
@handle_cli_errors
def fit(
    track_path: str,
    family: str,
    omega: Optional[float],
    bounds_path: Optional[str],
    budget: int,
    restarts: int,
    workers: Optional[int],
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Fit a trajectory family to an observed track."""
    _run_config(
        "fit",
        [track_path, bounds_path],
        out,
        tol,
        seed,
        family=family,
        omega=omega,
        budget=budget,
        restarts=restarts,
        workers=workers,
    )
    track = read_track(track_path)
    bounds = FitBounds.model_validate(read_json(bounds_path)) if bounds_path else None
    result = fit_track(
        track,
        family=family,
        omega=omega,
        bounds=bounds,
        budget=budget,
        seed=FIT_SEED if seed is None else seed,
        restarts=restarts,
        workers=workers,
    )
    write_json(out, result)
    click.echo(f"{family} fit: mse={result.mse:.6g}, converged={result.converged}")
    return EXIT_OK


@cli.command(name="predict")
@click.option("--fit", "fit_path", type=click.Path(dir_okay=False), required=True, help="FitResult JSON")
@click.option("--t-start", type=float, default=None, help="Defaults to the end of the fit window")
@click.option("--t-end", type=float, required=True)
@click.option("--samples", type=int, default=PREDICT_SAMPLES, show_default=True)
@click.option("--allow-unconverged", is_flag=True, help="Extrapolate even if the best restart did not converge")
@common_options("prediction.csv")
@handle_cli_errors
def predict_command(
    fit_path: str,
    t_start: Optional[float],
    t_end: float,
    samples: int,
    allow_unconverged: bool,
    out: str,
    tol: Optional[float],
    seed: Optional[int],
) -> int:
    """Extrapolate a fitted track forward.

    A fit whose best restart did not converge exits 3 unless
    --allow-unconverged is given.
    """
    _run_config(
        "predict",
        [fit_path],
        out,
        tol,
        seed,
        t_start=t_start,
        t_end=t_end,
        samples=samples,
        allow_unconverged=allow_unconverged,
    )
    result = FitResult.model_validate(read_json(fit_path))
    start = result.fit_window[1] if t_start is None else t_start
    track = predict(result, (start, t_end), samples, allow_unconverged=allow_unconverged)
    write_track(out, track)
    click.echo(f"wrote {len(track)} predicted samples to {out}")
    return EXIT_OK


@cli.command()
@click.argument("suite")
@common_options("verify.json")
@handle_cli_errors
def verify(suite: str, out: str, tol: Optional[float], seed: Optional[int]) -> int:
    """Run an acceptance suite: hill, chain, hopf, trajectory, fit or all."""
    _run_config("verify", [], out, tol, seed, suite=suite)
    report = run_suite(suite, seed=FIT_SEED if seed is None else seed)
    write_json(out, report)
    failed: List[str] = [item.id for item in report.criteria if not item.passed]
    if failed:
        click.echo(f"suite {suite}: failed {', '.join(failed)}", err=True)
        return EXIT_NUMERICAL
    click.echo(f"suite {suite}: all {len(report.criteria)} criteria passed")
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code."""
    load_environment()
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="singchain", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIGURATION
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_UNEXPECTED
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    """Entry point of the singchain script."""
    sys.exit(run())


if __name__ == "__main__":
    main()
