"""Acceptance suites.

Every suite is a list of checks; a check measures one or more criteria and
returns (id, name, value, threshold, passed) tuples. Random cases are drawn
from a generator seeded by the caller, so a report is reproducible.
"""

import logging
import time
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..configs.defaults import FIT_RESTARTS, FIT_SEED
from ..errors import NumericalError, PhysicalityError, UnknownSuiteError
from ..models.base import RotationSense, StabilityClass
from ..models.fitting import ObservedTrack
from ..models.hill import TWO_PI, FloquetSolution, HillPotential
from ..models.hopf import HopfChainState
from ..models.trajectory import ApproxTrajectoryParams, TrajectoryParams
from ..models.verify import CriterionResult, VerifyReport
from ..models.vortex import CHAIN_FIELDS, PhysicalParams, VortexChainState
from .fitting import evaluate_fit, fit_track
from .hill_floquet import classify_stability, floquet_solution, monodromy
from .hopf_chain import godunov_reference, integrate_hopf_chain, taylor_profile
from .trajectory import (
    chain_consistency_residual,
    circle_approx,
    position_first_approx,
    position_of_time,
    velocity_of_time,
)
from .vortex_chain import amplitude_factor, integrate_vortex_chain, riccati_residual

logger = logging.getLogger(__name__)

Measurement = Tuple[str, str, Optional[float], float, bool]
Check = Callable[[np.random.Generator], List[Measurement]]

# Tighter than the chain defaults: the identities are checked near 1e-8
VERIFY_RTOL = 1e-11
VERIFY_ATOL = 1e-13


def _below(key: str, name: str, value: float, threshold: float) -> Measurement:
    return (key, name, float(value), threshold, bool(value <= threshold))


def _random_stable_potential(rng: np.random.Generator, beta_max: float) -> HillPotential:
    for _ in range(200):
        omega0 = float(rng.choice([rng.uniform(0.3, 0.45), rng.uniform(0.55, 0.7)]))
        betas = rng.uniform(-1.0, 1.0, 6)
        betas *= beta_max * rng.uniform(0.0, 1.0) / max(float(np.linalg.norm(betas)), 1e-300)
        pot = HillPotential.from_reals(omega0, list(betas))
        if classify_stability(monodromy(pot)).stability == StabilityClass.STRONGLY_STABLE:
            return pot
    raise NumericalError("no strongly stable potential found in 200 draws")


def check_hill_constant(rng: np.random.Generator) -> List[Measurement]:
    worst_omega = worst_g = worst_trace = 0.0
    for omega0 in (0.25, 0.7, 1.3):
        pot = HillPotential(omega0=omega0)
        fl = floquet_solution(pot)
        worst_omega = max(worst_omega, abs(fl.quasi_momentum - omega0))
        worst_g = max(worst_g, float(np.max(np.abs(fl.g - 1.0 / np.sqrt(omega0)))))
        trace = float(np.trace(monodromy(pot)))
        worst_trace = max(worst_trace, abs(trace - 2.0 * np.cos(TWO_PI * omega0)))
    return [
        _below("1a", "constant potential: quasi-momentum equals Omega0", worst_omega, 1e-10),
        _below("1b", "constant potential: g equals 1/sqrt(Omega0)", worst_g, 1e-10),
        _below("1c", "constant potential: trace equals 2 cos(2 pi Omega0)", worst_trace, 1e-8),
    ]


def check_wronskian(rng: np.random.Generator) -> List[Measurement]:
    worst = 0.0
    for _ in range(20):
        fl = floquet_solution(_random_stable_potential(rng, 0.3))
        worst = max(worst, float(np.max(np.abs(fl.wronskian() - 2j))))
    return [_below("2", "Floquet normalization conj(y) y' - y conj(y)' = 2i", worst, 1e-8)]


def check_boundary(rng: np.random.Generator) -> List[Measurement]:
    report = classify_stability(monodromy(HillPotential(omega0=0.5)))
    deviation = abs(abs(report.trace) - 2.0)
    passed = report.stability == StabilityClass.BOUNDARY and deviation <= 1e-8
    return [("10", "Omega0 = 1/2 lies on the stability boundary", deviation, 1e-8, passed)]


def _random_vortex_state(rng: np.random.Generator) -> VortexChainState:
    values = {name: float(rng.uniform(-0.2, 0.2)) for name in CHAIN_FIELDS}
    values["rho0"] = float(rng.uniform(0.5, 1.5))
    return VortexChainState(**values)


def check_vortex_identities(rng: np.random.Generator) -> List[Measurement]:
    worst_riccati = worst_amplitude = 0.0
    for run in range(10):
        params = PhysicalParams(omega=(0.0, 0.5, 2.0)[run % 3])
        state = _random_vortex_state(rng)
        try:
            series = integrate_vortex_chain(state, params, (0.0, 2.0), tol=VERIFY_RTOL, atol=VERIFY_ATOL)
        except PhysicalityError as e:
            if e.partial is None:
                raise
            series = e.partial
        z = series.field("q") + 1j * series.field("p")
        worst_riccati = max(worst_riccati, float(np.max(riccati_residual(series) / (1.0 + np.abs(z) ** 2))))
        ratio = (series.field("rho0") / series.field("rho0")[0]) ** 1.5
        mismatch = np.abs(amplitude_factor(series) - ratio) / np.maximum(1.0, ratio)
        worst_amplitude = max(worst_amplitude, float(np.max(mismatch)))
    return [
        _below("3", "Riccati identity along the chain", worst_riccati, 1e-7),
        _below("4", "amplitude equals (rho0 / rho0(0))^(3/2)", worst_amplitude, 1e-8),
    ]


def check_decay_law(rng: np.random.Generator) -> List[Measurement]:
    state = VortexChainState(rho0=1.0, q=1.0)
    times = np.geomspace(50.0, 500.0, 64)
    series = integrate_vortex_chain(
        state, PhysicalParams(omega=0.0), (0.0, 500.0), t_eval=times, tol=VERIFY_RTOL, atol=VERIFY_ATOL
    )
    slope = float(np.polyfit(np.log(series.t), np.log(series.field("rho0")), 1)[0])
    return [_below("5", "rho0 decays like 1/t^2 without rotation", abs(slope + 2.0), 0.05)]


def _random_trajectory_params(rng: np.random.Generator) -> TrajectoryParams:
    omega = float(rng.uniform(0.5, 2.0))
    return TrajectoryParams(
        pot=_random_stable_potential(rng, 0.1),
        c=float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)),
        mu=float(rng.uniform(0.5, 1.0)),
        t0=float(rng.uniform(0.0, TWO_PI / omega)),
        V0=complex(*rng.uniform(-0.5, 0.5, 2)),
        X0=complex(*rng.uniform(-1.0, 1.0, 2)),
        omega=omega,
    )


def _central_difference_error(t: np.ndarray, par: TrajectoryParams, fl: FloquetSolution, h: float) -> float:
    forward = np.array(position_of_time(t + h, par, fl))
    backward = np.array(position_of_time(t - h, par, fl))
    velocity = np.array(velocity_of_time(t, par, fl))
    difference = (forward - backward) / (2.0 * h)
    speed = np.maximum(np.linalg.norm(velocity, axis=0), 1e-3)
    return float(np.max(np.linalg.norm(difference - velocity, axis=0) / speed))


def check_kinematics(rng: np.random.Generator) -> List[Measurement]:
    worst_fd = worst_chain = 0.0
    worst_order = np.inf
    for _ in range(5):
        par = _random_trajectory_params(rng)
        fl = floquet_solution(par.pot)
        t = np.sort(rng.uniform(0.5, 10.0, 5) / par.omega)
        worst_fd = max(worst_fd, _central_difference_error(t, par, fl, 1e-4 / par.omega))
        coarse = _central_difference_error(t, par, fl, 4e-2 / par.omega)
        fine = _central_difference_error(t, par, fl, 2e-2 / par.omega)
        worst_order = min(worst_order, coarse / max(fine, 1e-300))
        residual = np.abs(chain_consistency_residual(t, par, fl, 1e-4 / par.omega))
        worst_chain = max(worst_chain, float(np.max(residual)))
    return [
        _below("6a", "central differences of X match V", worst_fd, 1e-5),
        ("6b", "halving the step divides the difference error by about 4", worst_order, 3.0, worst_order >= 3.0),
        _below("6c", "chain-consistency residual of the closed form", worst_chain, 1e-4),
    ]


def check_rotation_sense(rng: np.random.Generator) -> List[Measurement]:
    out: List[Measurement] = []
    for mu, omega0, expected in ((0.9, 0.4, 1.0), (0.6, 0.45, -1.0)):
        apar = ApproxTrajectoryParams(A0=1.0, A1=3 + 4j, mu=mu, omega0=omega0, t0=0.0, omega=1.0)
        window = TWO_PI + np.linspace(-0.05, 0.05, 41)
        x1, x2 = position_first_approx(window, apar)
        angle = np.unwrap(np.angle((np.asarray(x1) - 3.0) + 1j * (np.asarray(x2) - 4.0)))
        rate = float(np.polyfit(window, angle, 1)[0])
        sense = circle_approx(apar).sense
        rule = RotationSense.COUNTERCLOCKWISE if expected > 0 else RotationSense.CLOCKWISE
        passed = rate * expected > 0 and sense == rule.value
        out.append(("9", f"rotation sense for mu={mu}, Omega0={omega0}", rate, 0.0, passed))
    return out


def check_hopf_oracle(rng: np.random.Generator) -> List[Measurement]:
    state = HopfChainState(H=[0.2, 0.5], A=[1.0, -0.3])
    times = np.linspace(0.0, 1.0, 11)
    series = integrate_hopf_chain(state, (0.0, 1.0), t_eval=times)
    oracle = godunov_reference(taylor_profile(state), 1.0, 4000, t_eval=times)
    travel = max(float(np.max(np.abs(oracle.shock_pos - oracle.shock_pos[0]))), 1e-12)
    error = float(np.max(np.abs(series.phi - oracle.shock_pos))) / travel
    return [_below("7", "cut chain front agrees with the Godunov oracle", error, 0.05)]


def _synthetic_track(rng: np.random.Generator, noise: float) -> Tuple[ObservedTrack, ObservedTrack, float]:
    apar = ApproxTrajectoryParams(A0=1.0, A1=0.5 + 0.2j, omega0=0.48, mu=0.9, t0=0.3, omega=1.0)
    t = np.linspace(0.0, 3.0 * TWO_PI, 200)
    x1, x2 = position_first_approx(t, apar)
    sigma = noise * abs(apar.A0)
    x1 = np.asarray(x1) + sigma * rng.standard_normal(t.size)
    x2 = np.asarray(x2) + sigma * rng.standard_normal(t.size)
    track = ObservedTrack(t=t, x1=x1, x2=x2)
    head, tail = track.split(float(t[149]))
    return head, tail, sigma


def _holdout_mse(head: ObservedTrack, tail: ObservedTrack, seed: int) -> float:
    result = fit_track(head, omega=1.0, seed=seed, restarts=FIT_RESTARTS)
    predicted = evaluate_fit(result, tail.t)
    return float(np.mean(np.abs(tail.positions() - predicted.positions()) ** 2))


def check_fit_recovery(rng: np.random.Generator) -> List[Measurement]:
    seed = int(rng.integers(0, 2**31 - 1))
    head, tail, _ = _synthetic_track(rng, 0.0)
    clean = _holdout_mse(head, tail, seed)
    head, tail, sigma = _synthetic_track(rng, 0.01)
    floor = 2.0 * sigma**2
    noisy = _holdout_mse(head, tail, seed)
    return [
        _below("8a", "noiseless approx track recovered on the hold-out window", clean, 1e-6),
        ("8b", "noisy hold-out MSE within 4x the noise floor", noisy / floor, 4.0, noisy <= 4.0 * floor),
    ]


def check_hopf_phi_fit(rng: np.random.Generator) -> List[Measurement]:
    state = HopfChainState(H=[0.2, 0.5], A=[1.0, -0.3])
    times = np.linspace(0.0, 1.0, 21)
    oracle = godunov_reference(taylor_profile(state), 1.0, 1000, t_eval=times)
    track = ObservedTrack(t=oracle.t, x1=oracle.shock_pos, x2=np.zeros(oracle.t.size))
    result = fit_track(track, family="hopf-phi", seed=int(rng.integers(0, 2**31 - 1)), restarts=8)
    fitted = evaluate_fit(result, track.t)
    travel = max(float(np.max(np.abs(track.x1 - track.x1[0]))), 1e-12)
    error = float(np.max(np.abs(fitted.x1 - track.x1))) / travel
    return [_below("8c", "closed-form front fitted to the oracle front", error, 0.02)]


SUITES: Dict[str, List[Check]] = {
    "hill": [check_hill_constant, check_wronskian, check_boundary],
    "chain": [check_vortex_identities, check_decay_law],
    "hopf": [check_hopf_oracle],
    "trajectory": [check_kinematics, check_rotation_sense],
    "fit": [check_fit_recovery, check_hopf_phi_fit],
}
SUITE_NAMES = (*SUITES, "all")


def _run_check(check: Check, rng: np.random.Generator) -> List[CriterionResult]:
    started = time.perf_counter()
    try:
        measurements = check(rng)
    except (ArithmeticError, ValueError) as e:
        runtime = time.perf_counter() - started
        logger.error(f"[Verify] {check.__name__} raised {type(e).__name__}: {e}")
        return [
            CriterionResult(
                id=check.__name__,
                name=check.__name__.replace("_", " "),
                passed=False,
                value=None,
                threshold=0.0,
                runtime=runtime,
                detail=f"{type(e).__name__}: {e}",
            )
        ]
    runtime = time.perf_counter() - started
    return [
        CriterionResult(id=key, name=name, passed=passed, value=value, threshold=threshold, runtime=runtime)
        for key, name, value, threshold, passed in measurements
    ]


def run_suite(suite: str, seed: int = FIT_SEED) -> VerifyReport:
    """Run an acceptance suite.

    Args:
        suite: hill, chain, hopf, trajectory, fit or all
        seed: Seed of the random cases

    Returns:
        VerifyReport; passed is True iff every criterion passed

    Raises:
        UnknownSuiteError: If the suite name is not known

    See:
        docs/tools/verify.md for reference
    """
    if suite not in SUITE_NAMES:
        raise UnknownSuiteError(f"unknown suite '{suite}'; choose from {', '.join(SUITE_NAMES)}")
    names = list(SUITES) if suite == "all" else [suite]
    rng = np.random.default_rng(seed)
    started = time.perf_counter()
    criteria: List[CriterionResult] = []
    for name in names:
        for check in SUITES[name]:
            results = _run_check(check, rng)
            for item in results:
                status = "pass" if item.passed else "FAIL"
                logger.info(
                    f"[Verify] {name} {item.id} {status}: value={item.value} threshold={item.threshold} "
                    f"runtime={item.runtime:.3g}s"
                )
            criteria.extend(results)
    report = VerifyReport(
        suite=suite,
        seed=seed,
        passed=all(item.passed for item in criteria),
        criteria=criteria,
        runtime=time.perf_counter() - started,
    )
    logger.info(f"[Verify] suite {suite}: {'passed' if report.passed else 'failed'} in {report.runtime:.3g}s")
    return report
