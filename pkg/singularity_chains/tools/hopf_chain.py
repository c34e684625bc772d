"""Shock-front tools for the Hopf equation.

This module integrates the cut Taylor-coefficient chain of a shock front,
evaluates closed forms of the front position and provides a first-order
Godunov finite-volume oracle for w_t + (w^2/2)_x = 0.

Convention: the jump A is added on the left of the front, so the state is
H + A for x < phi and H for x > phi. Both sides solve the Hopf equation, and
the Taylor coefficients Y_k of either side obey

    dY_k/dt = (k + 1) Y_{k+1} dphi/dt - sum_{j=0..k} (k + 1 - j) Y_j Y_{k+1-j}

with Y_{n+1} = 0 at closure order n. The Hugoniot condition gives
dphi/dt = H0 + A0 / 2.
"""

import logging
from typing import Callable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ..configs.defaults import (
    GODUNOV_CFL,
    GODUNOV_DOMAIN,
    GODUNOV_MIN_CELLS,
    SHOCK_CONTRAST,
    SHOCK_JUMP_TOL,
    SHOCK_PLATEAU_OFFSET,
)
from ..errors import (
    DegenerateParametersError,
    DomainError,
    InvalidParameterError,
    ShockTrackingError,
    SingularStateError,
)
from ..models.base import BoundaryCondition, StopReason
from ..models.hopf import HopfChainDerivative, HopfChainState, HopfSeries, PhiClosedForm, ShockTrack
from ..solvers.integrator import integrate, sample_grid
from ..utils.env import get_atol, get_rtol

logger = logging.getLogger(__name__)

Profile = Union[Callable[[np.ndarray], np.ndarray], Sequence[float], np.ndarray]


def _coefficient_rates(Y: np.ndarray, dphi: float) -> np.ndarray:
    padded = np.append(Y, 0.0)
    n = Y.size - 1
    rates = np.empty(n + 1)
    for k in range(n + 1):
        j = np.arange(k + 1)
        rates[k] = (k + 1) * padded[k + 1] * dphi - np.sum((k + 1 - j) * padded[j] * padded[k + 1 - j])
    return rates


def _chain_rates(y: np.ndarray, n: int) -> np.ndarray:
    H = y[1 : n + 2]
    A = y[n + 2 : 2 * n + 3]
    dphi = H[0] + 0.5 * A[0]
    dH = _coefficient_rates(H, dphi)
    dW = _coefficient_rates(H + A, dphi)
    return np.concatenate(([dphi], dH, dW - dH))


def hopf_chain_rhs(state: HopfChainState) -> HopfChainDerivative:
    """Time derivative of the cut shock-front chain.

    Args:
        state: Chain state with H_{n+1} = A_{n+1} = 0 implied

    Returns:
        dphi/dt and dH_k/dt, dA_k/dt for k = 0..n

    Raises:
        SingularStateError: If the jump amplitude A0 is zero

    See:
        docs/tools/hopf_chain.md for reference
    """
    if state.A[0] == 0.0:
        raise SingularStateError("jump amplitude A0 is zero: the Hugoniot relation is undefined")
    rates = _chain_rates(state.as_vector(), state.n)
    n = state.n
    return HopfChainDerivative(
        dphi=float(rates[0]),
        dH=[float(v) for v in rates[1 : n + 2]],
        dA=[float(v) for v in rates[n + 2 :]],
    )


def integrate_hopf_chain(
    initial: HopfChainState,
    t_span: Tuple[float, float],
    tol: Optional[float] = None,
    t_eval: Optional[Sequence[float]] = None,
    atol: Optional[float] = None,
) -> HopfSeries:
    """Integrate the cut chain with an adaptive Runge-Kutta scheme.

    If A0 crosses zero the integration halts: the series holds the samples
    reached before the crossing and stop_reason is "jump-vanished".

    Args:
        initial: Initial chain state (A0 != 0)
        t_span: (t_start, t_end)
        tol: Relative tolerance; defaults to SINGCHAIN_RTOL or 1e-9
        t_eval: Sample times inside t_span; defaults to 201 even samples
        atol: Absolute tolerance; defaults to SINGCHAIN_ATOL or 1e-12

    Returns:
        HopfSeries sampled on t_eval

    Raises:
        SingularStateError: If the initial A0 is zero
        StiffnessError: If the step size underflows

    See:
        docs/tools/hopf_chain.md for reference
    """
    if initial.A[0] == 0.0:
        raise SingularStateError("initial jump amplitude A0 is zero")
    n = initial.n
    rtol = get_rtol() if tol is None else tol
    atol = get_atol() if atol is None else atol
    grid = sample_grid(t_span, t_eval)

    def jump_vanishes(t: float, y: np.ndarray) -> float:
        return float(y[n + 2])

    result = integrate(
        lambda t, y: _chain_rates(y, n),
        t_span,
        initial.as_vector(),
        t_eval=grid,
        rtol=rtol,
        atol=atol,
        events=[jump_vanishes],
        label="Integrate Hopf Chain",
    )

    stop_reason = StopReason.COMPLETED
    if result.event_time is not None:
        stop_reason = StopReason.JUMP_VANISHED
        logger.warning(f"[Integrate Hopf Chain] jump amplitude vanished at t={result.event_time:.6g}, halting")

    y = result.y
    series = HopfSeries(
        n=n,
        t=result.t,
        phi=y[:, 0],
        H=y[:, 1 : n + 2],
        A=y[:, n + 2 : 2 * n + 3],
        stop_reason=stop_reason,
        stop_time=result.event_time,
    )
    logger.info(f"[Integrate Hopf Chain] n={n}, {len(series)} samples, stop={series.stop_reason}")
    return series


def phi_closed_form(c: PhiClosedForm, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Evaluate c3/(c2 - c1) * sqrt((t + c1)/(t + c2)) + c4 t + c5.

    Args:
        c: Constants c1..c5
        t: Time or array of times

    Returns:
        Front position, same shape as t

    Raises:
        DegenerateParametersError: If c1 = c2
        DomainError: If t + c2 <= 0 or t + c1 < 0 anywhere

    See:
        docs/tools/hopf_chain.md for reference
    """
    if c.c1 == c.c2:
        raise DegenerateParametersError(f"c1 = c2 = {c.c1}: the closed form divides by c2 - c1")
    tt = np.asarray(t, dtype=float)
    if np.any(tt + c.c2 <= 0) or np.any(tt + c.c1 < 0):
        raise DomainError("closed form evaluated where t + c1 < 0 or t + c2 <= 0")
    value = c.c3 / (c.c2 - c.c1) * np.sqrt((tt + c.c1) / (tt + c.c2)) + c.c4 * tt + c.c5
    return float(value) if value.ndim == 0 else value


def chain_front_closed_form(initial: HopfChainState, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Exact front position of the n = 1 cut chain.

    phi(t) = phi0 + (H0 + A0/2) t - A0 A1 t^2 / (4 (sqrt(P) + 1 + (2 H1 + A1) t / 2)),
    P = (1 + H1 t)(1 + (H1 + A1) t).

    Args:
        initial: Chain state at t = 0 with n = 1
        t: Time or array of times (>= 0)

    Returns:
        Front position, same shape as t

    Raises:
        InvalidParameterError: If the state is not cut at order 1
        DomainError: If a gradient catastrophe (P <= 0) is reached

    See:
        docs/tools/hopf_chain.md for reference
    """
    if initial.n != 1:
        raise InvalidParameterError(f"closed form exists for n = 1 only, got n = {initial.n}")
    H0, H1 = initial.H
    A0, A1 = initial.A
    tt = np.asarray(t, dtype=float)
    right = 1.0 + H1 * tt
    left = 1.0 + (H1 + A1) * tt
    if np.any(right <= 0) or np.any(left <= 0):
        raise DomainError("gradient catastrophe reached: the background steepened into a shock")
    root = np.sqrt(right * left)
    value = initial.phi + (H0 + 0.5 * A0) * tt - A0 * A1 * tt**2 / (4.0 * (root + 1.0 + 0.5 * (2.0 * H1 + A1) * tt))
    return float(value) if value.ndim == 0 else value


def taylor_profile(state: HopfChainState) -> Callable[[np.ndarray], np.ndarray]:
    """Piecewise-polynomial profile H(x) + A(x) [x < phi] of a chain state.

    Args:
        state: Chain state

    Returns:
        Vectorized function w(x)

    See:
        docs/tools/hopf_chain.md for reference
    """
    H = np.asarray(state.H)[::-1]
    A = np.asarray(state.A)[::-1]
    phi = state.phi

    def profile(x: np.ndarray) -> np.ndarray:
        xi = np.asarray(x, dtype=float) - phi
        return np.polyval(H, xi) + np.where(xi < 0, np.polyval(A, xi), 0.0)

    return profile


def _godunov_flux(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # min of f over [left, right] when left <= right, max over [right, left] otherwise
    f_left = 0.5 * left**2
    f_right = 0.5 * right**2
    rarefaction = np.where((left < 0) & (right > 0), 0.0, np.minimum(f_left, f_right))
    return np.where(left <= right, rarefaction, np.maximum(f_left, f_right))


def _pad(w: np.ndarray, boundary: str) -> np.ndarray:
    if boundary == BoundaryCondition.PERIODIC.value:
        return np.concatenate(([w[-1]], w, [w[0]]))
    return np.concatenate(([w[0]], w, [w[-1]]))


def _march(
    w: np.ndarray, dx: float, t_start: float, times: np.ndarray, boundary: str, cfl: float
) -> Iterator[np.ndarray]:
    """Yield the profile at each of the non-decreasing times, starting from t_start."""
    w = np.array(w, dtype=float)
    t = t_start
    steps = 0
    for target in times:
        while t < target:
            speed = float(np.max(np.abs(w)))
            dt = target - t if speed == 0.0 else min(cfl * dx / speed, target - t)
            padded = _pad(w, boundary)
            flux = _godunov_flux(padded[:-1], padded[1:])
            w = w - dt / dx * (flux[1:] - flux[:-1])
            t = target if dt == target - t else t + dt
            steps += 1
        yield w.copy()
    logger.debug(f"[Godunov] {steps} steps, dx={dx:.3g}, boundary={boundary}")


def godunov_evolve(
    w: Sequence[float],
    dx: float,
    t_end: float,
    boundary: Union[BoundaryCondition, str] = BoundaryCondition.OUTFLOW,
    cfl: float = GODUNOV_CFL,
) -> np.ndarray:
    """Conservative first-order Godunov update of w_t + (w^2/2)_x = 0.

    Args:
        w: Cell averages
        dx: Cell width
        t_end: Evolution time (>= 0)
        boundary: "outflow" (zero-gradient ghost cells) or "periodic"
        cfl: Courant number; the step is cfl * dx / max|w|

    Returns:
        Cell averages at t_end

    Raises:
        InvalidParameterError: For a non-positive dx, negative t_end or cfl outside (0, 1]

    See:
        docs/tools/hopf_chain.md for reference
    """
    if dx <= 0 or t_end < 0 or not 0 < cfl <= 1:
        raise InvalidParameterError(f"invalid oracle setup: dx={dx}, t_end={t_end}, cfl={cfl}")
    mode = BoundaryCondition(boundary).value
    *_, final = _march(np.asarray(w, dtype=float), dx, 0.0, np.array([t_end]), mode, cfl)
    return final


def locate_shock(
    x: np.ndarray,
    w: np.ndarray,
    jump_tol: float = SHOCK_JUMP_TOL,
    offset: int = SHOCK_PLATEAU_OFFSET,
) -> float:
    """Mid-level crossing of the dominant downward jump of a profile.

    The jump is the largest drop between neighbouring cells. It must exceed
    jump_tol and stand out from the smooth variation of the profile. The
    mid-level is the average of the values offset cells on either side.

    Raises:
        ShockTrackingError: If no admissible jump is present

    See:
        docs/tools/hopf_chain.md for reference
    """
    drops = w[:-1] - w[1:]
    i = int(np.argmax(drops))
    smooth = float(np.percentile(np.abs(drops), 90))
    if drops[i] <= jump_tol or drops[i] <= SHOCK_CONTRAST * smooth:
        raise ShockTrackingError(f"no downward jump detected (largest drop {drops[i]:.3g})")
    lo = max(i - offset, 0)
    hi = min(i + 1 + offset, w.size - 1)
    mid = 0.5 * (w[lo] + w[hi])
    # Walk outwards from the steepest drop to the cell pair bracketing the mid-level
    for j in sorted(range(lo, hi), key=lambda k: abs(k - i)):
        if w[j] >= mid > w[j + 1]:
            return float(x[j] + (w[j] - mid) / (w[j] - w[j + 1]) * (x[j + 1] - x[j]))
    raise ShockTrackingError("jump does not cross its mid-level")


def godunov_reference(
    initial_profile: Profile,
    t_end: float,
    cells: int,
    t_eval: Optional[Sequence[float]] = None,
    domain: Tuple[float, float] = GODUNOV_DOMAIN,
    boundary: Union[BoundaryCondition, str] = BoundaryCondition.OUTFLOW,
    cfl: float = GODUNOV_CFL,
) -> ShockTrack:
    """Shock position of a Godunov finite-volume solution.

    Args:
        initial_profile: Function w(x) evaluated at cell centers, or cell values
        t_end: Final time (>= 0)
        cells: Number of cells (>= 100)
        t_eval: Sample times in [0, t_end]; defaults to 11 even samples
        domain: (x_min, x_max)
        boundary: "outflow" or "periodic"
        cfl: Courant number

    Returns:
        ShockTrack with the mid-level crossing at every sample time

    Raises:
        InvalidParameterError: For fewer than 100 cells or an invalid domain
        ShockTrackingError: If no jump can be located

    See:
        docs/tools/hopf_chain.md for reference
    """
    if cells < GODUNOV_MIN_CELLS:
        raise InvalidParameterError(f"the oracle needs at least {GODUNOV_MIN_CELLS} cells, got {cells}")
    x_min, x_max = domain
    if not x_max > x_min:
        raise InvalidParameterError(f"empty oracle domain ({x_min}, {x_max})")
    dx = (x_max - x_min) / cells
    x = x_min + (np.arange(cells) + 0.5) * dx
    if callable(initial_profile):
        w0 = np.asarray(initial_profile(x), dtype=float)
    else:
        w0 = np.asarray(initial_profile, dtype=float)
    if w0.shape != (cells,):
        raise InvalidParameterError(f"initial profile must have {cells} cell values, got shape {w0.shape}")

    times = sample_grid((0.0, t_end), t_eval, samples=11)
    mode = BoundaryCondition(boundary).value
    locate_shock(x, w0)

    positions = [locate_shock(x, w) for w in _march(w0, dx, 0.0, times, mode, cfl)]
    track = ShockTrack(t=times, shock_pos=np.array(positions), dx=dx, cells=cells, boundary=mode)
    logger.info(f"[Godunov Reference] {cells} cells, shock at {track.shock_pos[-1]:.6g} for t={times[-1]:.6g}")
    return track
