"""Adaptive Runge-Kutta integration shared by every module.

All ODE systems of the package (Hopf chain, vortex chain, Hill equation) go
through integrate(), which wraps scipy's solve_ivp, samples the solution on the
caller's grid and turns solver failures into package errors.
"""

import logging
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import ConfigurationError, StiffnessError

logger = logging.getLogger(__name__)

RHS = Callable[[float, np.ndarray], np.ndarray]
Event = Callable[[float, np.ndarray], float]


class Integration(NamedTuple):
    """Sampled solution of an initial value problem.

    t and y hold only the requested samples reached before a terminal event;
    event_time and event_state describe the event when one fired.
    """

    t: np.ndarray
    y: np.ndarray
    event_time: Optional[float]
    event_state: Optional[np.ndarray]
    nfev: int


def sample_grid(t_span: Tuple[float, float], t_eval: Optional[Sequence[float]], samples: int = 201) -> np.ndarray:
    """Validated sampling grid inside t_span.

    Args:
        t_span: (t_start, t_end) with t_end >= t_start
        t_eval: Requested sample times, or None for an even grid
        samples: Size of the default even grid

    Returns:
        Non-decreasing array of sample times within t_span

    Raises:
        ConfigurationError: If the span is reversed or samples fall outside it
    """
    t_start, t_end = float(t_span[0]), float(t_span[1])
    if not (np.isfinite(t_start) and np.isfinite(t_end)) or t_end < t_start:
        raise ConfigurationError(f"time span ({t_start}, {t_end}) must be finite and forward")
    if t_eval is None:
        if t_end == t_start:
            return np.array([t_start])
        return np.linspace(t_start, t_end, samples)
    grid = np.asarray(t_eval, dtype=float).ravel()
    if grid.size == 0:
        raise ConfigurationError("sampling grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ConfigurationError("sampling grid must be non-decreasing")
    span = max(abs(t_start), abs(t_end), 1.0)
    if grid[0] < t_start - 1e-12 * span or grid[-1] > t_end + 1e-12 * span:
        raise ConfigurationError("sampling grid extends beyond the time span")
    return np.clip(grid, t_start, t_end)


def integrate(
    rhs: RHS,
    t_span: Tuple[float, float],
    y0: np.ndarray,
    t_eval: Optional[Sequence[float]] = None,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    events: Optional[List[Event]] = None,
    max_step: float = np.inf,
    label: str = "Integrate",
) -> Integration:
    """Integrate y' = rhs(t, y) with the adaptive DOP853 scheme.

    Args:
        rhs: Right-hand side f(t, y)
        t_span: Integration interval (t_start, t_end)
        y0: Initial state
        t_eval: Sample times; defaults to 201 evenly spaced points
        rtol: Relative tolerance (> 0)
        atol: Absolute tolerance (> 0)
        events: Terminal event functions; integration stops at the first zero
        max_step: Largest step the integrator may take
        label: Tag used in log messages

    Returns:
        Integration with the samples reached and the event, if any

    Raises:
        ConfigurationError: For non-positive tolerances or an invalid grid
        StiffnessError: If the step size underflows or the solution blows up
    """
    if not (rtol > 0 and atol > 0):
        raise ConfigurationError(f"tolerances must be positive, got rtol={rtol}, atol={atol}")
    y0 = np.asarray(y0, dtype=float)
    grid = sample_grid(t_span, t_eval)
    t_start, t_end = float(t_span[0]), float(t_span[1])

    # Zero span: every sample is the initial state
    if t_end == t_start:
        logger.debug(f"[{label}] zero time span, returning the initial state")
        return Integration(grid, np.tile(y0, (grid.size, 1)), None, None, 0)

    if events:
        for event in events:
            setattr(event, "terminal", True)

    sol = solve_ivp(
        rhs,
        (t_start, t_end),
        y0,
        method="DOP853",
        t_eval=grid,
        rtol=rtol,
        atol=atol,
        events=events,
        max_step=max_step,
    )
    logger.debug(f"[{label}] status={sol.status} nfev={sol.nfev} message='{sol.message}'")

    if sol.status == -1:
        raise StiffnessError(f"[{label}] integration failed: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise StiffnessError(f"[{label}] solution is not finite")

    event_time: Optional[float] = None
    event_state: Optional[np.ndarray] = None
    if sol.status == 1 and sol.t_events is not None:
        for times, states in zip(sol.t_events, sol.y_events):
            if len(times):
                event_time = float(times[0])
                event_state = np.asarray(states[0], dtype=float)
                break
        logger.debug(f"[{label}] terminal event at t={event_time}")

    return Integration(np.asarray(sol.t), np.asarray(sol.y).T, event_time, event_state, int(sol.nfev))
