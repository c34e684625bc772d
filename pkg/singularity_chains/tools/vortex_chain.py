"""Point-vortex chain tools for rotating shallow water.

The chain carries the position and velocity of the singularity, the
geopotential rho0 and its first derivatives, the velocity-gradient invariants
q, p, the second-order quantity r and the second-order velocity Taylor
coefficients. It is closed by setting all third-order rho coefficients to
zero together with the third-order velocity combination entering dr/dt.

Velocities follow dV/dt = -i omega V in the absence of pressure gradients:
dV1/dt = omega V2 - rho10, dV2/dt = -omega V1 - rho01.
"""

import logging
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from ..errors import DegeneracyError, InvalidParameterError, PhysicalityError
from ..models.vortex import CHAIN_FIELDS, PhysicalParams, VortexChainState, VortexSeries, VortexShape
from ..solvers.integrator import integrate, sample_grid
from ..utils.env import get_atol, get_rtol

logger = logging.getLogger(__name__)

(X1, X2, V1, V2, RHO0, RHO10, RHO01, Q, P, R, V20, V11, V02, W20, W11, W02) = range(len(CHAIN_FIELDS))
INT_Q, INT_P = len(CHAIN_FIELDS), len(CHAIN_FIELDS) + 1

# 90 degree rotation of the shallow-water Coriolis term
T_MATRIX = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _vortex_rates(y: np.ndarray, omega: float) -> np.ndarray:
    q, p, r = y[Q], y[P], y[R]
    rho0, rho10, rho01 = y[RHO0], y[RHO10], y[RHO01]
    v20, v11, v02, w20, w11, w02 = y[V20], y[V11], y[V02], y[W20], y[W11], y[W02]

    rates = np.empty(len(CHAIN_FIELDS))
    rates[X1] = y[V1]
    rates[X2] = y[V2]
    rates[V1] = omega * y[V2] - rho10
    rates[V2] = -omega * y[V1] - rho01
    rates[RHO0] = -2.0 * q * rho0
    rates[RHO10] = -3.0 * q * rho10 + p * rho01 - rho0 * (w11 + 2.0 * v20)
    rates[RHO01] = -3.0 * q * rho01 + p * rho10 - rho0 * (v11 + 2.0 * w02)
    rates[Q] = p * p - q * q - omega * p - 2.0 * r
    rates[P] = -2.0 * p * q + omega * q
    rates[R] = (
        -4.0 * p * r
        - 0.5 * rho10 * (3.0 * v20 + w11 + v02)
        - 0.5 * rho01 * (v11 + 3.0 * w02 + w20)
    )
    rates[V20] = -3.0 * q * v20 + omega * w20 + p * (v11 - w20)
    rates[V11] = -3.0 * q * v11 + omega * w11 + p * (2.0 * v02 - 2.0 * v20 - w11)
    rates[V02] = -3.0 * q * v02 + omega * w02 - p * (v11 + w02)
    rates[W20] = -3.0 * q * w20 - omega * v20 + p * (w11 - v20)
    rates[W11] = -3.0 * q * w11 - omega * v11 + p * (-2.0 * w20 + 2.0 * w02 + v11)
    rates[W02] = -3.0 * q * w02 - omega * v02 - p * (w11 - v02)
    return rates


def vortex_chain_rhs(state: VortexChainState, params: PhysicalParams) -> Dict[str, float]:
    """Time derivative of the closed vortex chain.

    Args:
        state: Chain state
        params: Physical constants (Coriolis parameter)

    Returns:
        Mapping from chain field name to its time derivative

    See:
        docs/tools/vortex_chain.md for reference
    """
    rates = _vortex_rates(state.as_vector(), params.omega)
    return {name: float(rates[i]) for i, name in enumerate(CHAIN_FIELDS)}


def integrate_vortex_chain(
    initial: VortexChainState,
    params: PhysicalParams,
    t_span: Tuple[float, float],
    tol: Optional[float] = None,
    t_eval: Optional[Sequence[float]] = None,
    atol: Optional[float] = None,
) -> VortexSeries:
    """Integrate the closed chain with an adaptive Runge-Kutta scheme.

    The running integrals of q and p are integrated as two extra components,
    so rotation_angle and amplitude_factor are as accurate as the chain.

    Args:
        initial: Initial chain state (rho0 > 0)
        params: Physical constants
        t_span: (t_start, t_end)
        tol: Relative tolerance; defaults to SINGCHAIN_RTOL or 1e-9
        t_eval: Sample times inside t_span; defaults to 201 even samples
        atol: Absolute tolerance; defaults to SINGCHAIN_ATOL or 1e-12

    Returns:
        VortexSeries sampled on t_eval

    Raises:
        PhysicalityError: If rho0 reaches zero; the partial series is attached
        StiffnessError: If the step size underflows

    See:
        docs/tools/vortex_chain.md for reference
    """
    omega = params.omega
    rtol = get_rtol() if tol is None else tol
    atol = get_atol() if atol is None else atol
    grid = sample_grid(t_span, t_eval)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.concatenate((_vortex_rates(y, omega), [y[Q], y[P]]))

    def geopotential_vanishes(t: float, y: np.ndarray) -> float:
        return float(y[RHO0])

    result = integrate(
        rhs,
        t_span,
        np.concatenate((initial.as_vector(), [0.0, 0.0])),
        t_eval=grid,
        rtol=rtol,
        atol=atol,
        events=[geopotential_vanishes],
        label="Integrate Vortex Chain",
    )
    partial: Optional[VortexSeries] = None
    if result.t.size:
        partial = VortexSeries(
            t=result.t,
            y=result.y[:, : len(CHAIN_FIELDS)],
            omega=omega,
            int_q=result.y[:, INT_Q],
            int_p=result.y[:, INT_P],
        )
    if partial is None or result.event_time is not None or np.any(partial.field("rho0") <= 0):
        logger.error(f"[Integrate Vortex Chain] geopotential lost positivity at t={result.event_time}")
        raise PhysicalityError(
            f"rho0 reached zero at t={result.event_time}: the state left the solution class",
            partial=partial,
        )
    series = partial
    logger.info(f"[Integrate Vortex Chain] omega={omega}, {len(series)} samples to t={series.t[-1]:.6g}")
    return series


def third_order_closure(state: VortexChainState) -> Tuple[float, float]:
    """Third-order velocity combinations fixed by the closure.

    Args:
        state: Chain state

    Returns:
        (3 v30 + w21, 3 w03 + v12) = (S, -S) with
        S = rho10 (3 v20 + w11 - v02) / 2 - rho01 (3 w02 + v11 - w20) / 2

    See:
        docs/tools/vortex_chain.md for reference
    """
    s = 0.5 * state.rho10 * (3.0 * state.v20 + state.w11 - state.v02) - 0.5 * state.rho01 * (
        3.0 * state.w02 + state.v11 - state.w20
    )
    return (s, -s)


def _running_integral(series: VortexSeries, name: str, stored: Optional[np.ndarray]) -> np.ndarray:
    if stored is not None:
        return stored - stored[0]
    if len(series) == 1:
        return np.zeros(1)
    return cumulative_trapezoid(series.field(name), series.t, initial=0.0)


def rotation_angle(series: VortexSeries, Theta0: float) -> np.ndarray:
    """Orientation angle Theta(t) = Theta0 + integral of p from the first sample.

    Args:
        series: Chain series (non-empty)
        Theta0: Orientation at the first sample (radians)

    Returns:
        Theta at every sample

    See:
        docs/tools/vortex_chain.md for reference
    """
    return Theta0 + _running_integral(series, "p", series.int_p)


def amplitude_factor(series: VortexSeries) -> np.ndarray:
    """Amplitude A(t) = exp(-3 * integral of q from the first sample).

    Along an exact solution A(t) = (rho0(t) / rho0(0))^{3/2}.

    Args:
        series: Chain series

    Returns:
        A at every sample

    Raises:
        PhysicalityError: If rho0 is not positive throughout

    See:
        docs/tools/vortex_chain.md for reference
    """
    if np.any(series.field("rho0") <= 0):
        raise PhysicalityError("rho0 must be positive along the series", partial=series)
    return np.exp(-3.0 * _running_integral(series, "q", series.int_q))


def riccati_residual(series: VortexSeries) -> np.ndarray:
    """Residual of d(q + ip)/dt + (q + ip)^2 - i omega (q + ip) + 2r per sample.

    The time derivative is taken from the chain right-hand side.

    See:
        docs/tools/vortex_chain.md for reference
    """
    z = series.field("q") + 1j * series.field("p")
    rates = np.array([_vortex_rates(row, series.omega) for row in series.y])
    dz = rates[:, Q] + 1j * rates[:, P]
    return np.abs(dz + z * z - 1j * series.omega * z + 2.0 * series.field("r"))


def closure_consistency(series: VortexSeries) -> np.ndarray:
    """Left-hand side of the third-order compatibility constraint per sample.

    rho0 (3 v30 + w21 - v12 - 3 w03) + rho10 (3 v20 + w11 - v02)
        - rho01 (v11 + 3 w02 - w20)

    with the third-order combinations taken from third_order_closure. The
    constraint is monitored, not enforced.

    See:
        docs/tools/vortex_chain.md for reference
    """
    f = series.fields()
    s = 0.5 * f["rho10"] * (3.0 * f["v20"] + f["w11"] - f["v02"]) - 0.5 * f["rho01"] * (
        3.0 * f["w02"] + f["v11"] - f["w20"]
    )
    return (
        f["rho0"] * (s - (-s))
        + f["rho10"] * (3.0 * f["v20"] + f["w11"] - f["v02"])
        - f["rho01"] * (f["v11"] + 3.0 * f["w02"] - f["w20"])
    )


def _at_time(series: VortexSeries, values: np.ndarray, t: float) -> np.ndarray:
    if len(series) == 1:
        return values[0]
    return CubicSpline(series.t, values, axis=0)(t)


def evaluate_singular_field(
    x: Union[Sequence[float], np.ndarray],
    t: float,
    shape: VortexShape,
    series: VortexSeries,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Leading term of the singular field part near the trajectory.

    (u~, rho~) = A(t) sqrt((Q* d, B0 Q* d)) (Q T B0 Q* d, 0), d = x - X(t),
    with Q* the rotation by Theta(t), Q its transpose and B0 = diag(b1, b2).

    Args:
        x: Point (2,) or points (m, 2)
        t: Time within the series span
        shape: Ellipse parameters (b1 != b2) and initial orientation
        series: Chain series providing X(t), Theta(t) and A(t)

    Returns:
        (u1, u2, rho) with the shape of one coordinate of x; rho is zero

    Raises:
        DegeneracyError: If b1 = b2
        InvalidParameterError: If t lies outside the series

    See:
        docs/tools/vortex_chain.md for reference
    """
    if shape.b1 == shape.b2:
        raise DegeneracyError(f"b1 = b2 = {shape.b1}: a circular vortex violates the anti-symmetry condition")
    t_first, t_last = float(series.t[0]), float(series.t[-1])
    if not t_first <= t <= t_last:
        raise InvalidParameterError(f"t={t} lies outside the series span [{t_first}, {t_last}]")

    center = _at_time(series, series.y[:, [X1, X2]], t)
    theta = float(_at_time(series, rotation_angle(series, shape.Theta0), t))
    amplitude = float(_at_time(series, amplitude_factor(series), t))

    cos_t, sin_t = np.cos(theta), np.sin(theta)
    rotation = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    B0 = np.diag([shape.b1, shape.b2])

    delta = np.asarray(x, dtype=float) - center
    xi = delta @ rotation.T
    radial = np.sqrt(np.einsum("...i,ij,...j->...", xi, B0, xi))
    direction = xi @ (rotation.T @ T_MATRIX @ B0).T
    u = amplitude * radial[..., None] * direction
    return u[..., 0], u[..., 1], np.zeros_like(radial)
