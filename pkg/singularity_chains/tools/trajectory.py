"""Closed-form vortex trajectories.

Two families describe the center X(t) of the vortex singularity:

- the exact family, built on the Floquet solution of the Hill equation,
  with the phase Phi(t) obtained by inverting theta(Phi) = tau(t);
- the first approximation for small beta, where theta = Omega0 Phi and all
  quantities are elementary.

Positions and velocities are complex numbers X = X1 + i X2, V = V1 + i V2.
"""

import logging
from typing import Tuple, Union

import numpy as np
from scipy.interpolate import CubicSpline

from ..configs.defaults import RESONANCE_TOL
from ..errors import InvalidParameterError, ResonanceError
from ..models.base import RotationSense
from ..models.hill import TWO_PI, FloquetSolution
from ..models.trajectory import ApproxTrajectoryParams, CircleApproximation, TrajectoryParams

logger = logging.getLogger(__name__)

TimeLike = Union[float, np.ndarray]


def branch_arctan(mu: float, s: TimeLike) -> np.ndarray:
    """Continuous branch of arctan(mu tan s) with F(s) - s bounded.

    F(s) = s + arctan2((mu - 1) sin s cos s, cos^2 s + mu sin^2 s), so F(s)
    lies in the same interval [pi n - pi/2, pi n + pi/2] as s and
    dF/ds = mu / (cos^2 s + mu^2 sin^2 s) > 0.
    """
    s = np.asarray(s, dtype=float)
    sin_s, cos_s = np.sin(s), np.cos(s)
    return s + np.arctan2((mu - 1.0) * sin_s * cos_s, cos_s**2 + mu * sin_s**2)


def _branch_arctan_rate(mu: float, s: np.ndarray) -> np.ndarray:
    return mu / (np.cos(s) ** 2 + mu**2 * np.sin(s) ** 2)


def _scalar_or_array(value: np.ndarray) -> TimeLike:
    return value.item() if value.ndim == 0 else value


def target_phase(t: TimeLike, mu: float, omega: float, t0: float) -> np.ndarray:
    """tau(t) = F(omega (t - t0) / 2) + Theta0 with Theta0 = F(omega t0 / 2)."""
    t = np.asarray(t, dtype=float)
    return branch_arctan(mu, 0.5 * omega * (t - t0)) + branch_arctan(mu, 0.5 * omega * t0)


def phase_of_time(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution) -> TimeLike:
    """Phase Phi(t) solving theta(Phi) = tau(t).

    Args:
        t: Time or array of times
        par: Exact-family constants
        fl: Floquet solution of par.pot

    Returns:
        Phi(t), continuous and strictly increasing in t

    Raises:
        NumericalError: If the theta inversion fails

    See:
        docs/tools/trajectory.md for reference
    """
    tau = target_phase(t, par.mu, par.omega, par.t0)
    return _scalar_or_array(np.asarray(fl.invert_theta(tau)))


def _ellipse_factor(t: np.ndarray, mu: float, omega: float, t0: float) -> np.ndarray:
    return 1.0 - (1.0 - mu**2) * np.sin(0.5 * omega * (t - t0)) ** 2


def rho0_of_time(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution) -> TimeLike:
    """Geopotential at the vortex center.

    rho0 = omega mu g^2(Phi(t)) / (2 |c| (1 - (1 - mu^2) sin^2(omega (t - t0) / 2)))

    See:
        docs/tools/trajectory.md for reference
    """
    t = np.asarray(t, dtype=float)
    Phi = np.asarray(phase_of_time(t, par, fl))
    g = fl.g_at(Phi)
    rho0 = par.omega * par.mu * g**2 / (2.0 * abs(par.c) * _ellipse_factor(t, par.mu, par.omega, par.t0))
    return _scalar_or_array(rho0)


class _PhaseIntegrals:
    """Antiderivatives of g e^{+-i theta} e^{-i Phi/2} B(Phi) for any real Phi.

    B(Phi) = beta0 e^{i Phi} - 2 conj(beta1) e^{-i Phi} + 2 beta2. Both
    integrands pick up the factor -e^{+-2 pi i kappa} per period, which gives
    the quasi-periodic extension beyond [0, 2 pi].
    """

    def __init__(self, par: TrajectoryParams, fl: FloquetSolution) -> None:
        pot = par.pot
        Phi = fl.phi
        B = pot.beta0 * np.exp(1j * Phi) - 2.0 * np.conj(pot.beta1) * np.exp(-1j * Phi) + 2.0 * pot.beta2
        common = fl.g * np.exp(-0.5j * Phi) * B
        P1 = common * np.exp(1j * fl.theta)
        P2 = common * np.exp(-1j * fl.theta)
        stacked = np.column_stack([P1.real, P1.imag, P2.real, P2.imag])
        self._antiderivative = CubicSpline(Phi, stacked, axis=0).antiderivative()
        full = self._antiderivative(TWO_PI)
        self._period = (full[0] + 1j * full[1], full[2] + 1j * full[3])
        self._factor = (-np.exp(2j * np.pi * fl.kappa), -np.exp(-2j * np.pi * fl.kappa))
        self.zero = not (pot.beta0 or pot.beta1 or pot.beta2)

    def __call__(self, Phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        k = np.floor(Phi / TWO_PI)
        rest = Phi - TWO_PI * k
        partial = self._antiderivative(rest)
        values = (partial[..., 0] + 1j * partial[..., 1], partial[..., 2] + 1j * partial[..., 3])
        out = []
        for J_rest, J_period, lam in zip(values, self._period, self._factor):
            lam_k = lam**k
            if abs(1.0 - lam) < 1e-12:
                out.append(k * J_period + J_rest)
            else:
                out.append(J_period * (1.0 - lam_k) / (1.0 - lam) + lam_k * J_rest)
        return out[0], out[1]


def _exact_state(
    t: TimeLike, par: TrajectoryParams, fl: FloquetSolution
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Phi(t), X(t) and V(t) of the exact family."""
    t = np.asarray(t, dtype=float)
    mu, omega, t0 = par.mu, par.omega, par.t0
    theta0 = float(branch_arctan(mu, 0.5 * omega * t0))
    Phi = fl.invert_theta(target_phase(t, mu, omega, t0))

    integrals = _PhaseIntegrals(par, fl)
    J1, J2 = integrals(Phi)
    lead = 0.5 * (mu + 1.0)
    lag = 0.5 * (mu - 1.0)
    I_plus = np.exp(0.5j * omega * t0) * (lead * np.exp(-1j * theta0) * J1 + lag * np.exp(1j * theta0) * J2)
    I_minus = -np.exp(-0.5j * omega * t0) * (lag * np.exp(-1j * theta0) * J1 + lead * np.exp(1j * theta0) * J2)

    scale = np.sqrt(1.0 / (mu * abs(par.c) * omega))
    rotation = np.exp(-1j * omega * t)
    V = rotation * (0.25j * omega * scale * I_plus + par.V0)
    X = par.X0 - 0.25 * scale * (rotation * I_plus + I_minus) + (1j / omega) * (rotation - 1.0) * par.V0
    return Phi, X, V


def velocity_of_time(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution) -> Tuple[TimeLike, TimeLike]:
    """Velocity (V1, V2) of the vortex center.

    V = e^{-i omega t} ((i/4) sqrt(omega / (mu |c|)) I+ + V0)

    See:
        docs/tools/trajectory.md for reference
    """
    _, _, V = _exact_state(t, par, fl)
    return _scalar_or_array(V.real), _scalar_or_array(V.imag)


def position_of_time(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution) -> Tuple[TimeLike, TimeLike]:
    """Position (X1, X2) of the vortex center.

    X = X0 - (1/4) sqrt(1 / (mu |c| omega)) (e^{-i omega t} I+ + I-) + (i / omega)(e^{-i omega t} - 1) V0

    See:
        docs/tools/trajectory.md for reference
    """
    X = exact_position_complex(t, par, fl)
    return _scalar_or_array(X.real), _scalar_or_array(X.imag)


def exact_position_complex(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution) -> np.ndarray:
    """Complex position X1 + i X2 of the exact family."""
    _, X, _ = _exact_state(t, par, fl)
    return X


def exact_trajectory_table(t: np.ndarray, par: TrajectoryParams, fl: FloquetSolution) -> np.ndarray:
    """Rows t, X1, X2, V1, V2, rho0 for the trajectory subcommand."""
    t = np.asarray(t, dtype=float)
    Phi, X, V = _exact_state(t, par, fl)
    rho0 = par.omega * par.mu * fl.g_at(Phi) ** 2 / (
        2.0 * abs(par.c) * _ellipse_factor(t, par.mu, par.omega, par.t0)
    )
    return np.column_stack([t, X.real, X.imag, V.real, V.imag, rho0])


def _check_resonance(omega0: float) -> None:
    for resonant in (0.5, 1.5):
        if abs(omega0 - resonant) < RESONANCE_TOL:
            raise ResonanceError(f"Omega0 = {omega0} is resonant: the first approximation divides by zero")


def phase_first_approx(t: TimeLike, apar: ApproxTrajectoryParams) -> np.ndarray:
    """Phi(t) = (F(omega (t - t0) / 2) + F(omega t0 / 2)) / Omega0."""
    _check_resonance(apar.omega0)
    return target_phase(t, apar.mu, apar.omega, apar.t0) / apar.omega0


def position_first_approx(t: TimeLike, apar: ApproxTrajectoryParams) -> Tuple[TimeLike, TimeLike]:
    """Position (X1, X2) of the first-approximation family.

    Args:
        t: Time or array of times
        apar: First-approximation constants

    Returns:
        (X1, X2) = (Re X, Im X)

    Raises:
        ResonanceError: If Omega0 is within 1e-12 of 1/2 or 3/2

    See:
        docs/tools/trajectory.md for reference
    """
    X = first_approx_complex(t, apar)
    return _scalar_or_array(X.real), _scalar_or_array(X.imag)


def first_approx_complex(t: TimeLike, apar: ApproxTrajectoryParams) -> np.ndarray:
    """Complex position of the first-approximation family."""
    t = np.asarray(t, dtype=float)
    A0, A1, A2, A3, A4 = apar.amplitudes()
    return np.sum(first_approx_basis(t, apar) * np.array([A0, A1, A2, A3, A4]), axis=-1)


def first_approx_basis(t: TimeLike, apar: ApproxTrajectoryParams) -> np.ndarray:
    """Functions multiplying A0..A4, shape t.shape + (5,).

    The family is linear in the amplitudes, so fits solve for them exactly.
    """
    t = np.asarray(t, dtype=float)
    Phi = phase_first_approx(t, apar)
    omega = apar.omega
    envelope = np.exp(0.5j * (Phi - omega * t)) * np.sqrt(_ellipse_factor(t, apar.mu, omega, apar.t0))
    return np.stack(
        [
            envelope,
            np.ones_like(envelope),
            np.exp(-1j * omega * t),
            envelope * np.exp(-2j * Phi),
            envelope * np.exp(-1j * Phi),
        ],
        axis=-1,
    )


def first_approx_amplitudes(par: TrajectoryParams) -> ApproxTrajectoryParams:
    """First-approximation constants of an exact-family parameter set.

    With g = 1/sqrt(Omega0) and theta = Omega0 Phi the phase integrals are
    elementary, and with s = 1 / sqrt(mu |c| omega)

        A0 = (i s sqrt(Omega0) / 2) beta0 / (Omega0^2 - 1/4)
        A3 = -i s sqrt(Omega0) conj(beta1) / (Omega0^2 - 9/4)
        A4 = i s sqrt(Omega0) beta2 / (Omega0^2 - 1/4)

    A1 and A2 collect X0, V0 and the values of the integrals at Phi = 0.
    The potential is quadratic in beta, so the two families differ by
    O(|beta|^3) on bounded time windows.

    Args:
        par: Exact-family constants

    Returns:
        ApproxTrajectoryParams with the same Omega0, mu, t0 and omega

    Raises:
        ResonanceError: If Omega0 is within 1e-12 of 1/2 or 3/2

    See:
        docs/tools/trajectory.md for reference
    """
    pot = par.pot
    omega0, mu, omega, t0 = pot.omega0, par.mu, par.omega, par.t0
    if not omega0 > 0:
        raise InvalidParameterError(f"the first approximation needs Omega0 > 0, got {omega0}")
    _check_resonance(omega0)

    scale = 1.0 / np.sqrt(mu * abs(par.c) * omega)
    root = np.sqrt(omega0)
    beta1_bar = np.conj(pot.beta1)
    A0 = 0.5j * scale * root * pot.beta0 / (omega0**2 - 0.25)
    A3 = -1j * scale * root * beta1_bar / (omega0**2 - 2.25)
    A4 = 1j * scale * root * pot.beta2 / (omega0**2 - 0.25)

    # Leading-order phase integrals at Phi = 0
    J1 = (
        pot.beta0 / (omega0 + 0.5) - 2.0 * beta1_bar / (omega0 - 1.5) + 2.0 * pot.beta2 / (omega0 - 0.5)
    ) / (1j * root)
    J2 = -(
        pot.beta0 / (omega0 - 0.5) - 2.0 * beta1_bar / (omega0 + 1.5) + 2.0 * pot.beta2 / (omega0 + 0.5)
    ) / (1j * root)
    theta0 = float(branch_arctan(mu, 0.5 * omega * t0))
    lead = 0.5 * (mu + 1.0)
    lag = 0.5 * (mu - 1.0)
    I_plus = np.exp(0.5j * omega * t0) * (lead * np.exp(-1j * theta0) * J1 + lag * np.exp(1j * theta0) * J2)
    I_minus = -np.exp(-0.5j * omega * t0) * (lag * np.exp(-1j * theta0) * J1 + lead * np.exp(1j * theta0) * J2)

    A1 = par.X0 - 1j * par.V0 / omega + 0.25 * scale * I_minus
    A2 = 1j * par.V0 / omega + 0.25 * scale * I_plus
    logger.debug(f"[First Approx] |A0|={abs(A0):.6g}, |A3|={abs(A3):.6g}, |A4|={abs(A4):.6g}")
    return ApproxTrajectoryParams(
        A0=complex(A0),
        A1=complex(A1),
        A2=complex(A2),
        A3=complex(A3),
        A4=complex(A4),
        omega0=omega0,
        mu=mu,
        t0=t0,
        omega=omega,
    )


def angular_velocity_first_approx(t: TimeLike, apar: ApproxTrajectoryParams) -> TimeLike:
    """Signed angular velocity (dPhi/dt - omega) / 2 about A1.

    See:
        docs/tools/trajectory.md for reference
    """
    _check_resonance(apar.omega0)
    s = 0.5 * apar.omega * (np.asarray(t, dtype=float) - apar.t0)
    dPhi = 0.5 * apar.omega * _branch_arctan_rate(apar.mu, s) / apar.omega0
    return _scalar_or_array(0.5 * (dPhi - apar.omega))


def circle_approx(apar: ApproxTrajectoryParams) -> CircleApproximation:
    """Circle approximating the first-approximation track.

    Args:
        apar: First-approximation constants

    Returns:
        Center (Re A1, Im A1), radius |A0|, rotation sense from mu versus
        2 Omega0, and the angular velocities at t0 and over a period

    See:
        docs/tools/trajectory.md for reference
    """
    mu, omega0, omega = apar.mu, apar.omega0, apar.omega
    if mu > 2.0 * omega0:
        sense = RotationSense.COUNTERCLOCKWISE
    elif mu < 2.0 * omega0:
        sense = RotationSense.CLOCKWISE
    else:
        sense = RotationSense.INDETERMINATE
    return CircleApproximation(
        center=(float(apar.A1.real), float(apar.A1.imag)),
        radius=float(abs(apar.A0)),
        sense=sense,
        angular_velocity_at_t0=0.5 * omega * (mu / (2.0 * omega0) - 1.0),
        mean_angular_velocity=0.5 * omega * (1.0 / (2.0 * omega0) - 1.0),
    )


def rot_u_on_trajectory(rho0_value: TimeLike, c: float, omega: float) -> TimeLike:
    """Curl of the background velocity at the center, -c rho0 - omega.

    Raises:
        InvalidParameterError: If c = 0

    See:
        docs/tools/trajectory.md for reference
    """
    if c == 0:
        raise InvalidParameterError("c must be nonzero")
    return _scalar_or_array(-c * np.asarray(rho0_value, dtype=float) - omega)


def chain_consistency_residual(t: TimeLike, par: TrajectoryParams, fl: FloquetSolution, h: float) -> TimeLike:
    """Residual dp/dt + 2 p q - omega q along a closed-form solution.

    q = -rho0' / (2 rho0) and p = (c rho0 + omega) / 2, with rho0' from
    central differences of step h.

    Raises:
        InvalidParameterError: If h is not positive

    See:
        docs/tools/trajectory.md for reference
    """
    if not h > 0:
        raise InvalidParameterError(f"finite-difference step must be positive, got {h}")
    t = np.asarray(t, dtype=float)
    rho_mid = np.asarray(rho0_of_time(t, par, fl))
    rho_rate = (np.asarray(rho0_of_time(t + h, par, fl)) - np.asarray(rho0_of_time(t - h, par, fl))) / (2.0 * h)
    q_hat = -rho_rate / (2.0 * rho_mid)
    p_hat = 0.5 * (par.c * rho_mid + par.omega)
    p_rate = 0.5 * par.c * rho_rate
    return _scalar_or_array(p_rate + 2.0 * p_hat * q_hat - par.omega * q_hat)
