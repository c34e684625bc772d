"""Hill equation tools: monodromy, stability and the normalized Floquet solution.

The Hill equation y'' + q(Phi) y = 0 has a 2 pi-periodic potential q. Its
monodromy matrix decides stability; in the stable region the Floquet solution
y = g exp(i theta), normalized so that conj(y) y' - y conj(y)' = 2i, supplies
the amplitude g and phase theta used by the closed-form trajectories.
"""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from ..configs.defaults import (
    BOUNDARY_TOL,
    BOUNDARY_WEIGHT_TOL,
    COEXISTENCE_TOL,
    DET_TOL,
    FLOQUET_GRID,
    HILL_ATOL_FACTOR,
    HILL_TOL,
)
from ..errors import DegeneracyError, InvalidMonodromyError, InvalidParameterError, StabilityError
from ..models.base import StabilityClass
from ..models.hill import TWO_PI, FloquetSolution, HillPotential, StabilityReport
from ..solvers.integrator import integrate

logger = logging.getLogger(__name__)


def potential_value(pot: HillPotential, Phi: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Evaluate the Hill potential q(Phi).

    Args:
        pot: Potential constants
        Phi: Phase or array of phases

    Returns:
        Real potential value, same shape as Phi

    See:
        docs/tools/hill_floquet.md for reference
    """
    b01 = pot.beta0 * pot.beta1
    b12 = pot.beta1 * pot.beta2
    b02 = pot.beta0 * pot.beta2
    e = np.exp(1j * np.asarray(Phi, dtype=float))
    value = pot.omega0**2 + np.real(
        0.5 * b01 * e**2 + np.conj(b01) * np.conj(e) ** 2 + b12 * e - np.conj(b02) * np.conj(e)
    )
    return float(value) if np.ndim(value) == 0 else value


def _fundamental_solutions(
    pot: HillPotential, tol: float, grid: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Basis solutions with (y, y') = (1, 0) and (0, 1) at Phi = 0.

    Returns the sample grid and an array of shape (samples, 4) holding
    y1, y1', y2, y2'.
    """
    if not tol > 0:
        raise InvalidParameterError(f"tolerance must be positive, got {tol}")
    samples = np.array([0.0, TWO_PI]) if grid is None else grid

    def rhs(Phi: float, y: np.ndarray) -> np.ndarray:
        qv = potential_value(pot, Phi)
        return np.array([y[1], -qv * y[0], y[3], -qv * y[2]])

    result = integrate(
        rhs,
        (0.0, TWO_PI),
        np.array([1.0, 0.0, 0.0, 1.0]),
        t_eval=samples,
        rtol=tol,
        atol=tol * HILL_ATOL_FACTOR,
        label="Hill Monodromy",
    )
    return result.t, result.y


def monodromy(pot: HillPotential, tol: float = HILL_TOL) -> np.ndarray:
    """Monodromy matrix of the Hill equation over one period.

    Args:
        pot: Potential constants
        tol: Relative integration tolerance (> 0)

    Returns:
        2x2 real matrix [[y1, y2], [y1', y2']] at Phi = 2 pi

    Raises:
        InvalidParameterError: For a non-positive tolerance
        StiffnessError: If the step size underflows

    See:
        docs/tools/hill_floquet.md for reference
    """
    _, y = _fundamental_solutions(pot, tol)
    end = y[-1]
    M = np.array([[end[0], end[2]], [end[1], end[3]]])
    logger.debug(f"[Hill Monodromy] trace={np.trace(M):.15g} det={np.linalg.det(M):.15g}")
    return M


def classify_stability(
    M: np.ndarray, boundary_tol: float = BOUNDARY_TOL, det_tol: float = DET_TOL
) -> StabilityReport:
    """Classify a monodromy matrix by its trace.

    Args:
        M: 2x2 monodromy matrix
        boundary_tol: Half-width of the band around |trace| = 2 called boundary
        det_tol: Accepted deviation of det M from one

    Returns:
        StabilityReport; the index arccos(trace/2)/(2 pi) is set unless unstable

    Raises:
        InvalidMonodromyError: If det M is far from one

    See:
        docs/tools/hill_floquet.md for reference
    """
    M = np.asarray(M, dtype=float)
    det = float(np.linalg.det(M))
    if abs(det - 1.0) > det_tol:
        raise InvalidMonodromyError(f"det M = {det:.12g} is not 1: not the monodromy of a Hill equation")
    trace = float(np.trace(M))
    if abs(trace) < 2.0 - boundary_tol:
        stability = StabilityClass.STRONGLY_STABLE
    elif abs(trace) > 2.0 + boundary_tol:
        stability = StabilityClass.UNSTABLE
    else:
        stability = StabilityClass.BOUNDARY
    index = None
    if stability != StabilityClass.UNSTABLE:
        index = float(np.arccos(np.clip(trace / 2.0, -1.0, 1.0)) / TWO_PI)
    return StabilityReport(stability=stability, index=index, trace=trace, det=det)


def _constant_potential_solution(pot: HillPotential, grid: np.ndarray, report: StabilityReport) -> FloquetSolution:
    omega0 = pot.omega0
    y = np.exp(1j * omega0 * grid) / np.sqrt(omega0)
    return FloquetSolution(
        stability=report.stability,
        quasi_momentum=omega0,
        trace=report.trace,
        phi=grid,
        g=np.full(grid.size, 1.0 / np.sqrt(omega0)),
        theta=omega0 * grid,
        y=y,
        dy=1j * omega0 * y,
    )


def _floquet_vector(pot: HillPotential, M: np.ndarray, report: StabilityReport) -> Tuple[np.ndarray, complex]:
    """Initial data (y, y') of the Floquet solution with Wronskian weight one.

    On the boundary a monodromy equal to +-I makes every solution a Floquet
    solution; the one matching the constant-potential solution at Phi = 0
    is taken. Otherwise the eigenvector with positive Wronskian is used.
    """
    boundary = report.stability == StabilityClass.BOUNDARY
    sign = np.sign(report.trace)
    if boundary and np.allclose(M, sign * np.eye(2), rtol=0.0, atol=COEXISTENCE_TOL):
        scale = np.sqrt(pot.omega0) if pot.omega0 > 0 else 1.0
        logger.warning(
            f"[Floquet Solution] trace={report.trace:.12g}: M is +-I, every solution is a Floquet solution"
        )
        return np.array([1.0 / scale, 1j * scale]), complex(sign)

    eigenvalues, vectors = np.linalg.eig(M.astype(complex))
    weights = np.imag(np.conj(vectors[0]) * vectors[1])
    branch = int(np.argmax(weights))
    threshold = BOUNDARY_WEIGHT_TOL if boundary else 0.0
    if not weights[branch] > threshold:
        if boundary:
            raise DegeneracyError(
                f"trace M = {report.trace:.12g} lies on the stability boundary and M is not +-I: "
                "the multipliers coincide with a single eigenvector, so there is no Floquet basis"
            )
        raise DegeneracyError("no eigen-solution with positive Wronskian: multipliers are real")
    if boundary:
        logger.warning(
            f"[Floquet Solution] trace={report.trace:.12g} is within the boundary band, "
            f"multipliers {eigenvalues[branch]:.6g} and {eigenvalues[1 - branch]:.6g} are complex"
        )
    return vectors[:, branch] / np.sqrt(weights[branch]), complex(eigenvalues[branch])


def floquet_solution(
    pot: HillPotential,
    tol: float = HILL_TOL,
    grid_size: int = FLOQUET_GRID,
    boundary_tol: float = BOUNDARY_TOL,
) -> FloquetSolution:
    """Normalized Floquet solution of a stable Hill equation.

    The eigen-solution of the monodromy matrix with positive imaginary
    Wronskian part is scaled to conj(y) y' - y conj(y)' = 2i and rotated so
    that y(0) > 0, giving theta(0) = 0. The quasi-momentum is the period mean
    of 1/g^2.

    Args:
        pot: Potential constants
        tol: Relative integration tolerance
        grid_size: Number of grid intervals on [0, 2 pi]
        boundary_tol: Stability band half-width around |trace| = 2

    Returns:
        FloquetSolution tabulated on grid_size + 1 points

    Raises:
        StabilityError: If the potential is unstable
        DegeneracyError: On the stability boundary when M is a Jordan block

    See:
        docs/tools/hill_floquet.md for reference
    """
    if grid_size < 8:
        raise InvalidParameterError(f"Floquet grid needs at least 8 intervals, got {grid_size}")
    grid = np.linspace(0.0, TWO_PI, grid_size + 1)
    M = monodromy(pot, tol)
    report = classify_stability(M, boundary_tol)

    if report.stability == StabilityClass.UNSTABLE:
        raise StabilityError(f"|trace M| = {abs(report.trace):.12g} > 2: the Hill equation is unstable")

    if report.stability == StabilityClass.BOUNDARY and pot.is_constant and pot.omega0 > 0:
        logger.info(f"[Floquet Solution] boundary case with constant potential, Omega0={pot.omega0}")
        return _constant_potential_solution(pot, grid, report)

    v, multiplier = _floquet_vector(pot, M, report)
    v = v * np.exp(-1j * np.angle(v[0]))

    Phi, basis = _fundamental_solutions(pot, tol, grid)
    y = v[0] * basis[:, 0] + v[1] * basis[:, 2]
    dy = v[0] * basis[:, 1] + v[1] * basis[:, 3]
    g = np.abs(y)
    theta = np.unwrap(np.angle(y))
    theta = theta - theta[0]
    quasi_momentum = float(np.mean(1.0 / g[:-1] ** 2))

    mismatch = abs(theta[-1] - TWO_PI * quasi_momentum)
    if mismatch > 1e-6:
        logger.warning(f"[Floquet Solution] phase advance and quasi-momentum differ by {mismatch:.3g}")

    solution = FloquetSolution(
        stability=report.stability,
        quasi_momentum=quasi_momentum,
        trace=report.trace,
        phi=Phi,
        g=g,
        theta=theta,
        y=y,
        dy=dy,
    )
    logger.debug(
        f"[Floquet Solution] Omega={quasi_momentum:.12g}, multiplier={multiplier:.6g}, "
        f"grid={grid_size}"
    )
    return solution
