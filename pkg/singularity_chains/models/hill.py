"""Hill equation models.

HillPotential holds the constants of the 2*pi-periodic potential; a
FloquetSolution holds the tabulated normalized Floquet solution
y = g * exp(i * theta) together with interpolants that extend it
quasi-periodically to the whole real line.
"""

from typing import Any, Optional, Sequence

import numpy as np
from pydantic import Field, PrivateAttr, model_validator
from scipy.interpolate import CubicSpline

from ..errors import NumericalError
from .base import (
    ComplexArray,
    ComplexNumber,
    FloatArray,
    ParamsModel,
    ResultModel,
    StabilityClass,
)

TWO_PI = 2.0 * np.pi


class HillPotential(ParamsModel):
    """Constants of the Hill potential.

    q(Phi) = omega0^2 + Re(beta0 beta1 / 2 e^{2i Phi} + conj(beta0 beta1) e^{-2i Phi}
                          + beta1 beta2 e^{i Phi} - conj(beta0 beta2) e^{-i Phi})

    See:
        docs/models/hill.md for reference
    """

    omega0: float = Field(..., ge=0.0, description="Base frequency Omega0")
    beta0: ComplexNumber = Field(0j, description="Complex parameter beta0")
    beta1: ComplexNumber = Field(0j, description="Complex parameter beta1")
    beta2: ComplexNumber = Field(0j, description="Complex parameter beta2")

    @classmethod
    def from_reals(cls, omega0: float, betas: Sequence[float]) -> "HillPotential":
        """Build from six reals (re beta0, im beta0, re beta1, ...)."""
        if len(betas) != 6:
            raise ValueError(f"expected six real numbers for beta, got {len(betas)}")
        return cls(
            omega0=omega0,
            beta0=complex(betas[0], betas[1]),
            beta1=complex(betas[2], betas[3]),
            beta2=complex(betas[4], betas[5]),
        )

    @property
    def is_constant(self) -> bool:
        """True when every beta vanishes."""
        return self.beta0 == 0 and self.beta1 == 0 and self.beta2 == 0

    def beta_norm(self) -> float:
        """Euclidean norm of (beta0, beta1, beta2)."""
        return float(np.sqrt(abs(self.beta0) ** 2 + abs(self.beta1) ** 2 + abs(self.beta2) ** 2))


class StabilityReport(ResultModel):
    """Classification of a monodromy matrix.

    See:
        docs/models/hill.md for reference
    """

    stability: StabilityClass = Field(..., description="Stability class")
    index: Optional[float] = Field(
        None, description="Characteristic index arccos(trace/2)/(2 pi), strongly-stable only"
    )
    trace: float = Field(..., description="Trace of the monodromy matrix")
    det: float = Field(..., description="Determinant of the monodromy matrix")


class FloquetSolution(ResultModel):
    """Normalized Floquet solution tabulated on Phi in [0, 2 pi].

    Note:
        theta - kappa * Phi and g are 2 pi-periodic, kappa = theta(2 pi) / (2 pi).
        Both are interpolated with periodic cubic splines so that g_at,
        theta_at and invert_theta work for any real Phi.

    See:
        docs/models/hill.md for reference
    """

    stability: StabilityClass = Field(..., description="Stability class of the potential")
    quasi_momentum: float = Field(..., gt=0.0, description="Omega = mean of 1/g^2 over a period")
    trace: float = Field(..., description="Trace of the monodromy matrix")
    phi: FloatArray = Field(..., description="Uniform grid on [0, 2 pi], endpoints included")
    g: FloatArray = Field(..., description="Amplitude |y| on the grid")
    theta: FloatArray = Field(..., description="Phase of y on the grid, theta(0) = 0")
    y: ComplexArray = Field(..., description="Normalized solution on the grid")
    dy: ComplexArray = Field(..., description="Derivative of the normalized solution on the grid")

    _g_spline: Any = PrivateAttr(default=None)
    _theta0_spline: Any = PrivateAttr(default=None)
    _kappa: float = PrivateAttr(default=0.0)

    @model_validator(mode="after")
    def _check_tables(self) -> "FloquetSolution":
        n = self.phi.size
        if n < 4:
            raise ValueError("Floquet tables need at least four samples")
        for name in ("g", "theta", "y", "dy"):
            if getattr(self, name).size != n:
                raise ValueError(f"table {name} differs in length from the grid")
        if np.any(self.g <= 0):
            raise ValueError("Floquet amplitude must be strictly positive")
        return self

    def model_post_init(self, __context: Any) -> None:
        g_periodic = np.array(self.g, copy=True)
        g_periodic[-1] = g_periodic[0]
        self._kappa = float(self.theta[-1] / TWO_PI)
        theta0 = self.theta - self._kappa * self.phi
        theta0[-1] = theta0[0]
        self._g_spline = CubicSpline(self.phi, g_periodic, bc_type="periodic")
        self._theta0_spline = CubicSpline(self.phi, theta0, bc_type="periodic")

    @property
    def kappa(self) -> float:
        """Phase advance per unit Phi over a full period."""
        return self._kappa

    def g_at(self, Phi: Any) -> np.ndarray:
        """Amplitude g at arbitrary Phi (2 pi-periodic)."""
        return np.asarray(self._g_spline(np.mod(Phi, TWO_PI)))

    def theta_at(self, Phi: Any) -> np.ndarray:
        """Phase theta at arbitrary Phi, using theta(Phi + 2 pi) = theta(Phi) + theta(2 pi)."""
        Phi = np.asarray(Phi, dtype=float)
        return np.asarray(self._theta0_spline(np.mod(Phi, TWO_PI)) + self._kappa * Phi)

    def theta_derivative(self, Phi: Any) -> np.ndarray:
        """d theta / d Phi from the interpolant (equals 1 / g^2 up to tolerance)."""
        return np.asarray(self._theta0_spline(np.mod(Phi, TWO_PI), 1) + self._kappa)

    def wronskian(self) -> np.ndarray:
        """conj(y) y' - y conj(y)' at every grid sample; 2i for a normalized solution."""
        return np.conj(self.y) * self.dy - self.y * np.conj(self.dy)

    def invert_theta(self, tau: Any, tol: float = 1e-12, max_iter: int = 50) -> np.ndarray:
        """Solve theta(Phi) = tau for Phi.

        Args:
            tau: Target phase values (scalar or array)
            tol: Absolute tolerance of the Newton polish
            max_iter: Newton iteration cap

        Returns:
            Phi values with theta(Phi) = tau, same shape as tau

        Raises:
            NumericalError: If the Newton polish does not converge
        """
        tau = np.asarray(tau, dtype=float)
        period = TWO_PI * self._kappa
        k = np.floor(tau / period)
        rest = tau - k * period
        # Bracket on the tabulated phase, then linear interpolation as start
        idx = np.clip(np.searchsorted(self.theta, rest, side="right") - 1, 0, self.phi.size - 2)
        lo_t, hi_t = self.theta[idx], self.theta[idx + 1]
        frac = np.where(hi_t > lo_t, (rest - lo_t) / np.where(hi_t > lo_t, hi_t - lo_t, 1.0), 0.0)
        Phi = self.phi[idx] + frac * (self.phi[idx + 1] - self.phi[idx]) + TWO_PI * k
        for _ in range(max_iter):
            step = (self.theta_at(Phi) - tau) / self.theta_derivative(Phi)
            Phi = Phi - step
            if np.all(np.abs(step) <= tol * (1.0 + np.abs(Phi))):
                return Phi
        raise NumericalError(f"theta inversion did not converge within {max_iter} iterations")
