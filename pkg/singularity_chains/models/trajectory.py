"""Trajectory parameter models.

Two families describe the motion of the vortex center: the exact family built
on the Floquet solution of the Hill equation and the first-approximation
family, valid for small beta, with five complex constants A0..A4.
"""

from typing import Tuple

from pydantic import Field, field_validator

from .base import ComplexNumber, ParamsModel, ResultModel, RotationSense
from .hill import HillPotential


class TrajectoryParams(ParamsModel):
    """Constants of the exact closed-form family.

    Note:
        Stability of the potential is checked when the Floquet solution is
        built, not here.

    See:
        docs/models/trajectory.md for reference
    """

    pot: HillPotential = Field(..., description="Hill potential")
    c: float = Field(..., description="Real integration constant, nonzero")
    mu: float = Field(..., gt=0.0, le=1.0, description="Ellipticity of the phase map, 0 < mu <= 1")
    t0: float = Field(0.0, description="Time offset")
    V0: ComplexNumber = Field(0j, description="Inertial velocity constant")
    X0: ComplexNumber = Field(0j, description="Position constant")
    omega: float = Field(..., gt=0.0, description="Coriolis parameter (1/time)")

    @field_validator("c")
    @classmethod
    def _nonzero_c(cls, value: float) -> float:
        if value == 0.0:
            raise ValueError("c must be nonzero")
        return value


class ApproxTrajectoryParams(ParamsModel):
    """Constants of the first-approximation family.

    X = A1 + A2 e^{-i w t} + e^{i(Phi - w t)/2} (A0 + A3 e^{-2i Phi} + A4 e^{-i Phi})
        * sqrt(1 - (1 - mu^2) sin^2(w (t - t0) / 2))

    See:
        docs/models/trajectory.md for reference
    """

    A0: ComplexNumber = Field(0j, description="Circle amplitude")
    A1: ComplexNumber = Field(0j, description="Circle center")
    A2: ComplexNumber = Field(0j, description="Inertial oscillation amplitude")
    A3: ComplexNumber = Field(0j, description="Second harmonic amplitude")
    A4: ComplexNumber = Field(0j, description="First harmonic amplitude")
    omega0: float = Field(..., gt=0.0, description="Base frequency Omega0")
    mu: float = Field(..., gt=0.0, le=1.0, description="Ellipticity of the phase map")
    t0: float = Field(0.0, description="Time offset")
    omega: float = Field(..., gt=0.0, description="Coriolis parameter (1/time)")

    def amplitudes(self) -> Tuple[complex, complex, complex, complex, complex]:
        """(A0, A1, A2, A3, A4)."""
        return (self.A0, self.A1, self.A2, self.A3, self.A4)


class CircleApproximation(ResultModel):
    """Circle that approximates the first-approximation track.

    See:
        docs/models/trajectory.md for reference
    """

    center: Tuple[float, float] = Field(..., description="Circle center (Re A1, Im A1)")
    radius: float = Field(..., ge=0.0, description="Radius |A0|")
    sense: RotationSense = Field(..., description="Sense from comparing mu with 2 Omega0")
    angular_velocity_at_t0: float = Field(
        ..., description="Angular velocity about the center at t = t0 (mod 2 pi / omega)"
    )
    mean_angular_velocity: float = Field(..., description="Angular velocity averaged over one period")
