"""Models for the point-vortex chain of rotating shallow water.

The chain tracks a weak point singularity of the shallow-water system: its
position X, velocity V, the geopotential rho0 at the center, the first
rho-derivatives, the velocity-gradient invariants q, p, the second-order
quantity r and the six second-order velocity Taylor coefficients.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base import FloatArray, ParamsModel, ResultModel

# Column order of the packed state vector and of the CSV output
CHAIN_FIELDS: Tuple[str, ...] = (
    "X1",
    "X2",
    "V1",
    "V2",
    "rho0",
    "rho10",
    "rho01",
    "q",
    "p",
    "r",
    "v20",
    "v11",
    "v02",
    "w20",
    "w11",
    "w02",
)


class PhysicalParams(ParamsModel):
    """Physical constants of the rotating shallow-water system.

    See:
        docs/models/vortex.md for reference
    """

    omega: float = Field(0.0, ge=0.0, description="Coriolis parameter (1/time)")


class VortexChainState(ParamsModel):
    """State of the cut chain for a point-vortex singularity.

    Note:
        The geopotential rho0 must stay positive; a state with rho0 <= 0 lies
        outside the solution class and is rejected.

    See:
        docs/models/vortex.md for reference
    """

    X1: float = Field(0.0, description="Singularity position, first coordinate")
    X2: float = Field(0.0, description="Singularity position, second coordinate")
    V1: float = Field(0.0, description="Velocity at the singularity, first component")
    V2: float = Field(0.0, description="Velocity at the singularity, second component")
    rho0: float = Field(..., gt=0.0, description="Geopotential at the center")
    rho10: float = Field(0.0, description="First rho-derivative along x1")
    rho01: float = Field(0.0, description="First rho-derivative along x2")
    q: float = Field(0.0, description="Symmetric velocity-gradient invariant")
    p: float = Field(0.0, description="Antisymmetric velocity-gradient invariant (-rot u / 2)")
    r: float = Field(0.0, description="Second-order rho quantity")
    v20: float = Field(0.0, description="Second-order Taylor coefficient of u1, x1^2")
    v11: float = Field(0.0, description="Second-order Taylor coefficient of u1, x1 x2")
    v02: float = Field(0.0, description="Second-order Taylor coefficient of u1, x2^2")
    w20: float = Field(0.0, description="Second-order Taylor coefficient of u2, x1^2")
    w11: float = Field(0.0, description="Second-order Taylor coefficient of u2, x1 x2")
    w02: float = Field(0.0, description="Second-order Taylor coefficient of u2, x2^2")

    @model_validator(mode="after")
    def _check_finite(self) -> "VortexChainState":
        if not np.all(np.isfinite(self.as_vector())):
            raise ValueError("all chain fields must be finite")
        return self

    def as_vector(self) -> np.ndarray:
        """Pack the state in CHAIN_FIELDS order."""
        return np.array([getattr(self, name) for name in CHAIN_FIELDS], dtype=float)

    @classmethod
    def from_vector(cls, y: np.ndarray) -> "VortexChainState":
        """Unpack a vector in CHAIN_FIELDS order."""
        return cls(**{name: float(y[i]) for i, name in enumerate(CHAIN_FIELDS)})


class VortexShape(ParamsModel):
    """Ellipse parameters of the singular field structure.

    b1 = b2 is accepted here: a circular vortex is a valid input document and
    is rejected only when the singular field is evaluated.

    See:
        docs/models/vortex.md for reference
    """

    b1: float = Field(..., gt=0.0, description="First half-axis parameter")
    b2: float = Field(..., gt=0.0, description="Second half-axis parameter")
    Theta0: float = Field(0.0, description="Initial orientation angle (radians)")


class VortexInitialConditions(ParamsModel):
    """JSON document read by the chain subcommand.

    Holds the chain state fields together with omega, b1, b2 and Theta0.

    See:
        docs/models/vortex.md for reference
    """

    state: VortexChainState
    params: PhysicalParams
    shape: Optional[VortexShape] = None

    @model_validator(mode="before")
    @classmethod
    def _split_flat_document(cls, data: object) -> object:
        if isinstance(data, dict) and "state" not in data:
            shape_keys = {"b1", "b2", "Theta0"}
            shape = {k: data[k] for k in shape_keys if k in data}
            return {
                "state": {k: data[k] for k in CHAIN_FIELDS if k in data},
                "params": {"omega": data.get("omega", 0.0)},
                "shape": shape if {"b1", "b2"} <= shape.keys() else None,
            }
        return data


class VortexSeries(ResultModel):
    """Chain solution sampled on the caller's grid.

    The running integrals of q and p are integrated alongside the chain; they
    are absent for series assembled from external data.

    See:
        docs/models/vortex.md for reference
    """

    t: FloatArray = Field(..., description="Sample times")
    y: FloatArray = Field(..., description="States, shape (samples, 16), CHAIN_FIELDS order")
    omega: float = Field(0.0, ge=0.0, description="Coriolis parameter the series was run with")
    int_q: Optional[FloatArray] = Field(None, description="Running integral of q from t[0]")
    int_p: Optional[FloatArray] = Field(None, description="Running integral of p from t[0]")

    @field_validator("y")
    @classmethod
    def _check_shape(cls, value: np.ndarray) -> np.ndarray:
        if value.ndim != 2 or value.shape[1] != len(CHAIN_FIELDS):
            raise ValueError(f"state table must have {len(CHAIN_FIELDS)} columns, got shape {value.shape}")
        return value

    @model_validator(mode="after")
    def _check_lengths(self) -> "VortexSeries":
        if self.t.size == 0:
            raise ValueError("series must contain at least one sample")
        if self.y.shape[0] != self.t.size:
            raise ValueError("state table and time grid differ in length")
        for name in ("int_q", "int_p"):
            extra = getattr(self, name)
            if extra is not None and extra.size != self.t.size:
                raise ValueError(f"{name} and time grid differ in length")
        return self

    def __len__(self) -> int:
        return int(self.t.size)

    def field(self, name: str) -> np.ndarray:
        """Column of one chain field."""
        return self.y[:, CHAIN_FIELDS.index(name)]

    def fields(self) -> Dict[str, np.ndarray]:
        """All chain columns keyed by field name."""
        return {name: self.y[:, i] for i, name in enumerate(CHAIN_FIELDS)}

    def state(self, index: int) -> VortexChainState:
        """Chain state at one sample."""
        return VortexChainState.from_vector(self.y[index])

    def columns(self) -> List[str]:
        """CSV header of the chain subcommand."""
        return ["t", *CHAIN_FIELDS, "Theta", "A"]
