"""Shock-front models for the Hopf equation w_t + (w^2/2)_x = 0.

This module contains the state of the cut Taylor-coefficient chain, the
constants of the closed-form front position and the time series produced by
the chain integrator and by the finite-volume oracle.
"""

from typing import List, Optional

import numpy as np
from pydantic import Field, model_validator

from .base import BoundaryCondition, FloatArray, ParamsModel, ResultModel, StopReason


class HopfChainState(ParamsModel):
    """State of the chain cut at order n.

    The solution near the front is H(x, t) + A(x, t) on the left of the front
    and H(x, t) on its right; H_k and A_k are the Taylor coefficients of H and
    A in powers of (x - phi).

    Note:
        A0 = 0 is representable (it is a legitimate end state of an
        integration) but the chain right-hand side rejects it.

    See:
        docs/models/hopf.md for reference
    """

    phi: float = Field(0.0, description="Front position")
    H: List[float] = Field(..., description="Background Taylor coefficients H0..Hn")
    A: List[float] = Field(..., description="Jump Taylor coefficients A0..An")
    n: int = Field(..., ge=0, description="Closure order: H_{n+1} = A_{n+1} = 0")

    @model_validator(mode="before")
    @classmethod
    def _default_order(cls, data: object) -> object:
        if isinstance(data, dict) and data.get("n") is None and "H" in data:
            data = {**data, "n": len(data["H"]) - 1}
        return data

    @model_validator(mode="after")
    def _check_lengths(self) -> "HopfChainState":
        if len(self.H) != self.n + 1 or len(self.A) != self.n + 1:
            raise ValueError(
                f"H and A must both have n + 1 = {self.n + 1} coefficients, "
                f"got {len(self.H)} and {len(self.A)}"
            )
        if not all(np.isfinite(self.H)) or not all(np.isfinite(self.A)) or not np.isfinite(self.phi):
            raise ValueError("chain state must be finite")
        return self

    def as_vector(self) -> np.ndarray:
        """Pack as [phi, H0..Hn, A0..An]."""
        return np.concatenate(([self.phi], self.H, self.A))

    @classmethod
    def from_vector(cls, y: np.ndarray, n: int) -> "HopfChainState":
        """Unpack a vector produced by as_vector."""
        return cls(
            phi=float(y[0]),
            H=[float(v) for v in y[1 : n + 2]],
            A=[float(v) for v in y[n + 2 : 2 * n + 3]],
            n=n,
        )


class HopfChainDerivative(ParamsModel):
    """Time derivative of a HopfChainState.

    See:
        docs/models/hopf.md for reference
    """

    dphi: float = Field(..., description="Front speed d(phi)/dt")
    dH: List[float] = Field(..., description="dH_k/dt for k = 0..n")
    dA: List[float] = Field(..., description="dA_k/dt for k = 0..n")


class PhiClosedForm(ParamsModel):
    """Constants c1..c5 of the closed-form front position.

    phi(t) = c3 / (c2 - c1) * sqrt((t + c1) / (t + c2)) + c4 * t + c5

    Note:
        c1 = c2 is accepted here and rejected on evaluation, where the
        degenerate denominator is reported as its own error.

    See:
        docs/models/hopf.md for reference
    """

    c1: float = Field(..., description="Shift inside the numerator of the radicand")
    c2: float = Field(..., description="Shift inside the denominator of the radicand")
    c3: float = Field(..., description="Amplitude of the square-root term")
    c4: float = Field(..., description="Asymptotic front speed")
    c5: float = Field(..., description="Offset")


class HopfSeries(ResultModel):
    """Time series of chain states sampled on the caller's grid.

    See:
        docs/models/hopf.md for reference
    """

    n: int = Field(..., ge=0, description="Closure order")
    t: FloatArray = Field(..., description="Sample times")
    phi: FloatArray = Field(..., description="Front position per sample")
    H: FloatArray = Field(..., description="Background coefficients, shape (samples, n + 1)")
    A: FloatArray = Field(..., description="Jump coefficients, shape (samples, n + 1)")
    stop_reason: StopReason = Field(StopReason.COMPLETED, description="Why integration ended")
    stop_time: Optional[float] = Field(None, description="Time at which integration halted early")

    def __len__(self) -> int:
        return int(self.t.size)

    def state(self, index: int) -> HopfChainState:
        """Chain state at one sample."""
        return HopfChainState(
            phi=float(self.phi[index]),
            H=[float(v) for v in self.H[index]],
            A=[float(v) for v in self.A[index]],
            n=self.n,
        )

    def columns(self) -> List[str]:
        """CSV header: t, phi, H0, A0, H1, A1, ..."""
        names = ["t", "phi"]
        for k in range(self.n + 1):
            names.extend([f"H{k}", f"A{k}"])
        return names

    def table(self) -> np.ndarray:
        """Rows matching columns()."""
        parts = [self.t[:, None], self.phi[:, None]]
        for k in range(self.n + 1):
            parts.extend([self.H[:, k : k + 1], self.A[:, k : k + 1]])
        return np.hstack(parts)


class ShockTrack(ResultModel):
    """Shock position extracted from the finite-volume oracle.

    See:
        docs/models/hopf.md for reference
    """

    t: FloatArray = Field(..., description="Sample times")
    shock_pos: FloatArray = Field(..., description="Mid-level crossing of the jump")
    dx: float = Field(..., gt=0, description="Cell width")
    cells: int = Field(..., ge=100, description="Number of cells")
    boundary: BoundaryCondition = Field(BoundaryCondition.OUTFLOW, description="Boundary treatment")
