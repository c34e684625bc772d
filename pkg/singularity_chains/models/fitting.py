"""Models for track fitting and extrapolation."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..configs.defaults import BETA_BOUNDS, C_BOUNDS, HOPF_SHIFT_SPAN, MU_BOUNDS, OMEGA0_BRANCHES
from .base import FitFamily, FloatArray, ParamsModel, ResultModel

Interval = Tuple[float, float]


class ObservedTrack(ResultModel):
    """Time-stamped planar positions of a singularity.

    For a one-dimensional shock front x2 is zero throughout.

    Note:
        Times must be strictly increasing. Use from_samples to build a track
        from unordered rows.

    See:
        docs/models/fitting.md for reference
    """

    t: FloatArray = Field(..., description="Sample times, strictly increasing")
    x1: FloatArray = Field(..., description="First coordinate")
    x2: FloatArray = Field(..., description="Second coordinate")

    @model_validator(mode="after")
    def _check_samples(self) -> "ObservedTrack":
        if not (self.t.ndim == self.x1.ndim == self.x2.ndim == 1):
            raise ValueError("track columns must be one-dimensional")
        if not (self.t.size == self.x1.size == self.x2.size):
            raise ValueError("track columns differ in length")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.x1)) and np.all(np.isfinite(self.x2))):
            raise ValueError("track samples must be finite")
        if self.t.size > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("track times must be strictly increasing without duplicates")
        return self

    @classmethod
    def from_samples(cls, samples: Sequence[Sequence[float]]) -> "ObservedTrack":
        """Build a track from (t, x1, x2) rows in any order.

        Raises:
            ValueError: If two rows share a timestamp
        """
        rows = np.asarray(samples, dtype=float).reshape(-1, 3)
        rows = rows[np.argsort(rows[:, 0], kind="stable")]
        if rows.shape[0] > 1 and np.any(np.diff(rows[:, 0]) == 0):
            raise ValueError("track contains duplicated timestamps")
        return cls(t=rows[:, 0], x1=rows[:, 1], x2=rows[:, 2])

    def __len__(self) -> int:
        return int(self.t.size)

    @property
    def window(self) -> Interval:
        """(first time, last time)."""
        return (float(self.t[0]), float(self.t[-1]))

    def positions(self) -> np.ndarray:
        """Complex positions x1 + i x2."""
        return self.x1 + 1j * self.x2

    def split(self, t_split: float) -> Tuple["ObservedTrack", "ObservedTrack"]:
        """Samples with t <= t_split and samples with t > t_split."""
        head = self.t <= t_split
        return (
            ObservedTrack(t=self.t[head], x1=self.x1[head], x2=self.x2[head]),
            ObservedTrack(t=self.t[~head], x1=self.x1[~head], x2=self.x2[~head]),
        )


class FitBounds(ParamsModel):
    """Search box of the nonlinear fit parameters.

    Parameters that enter a family linearly are solved exactly inside every
    objective evaluation and have no bounds.

    See:
        docs/models/fitting.md for reference
    """

    omega0_branches: List[Interval] = Field(
        default_factory=lambda: [tuple(b) for b in OMEGA0_BRANCHES],
        description="Disjoint Omega0 intervals; restarts cycle through them",
    )
    mu: Interval = Field(MU_BOUNDS, description="Range of mu within (0, 1]")
    t0: Optional[Interval] = Field(None, description="Range of t0; default one Coriolis period [0, 2 pi / omega)")
    beta: Interval = Field(BETA_BOUNDS, description="Range of every real beta component (exact family)")
    c: Interval = Field(C_BOUNDS, description="Range of c (exact family)")
    shift_span: float = Field(
        HOPF_SHIFT_SPAN, gt=0.0, description="Range of c1, c2 in units of the track duration (hopf-phi family)"
    )

    @field_validator("omega0_branches")
    @classmethod
    def _check_branches(cls, value: List[Interval]) -> List[Interval]:
        if not value:
            raise ValueError("at least one Omega0 branch is required")
        for lo, hi in value:
            if not (0.0 < lo < hi):
                raise ValueError(f"Omega0 branch ({lo}, {hi}) must satisfy 0 < lo < hi")
        return value

    @field_validator("mu")
    @classmethod
    def _check_mu(cls, value: Interval) -> Interval:
        lo, hi = value
        if not (0.0 < lo < hi <= 1.0):
            raise ValueError(f"mu bounds ({lo}, {hi}) must satisfy 0 < lo < hi <= 1")
        return value

    @field_validator("t0", "beta", "c")
    @classmethod
    def _check_interval(cls, value: Optional[Interval]) -> Optional[Interval]:
        if value is not None and not value[0] < value[1]:
            raise ValueError(f"interval ({value[0]}, {value[1]}) is empty")
        return value

    @model_validator(mode="after")
    def _check_c(self) -> "FitBounds":
        if self.c[0] <= 0.0:
            raise ValueError("c bounds must be positive; the sign of c does not enter the track")
        return self


class RestartRecord(ResultModel):
    """Outcome of one restart of the simplex search.

    See:
        docs/models/fitting.md for reference
    """

    index: int = Field(..., ge=0, description="Restart index")
    start: List[float] = Field(..., description="Initial point of the nonlinear parameters")
    mse: float = Field(..., description="Best MSE reached (inf when every evaluation failed)")
    nfev: int = Field(..., ge=0, description="Objective evaluations used")
    converged: bool = Field(..., description="Whether the simplex met its tolerances")

    @field_validator("mse", mode="before")
    @classmethod
    def _failed_restart(cls, value: object) -> object:
        # JSON stores a failed restart as null
        return float("inf") if value is None else value


class FitResult(ResultModel):
    """Best fit across restarts.

    params holds real numbers only: complex constants are split into
    <name>_re and <name>_im entries.

    See:
        docs/models/fitting.md for reference
    """

    family: FitFamily = Field(..., description="Trajectory family")
    omega: Optional[float] = Field(None, description="Coriolis parameter used (vortex families)")
    params: Dict[str, float] = Field(..., description="Fitted parameters")
    mse: float = Field(..., ge=0.0, description="Mean squared error on the fit window")
    n_restarts_used: int = Field(..., ge=1, description="Number of restarts run")
    converged: bool = Field(..., description="Whether the best restart converged")
    seed: int = Field(..., description="Seed of the restart sampler")
    budget: int = Field(..., gt=0, description="Objective evaluations allowed per restart")
    fit_window: Interval = Field(..., description="Time window of the fitted track")
    restarts: List[RestartRecord] = Field(default_factory=list, description="Per-restart table")
