"""Acceptance-suite report models."""

from typing import List, Optional

from pydantic import Field

from .base import ResultModel


class CriterionResult(ResultModel):
    """Outcome of one acceptance criterion.

    Note:
        value is None when the check raised; detail then carries the error.

    See:
        docs/models/verify.md for reference
    """

    id: str = Field(..., description="Criterion identifier")
    name: str = Field(..., description="Short description")
    passed: bool = Field(..., description="Whether the measured value meets the threshold")
    value: Optional[float] = Field(None, description="Measured value")
    threshold: float = Field(..., description="Threshold the value is compared with")
    runtime: float = Field(0.0, ge=0.0, exclude=True, description="Wall-clock seconds of the check, logged only")
    detail: Optional[str] = Field(None, description="Error raised by the check")


class VerifyReport(ResultModel):
    """Report of an acceptance suite.

    Runtimes stay out of the serialized report so that one seed always gives
    the same bytes.

    See:
        docs/models/verify.md for reference
    """

    suite: str = Field(..., description="Suite name")
    seed: int = Field(..., description="Seed of the random cases")
    passed: bool = Field(..., description="True when every criterion passed")
    criteria: List[CriterionResult] = Field(default_factory=list, description="Per-criterion results")
    runtime: float = Field(0.0, ge=0.0, exclude=True, description="Wall-clock seconds of the suite, logged only")
