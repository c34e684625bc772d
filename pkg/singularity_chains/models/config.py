"""Run configuration captured for every CLI invocation."""

import os
from typing import Dict, List, Optional, Union

from pydantic import Field, field_validator

from .base import BaseModelConfig

OptionValue = Union[str, int, float, bool, List[float], None]


class RunConfig(BaseModelConfig):
    """One CLI invocation.

    Note:
        Input paths must exist and the output directory must be writable;
        both are checked before any computation starts.

    See:
        docs/models/config.md for reference
    """

    subcommand: str = Field(..., description="hopf, chain, hill, trajectory, fit, predict or verify")
    inputs: List[str] = Field(default_factory=list, description="Input file paths")
    out: Optional[str] = Field(None, description="Output path")
    rtol: float = Field(..., gt=0.0, description="Relative integrator tolerance")
    atol: float = Field(..., gt=0.0, description="Absolute integrator tolerance")
    seed: Optional[int] = Field(None, description="Seed of random restarts")
    log_level: str = Field("info", description="Effective log level")
    options: Dict[str, OptionValue] = Field(default_factory=dict, description="Subcommand options")

    @field_validator("inputs")
    @classmethod
    def _inputs_exist(cls, value: List[str]) -> List[str]:
        missing = [path for path in value if not os.path.isfile(path)]
        if missing:
            raise ValueError(f"input file not found: {', '.join(missing)}")
        return value

    @field_validator("out")
    @classmethod
    def _out_writable(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        directory = os.path.dirname(os.path.abspath(value))
        if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
            raise ValueError(f"output directory is not writable: {directory}")
        return value
