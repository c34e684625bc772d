"""Base models for singularity-chains.

This module defines the shared pydantic configuration, the annotated field
types used across the package (complex numbers and read-only arrays) and the
enums that more than one module needs.

Parameter models validate their invariants on construction. Result models
(series, Floquet tables, fits) are frozen and carry read-only numpy arrays.
"""

from enum import Enum
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer, PlainValidator


class BaseModelConfig(BaseModel):
    """Base model configuration for all models in the project.

    Provides common configuration settings for Pydantic models including:
    - populate_by_name: Allow populating models by alias name or field name
    - use_enum_values: Use string values from enums instead of enum objects
    - extra: Ignore extra fields in input data (JSON documents may carry
      fields meant for sibling models)

    See:
        docs/models/base.md for reference
    """

    model_config = ConfigDict(
        populate_by_name=True,
        use_enum_values=True,
        extra="ignore",
    )


class ParamsModel(BaseModelConfig):
    """Base model for immutable parameter sets.

    Parameter models are frozen so they can be shared between threads and
    used as cache keys.

    See:
        docs/models/base.md for reference
    """

    model_config = ConfigDict(
        populate_by_name=True,
        use_enum_values=True,
        extra="ignore",
        frozen=True,
    )


class ResultModel(BaseModelConfig):
    """Base model for numerical results holding numpy arrays.

    Arrays are converted to read-only float or complex arrays on validation,
    so a result can be shared freely once constructed.

    See:
        docs/models/base.md for reference
    """

    model_config = ConfigDict(
        populate_by_name=True,
        use_enum_values=True,
        extra="ignore",
        frozen=True,
        arbitrary_types_allowed=True,
    )


def _to_complex(value: Any) -> complex:
    if isinstance(value, bool):
        raise ValueError("booleans are not complex numbers")
    if isinstance(value, (complex, np.complexfloating)):
        return complex(value)
    if isinstance(value, (int, float, np.integer, np.floating)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    raise ValueError(f"cannot interpret {value!r} as a complex number; use [re, im]")


def _complex_to_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


def _float_array(value: Any) -> np.ndarray:
    return _frozen(np.asarray(value, dtype=float))


def _complex_array(value: Any) -> np.ndarray:
    return _frozen(np.asarray(value, dtype=complex))


# Complex constants are written as [re, im] pairs in JSON documents
ComplexNumber = Annotated[
    complex,
    PlainValidator(_to_complex),
    PlainSerializer(_complex_to_pair, return_type=list),
]

FloatArray = Annotated[np.ndarray, BeforeValidator(_float_array)]
ComplexArray = Annotated[np.ndarray, BeforeValidator(_complex_array)]


class StabilityClass(str, Enum):
    """Stability classes of the Hill equation.

    - STRONGLY_STABLE: |trace M| < 2, bounded solutions robust to perturbation
    - BOUNDARY: |trace M| = 2 within tolerance (periodic or anti-periodic)
    - UNSTABLE: |trace M| > 2, a solution grows without bound

    See:
        docs/models/hill.md for reference
    """

    STRONGLY_STABLE = "strongly-stable"
    BOUNDARY = "boundary"
    UNSTABLE = "unstable"


class StopReason(str, Enum):
    """Why an integration ended.

    - COMPLETED: the requested time span was covered
    - JUMP_VANISHED: the Hopf jump amplitude A0 crossed zero

    See:
        docs/models/hopf.md for reference
    """

    COMPLETED = "completed"
    JUMP_VANISHED = "jump-vanished"


class RotationSense(str, Enum):
    """Sense of rotation of the first-approximation circle.

    See:
        docs/models/trajectory.md for reference
    """

    COUNTERCLOCKWISE = "counterclockwise"
    CLOCKWISE = "clockwise"
    INDETERMINATE = "indeterminate"


class FitFamily(str, Enum):
    """Trajectory families available to the fitter.

    - APPROX: first-approximation family, five complex constants plus
      Omega0, mu and t0
    - EXACT: closed-form family built on the Floquet solution
    - HOPF_PHI: closed-form shock-front family with constants c1..c5

    See:
        docs/models/fitting.md for reference
    """

    APPROX = "approx"
    EXACT = "exact"
    HOPF_PHI = "hopf-phi"


class BoundaryCondition(str, Enum):
    """Boundary treatment of the finite-volume oracle.

    See:
        docs/models/hopf.md for reference
    """

    OUTFLOW = "outflow"
    PERIODIC = "periodic"
