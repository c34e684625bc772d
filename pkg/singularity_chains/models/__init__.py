"""Data models for singularity-chains"""

# Re-export the base models for easier access
from .base import (  # noqa: F401
    BaseModelConfig,
    ParamsModel,
    ResultModel,
    ComplexNumber,
    ComplexArray,
    FloatArray,
    StabilityClass,
    StopReason,
    RotationSense,
    FitFamily,
    BoundaryCondition,
)

# Import specific models
from .hopf import (  # noqa: F401
    HopfChainState,
    HopfChainDerivative,
    PhiClosedForm,
    HopfSeries,
    ShockTrack,
)
from .vortex import (  # noqa: F401
    CHAIN_FIELDS,
    PhysicalParams,
    VortexChainState,
    VortexShape,
    VortexInitialConditions,
    VortexSeries,
)
from .hill import (  # noqa: F401
    HillPotential,
    StabilityReport,
    FloquetSolution,
)
from .trajectory import (  # noqa: F401
    TrajectoryParams,
    ApproxTrajectoryParams,
    CircleApproximation,
)
from .fitting import (  # noqa: F401
    ObservedTrack,
    FitBounds,
    RestartRecord,
    FitResult,
)
from .config import RunConfig  # noqa: F401
from .verify import CriterionResult, VerifyReport  # noqa: F401

# Define __all__ to control what's imported with wildcard imports
__all__ = [
    # Base models
    "BaseModelConfig",
    "ParamsModel",
    "ResultModel",
    "ComplexNumber",
    "ComplexArray",
    "FloatArray",
    "StabilityClass",
    "StopReason",
    "RotationSense",
    "FitFamily",
    "BoundaryCondition",
    # Hopf chain
    "HopfChainState",
    "HopfChainDerivative",
    "PhiClosedForm",
    "HopfSeries",
    "ShockTrack",
    # Vortex chain
    "CHAIN_FIELDS",
    "PhysicalParams",
    "VortexChainState",
    "VortexShape",
    "VortexInitialConditions",
    "VortexSeries",
    # Hill equation
    "HillPotential",
    "StabilityReport",
    "FloquetSolution",
    # Trajectory
    "TrajectoryParams",
    "ApproxTrajectoryParams",
    "CircleApproximation",
    # Fitting
    "ObservedTrack",
    "FitBounds",
    "RestartRecord",
    "FitResult",
    # CLI
    "RunConfig",
    "CriterionResult",
    "VerifyReport",
]
