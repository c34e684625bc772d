"""Numerical tools for singularity-chains"""

# Import tools for easier access
from . import fitting
from . import hill_floquet
from . import hopf_chain
from . import trajectory
from . import verify
from . import vortex_chain

__all__ = [
    "fitting",
    "hill_floquet",
    "hopf_chain",
    "trajectory",
    "verify",
    "vortex_chain",
]
