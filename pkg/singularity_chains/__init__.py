"""singularity-chains - Taylor-coefficient chains for shock fronts and rotating vortices"""

from .cli import main
import importlib.metadata

try:
    __version__ = importlib.metadata.version("singularity-chains")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = ["main"]
