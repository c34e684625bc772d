"""Utility functions for singularity-chains"""

from .decorators import handle_cli_errors
from .io import read_json, read_track, write_csv, write_json, write_track

__all__ = ["handle_cli_errors", "read_json", "read_track", "write_csv", "write_json", "write_track"]
