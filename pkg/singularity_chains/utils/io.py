"""CSV and JSON codecs for singularity-chains.

CSV files are written through pandas with 17 significant digits and JSON
documents with sorted keys, so identical inputs give byte-identical files.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ..configs.defaults import CSV_FLOAT_FORMAT, JSON_INDENT
from ..errors import ConfigurationError
from ..models.fitting import ObservedTrack

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRACK_COLUMNS = ["t", "x1", "x2"]


def write_csv(path: PathLike, columns: Sequence[str], rows: np.ndarray) -> None:
    """Write a numeric table with a header row.

    Args:
        path: Output file
        columns: Header names
        rows: Array of shape (samples, len(columns))
    """
    table = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    frame = pd.DataFrame(table, columns=list(columns))
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"[Write CSV] {len(frame)} rows x {len(columns)} columns to {path}")


def read_csv(path: PathLike, required: Sequence[str]) -> pd.DataFrame:
    """Read a numeric CSV table and check its header.

    Raises:
        ConfigurationError: If required columns are missing or values are not numeric
    """
    frame = pd.read_csv(path, float_precision="round_trip")
    missing = [name for name in required if name not in frame.columns]
    if missing:
        raise ConfigurationError(f"{path}: missing column(s) {', '.join(missing)}")
    try:
        return frame[list(required)].astype(float)
    except ValueError as e:
        raise ConfigurationError(f"{path}: non-numeric values ({e})") from e


def read_track(path: PathLike) -> ObservedTrack:
    """Read a t,x1,x2 track; rows may come in any order.

    Raises:
        ConfigurationError: If the file is malformed or has duplicated times
    """
    frame = read_csv(path, TRACK_COLUMNS)
    try:
        return ObservedTrack.from_samples(frame.to_numpy())
    except ValueError as e:
        raise ConfigurationError(f"{path}: {e}") from e


def write_track(path: PathLike, track: ObservedTrack) -> None:
    """Write a track as t,x1,x2."""
    write_csv(path, TRACK_COLUMNS, np.column_stack([track.t, track.x1, track.x2]))


def to_jsonable(value: Any) -> Any:
    """Convert models, numpy values and complex numbers to plain JSON types.

    Complex numbers become [re, im]; non-finite floats become null.
    """
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def dumps_json(data: Any) -> str:
    """Serialize with sorted keys and two-space indentation."""
    return json.dumps(to_jsonable(data), indent=JSON_INDENT, sort_keys=True) + "\n"


def write_json(path: PathLike, data: Any) -> None:
    """Write a JSON document."""
    Path(path).write_text(dumps_json(data), encoding="utf-8")
    logger.debug(f"[Write JSON] {path}")


def read_json(path: PathLike) -> Dict[str, Any]:
    """Read a JSON object.

    Raises:
        ConfigurationError: If the document is not a JSON object
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected a JSON object")
    return data


def parse_float_list(text: str) -> List[float]:
    """Parse '0.1,0,-2' into floats.

    Raises:
        ConfigurationError: If an entry is not a number
    """
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigurationError(f"cannot parse number list '{text}'") from e
