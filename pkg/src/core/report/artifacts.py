"""
JSON artifact I/O

Every stage writes deterministic JSON: floats rounded to 6 decimals,
negative zero normalized, keys in insertion order, no timestamps.
"""
import json
from pathlib import Path
from typing import Any, List, Union

import numpy as np

from src.config.constants import COORD_DECIMALS, TOOLPATH_FILE_PATTERN
from src.core.errors import InputError
from src.utils.logger import logger


def normalize(value: Any) -> Any:
    """Round floats and convert numpy values to plain JSON types"""
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return normalize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round(float(value), COORD_DECIMALS) + 0.0
    return value


def write_json(path: Union[str, Path], data: Any) -> Path:
    """Write normalized JSON, creating parent directories"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(normalize(data), f, indent=1)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def read_json(path: Union[str, Path]) -> Any:
    """
    Read a stage artifact

    Raises:
        InputError: missing file or invalid JSON
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"missing artifact: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON in {path}: {e}")


def toolpath_name(side: str, piece: int) -> str:
    return TOOLPATH_FILE_PATTERN.format(side=side, id=piece)


def toolpath_files(directory: Union[str, Path]) -> List[Path]:
    """Toolpath files in a directory, U before V, by piece id"""
    files = Path(directory).glob("piece_*_*.toolpath.json")

    def key(p: Path):
        _, side, pid = p.name.split(".")[0].split("_")
        return side, int(pid)

    return sorted(files, key=key)
