"""CSV and JSON result files."""
import json
import math
from pathlib import Path
from typing import Any, Mapping, Union

import numpy as np
import pandas as pd
from loguru import logger

from delaunaylab.utils.errors import ExportError

FLOAT_FORMAT = '%.15g'


def _plain(value: Any) -> Any:
    """JSON-ready copy with floats rounded to 15 significant digits."""
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if not math.isfinite(value) else float(f'{value:.15g}')
    return value


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ExportError(f'cannot write {path}: {e}') from e
    logger.info(f'Wrote {len(frame)} rows to {path}')
    return path


def write_json(data: Mapping[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_plain(data), indent=2, sort_keys=True) + '\n')
    except OSError as e:
        raise ExportError(f'cannot write {path}: {e}') from e
    logger.debug(f'Wrote {path}')
    return path
