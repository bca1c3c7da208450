"""CSV emission and the read-back check every emitted file goes through."""

import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class OutputValidationError(OSError):
	"""An emitted file does not read back as written."""


def write_csv(path: Path, columns: Mapping[str, Sequence[float]]) -> Path:
	path = Path(path)
	frame = pd.DataFrame({name: np.asarray(values, dtype=float) for name, values in columns.items()})
	if path.parent != Path("."):
		path.parent.mkdir(parents=True, exist_ok=True)
	frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
	logger.info(f"wrote {len(frame)} rows to {path}")
	return path


def validate_csv(path: Path, expected_columns: Sequence[str], monotone: Optional[str] = None) -> pd.DataFrame:
	"""Re-read ``path`` and check header, finiteness and (optionally) a strictly increasing column."""
	frame = pd.read_csv(path)
	if list(frame.columns) != list(expected_columns):
		raise OutputValidationError(f"{path}: columns {list(frame.columns)} != {list(expected_columns)}")
	values = frame.to_numpy(dtype=float)
	if not np.all(np.isfinite(values)):
		raise OutputValidationError(f"{path}: non-finite values")
	if monotone is not None and len(frame) > 1 and not np.all(np.diff(frame[monotone].to_numpy()) > 0):
		raise OutputValidationError(f"{path}: column '{monotone}' is not increasing")
	return frame
