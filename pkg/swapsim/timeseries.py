"""
Time series container and its CSV projection.

CSV layout: UTF-8, header row, `%.12e` numbers, LF line endings. Complex
columns are split into `<name>_re` / `<name>_im`.
"""

import io
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .errors import InvalidParameterError
from .utils import ensure_directory

FLOAT_FORMAT = "%.12e"
TAU_COLUMN = "tau"


def _quantize(values: np.ndarray) -> np.ndarray:
    # store exactly what the CSV can represent so parse(emit(s)) == s
    return np.array([float(FLOAT_FORMAT % v) for v in values], dtype=float)


class TimeSeries:
    """
    Scaled-time grid plus named real columns.

    Invariants: tau strictly increasing, every column as long as tau, all
    values finite.
    """

    def __init__(self, frame: pd.DataFrame):
        if frame.columns.empty or frame.columns[0] != TAU_COLUMN:
            raise InvalidParameterError(f"First column must be '{TAU_COLUMN}'")
        if frame.columns.duplicated().any():
            raise InvalidParameterError("Duplicate column names")
        data = frame.astype(float).reset_index(drop=True)
        if not np.all(np.isfinite(data.to_numpy())):
            raise InvalidParameterError("Time series values must be finite")
        if np.any(np.diff(data[TAU_COLUMN].to_numpy()) <= 0):
            raise InvalidParameterError("tau must be strictly increasing")
        self.frame = pd.DataFrame(
            {name: _quantize(data[name].to_numpy()) for name in data.columns},
            columns=list(data.columns),
        )

    @classmethod
    def from_columns(cls, tau, columns: Dict[str, np.ndarray]) -> "TimeSeries":
        """
        Build a series from named arrays; complex arrays become _re/_im pairs.
        """
        tau = np.asarray(tau, dtype=float)
        data = {TAU_COLUMN: tau}
        for name, values in columns.items():
            values = np.asarray(values)
            if values.shape != tau.shape:
                raise InvalidParameterError(f"Column {name} has shape {values.shape}, expected {tau.shape}")
            if np.iscomplexobj(values):
                data[f"{name}_re"] = values.real
                data[f"{name}_im"] = values.imag
            else:
                data[name] = values.astype(float)
        return cls(pd.DataFrame(data))

    @property
    def header(self) -> List[str]:
        return list(self.frame.columns)

    @property
    def tau(self) -> np.ndarray:
        return self.frame[TAU_COLUMN].to_numpy()

    def column(self, name: str) -> np.ndarray:
        return self.frame[name].to_numpy()

    def __len__(self) -> int:
        return len(self.frame)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.header == other.header and np.array_equal(self.frame.to_numpy(), other.frame.to_numpy())

    def emit(self, path: Optional[Union[str, Path]] = None) -> str:
        """
        Render as CSV text, writing it to `path` when given.
        """
        text = self.frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        if path is not None:
            parent = str(Path(path).parent)
            ensure_directory(parent)
            with open(path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        return text

    @classmethod
    def parse(cls, text: str) -> "TimeSeries":
        frame = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        return cls(frame)

    @classmethod
    def read(cls, path: Union[str, Path]) -> "TimeSeries":
        with open(path, "r", encoding="utf-8") as f:
            return cls.parse(f.read())
