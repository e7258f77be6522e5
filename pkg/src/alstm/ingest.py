"""Loading and repairing real-world series such as the UCI household
power consumption file (``;``-separated, ``?`` for missing readings)."""

import os
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .datagen import Series
from .exceptions import ConfigError


@dataclass(frozen=True)
class CsvSpec:
    path: str
    delimiter: str = ";"
    column: object = "Global_active_power"  # header name, or 0-based index
    missing: str = "?"
    downsample: int = 1
    max_rows: int = None
    header: bool = True

    def __post_init__(self):
        if self.downsample < 1:
            raise ConfigError(f"downsample factor must be >= 1, got {self.downsample}")


def load_series_csv(spec):
    """Column values in file order; missing or unparseable cells become NaN."""
    if not os.path.isfile(spec.path):
        raise FileNotFoundError(f"no such file: {spec.path}")
    frame = pd.read_csv(
        spec.path,
        sep=spec.delimiter,
        header=0 if spec.header else None,
        dtype=str,
        keep_default_na=False,
        nrows=spec.max_rows,
        engine="c",
    )
    col = spec.column
    if isinstance(col, str) and col.strip().lstrip("-").isdigit() and col not in frame.columns:
        col = int(col)
    if isinstance(col, int):
        if not 0 <= col < frame.shape[1]:
            raise KeyError(f"column index {col} out of range (file has {frame.shape[1]} columns)")
        raw = frame.iloc[:, col]
    elif col in frame.columns:
        raw = frame[col]
    else:
        raise KeyError(f"column {col!r} not in header {list(frame.columns)}")
    raw = raw.str.strip().replace(spec.missing, None)
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
    if len(values) == 0:
        raise ValueError(f"no data rows parsed from {spec.path}")
    return values


def clean_missing(raw):
    """Forward-fill NaN markers with the latest preceding observed value."""
    raw = np.asarray(raw, dtype=np.float64)
    if len(raw) == 0 or np.all(np.isnan(raw)):
        raise ValueError("series has no observed values")
    if np.isnan(raw[0]):
        raise ValueError("series starts with a missing value; nothing to fill it from")
    return Series(pd.Series(raw).ffill().to_numpy())


def downsample(series, k):
    """Means of consecutive blocks of ``k`` values; a trailing partial block is dropped."""
    if k < 1:
        raise ValueError(f"downsample factor must be >= 1, got {k}")
    values = np.asarray(series.values if isinstance(series, Series) else series, dtype=np.float64)
    n = len(values) // k
    return Series(values[: n * k].reshape(n, k).mean(axis=1))


def load_series(spec):
    """Full pipeline: read, forward-fill, block-average."""
    return downsample(clean_missing(load_series_csv(spec)), spec.downsample)


def write_series_csv(path, series, header_comment=None):
    values = series.values if isinstance(series, Series) else series
    with open(path, "w") as fh:
        if header_comment:
            fh.write(f"# spec: {header_comment}\n")
        fh.write("index,value\n")
        for k, v in enumerate(values):
            fh.write(f"{k},{float(v)!r}\n")
