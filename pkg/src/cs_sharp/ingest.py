# Reading sample columns, partition labels and projection specs from disk
import math
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from .core import (
    CoordinateMask,
    CoordinatePrefix,
    Identity,
    MeanDirection,
    OrthonormalColumns,
    Partition,
    Projection,
    Series,
    SpanOf,
    Zero,
)
from .errors import InvalidParameter, ParseError

PROJECTION_FORMS = ("identity", "zero", "prefix:<k>", "mask:<i,j,...>", "mean", "span-x", "basis:<file>")


def parse_column_selector(text: str | int) -> str | int:
    """A bare non-negative integer selects by position; anything else by header name."""
    if isinstance(text, int):
        return text
    cleaned = text.strip()
    return int(cleaned) if cleaned.isdigit() else cleaned


def _to_float(cell: str) -> float:
    try:
        return float(cell)
    except ValueError:
        return math.nan


def _is_number(cell: str) -> bool:
    return not math.isnan(_to_float(cell)) or cell.strip().lower() == "nan"


def _read_table(path: Path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except pd.errors.EmptyDataError as exc:
        raise ParseError(f"{path} is empty") from exc
    except (pd.errors.ParserError, UnicodeDecodeError, IsADirectoryError) as exc:
        raise ParseError(f"cannot parse {path} as CSV: {exc}") from exc
    if frame.empty:
        raise ParseError(f"{path} has no rows")
    return frame


def _select(frame: pd.DataFrame, column: str | int, path: Path) -> tuple[pd.Series, int]:
    first = [str(cell).strip() for cell in frame.iloc[0]]
    if isinstance(column, str):
        if column not in first:
            raise ParseError(f"{path} has no column named {column!r}; header is {first}")
        return frame.iloc[1:, first.index(column)], 2
    if not 0 <= column < frame.shape[1]:
        raise ParseError(f"{path} has {frame.shape[1]} column(s); index {column} is out of range")
    body = frame.iloc[:, column]
    if not _is_number(first[column]):
        logger.debug("treating first row of {} as a header ({!r})", path, first[column])
        return body.iloc[1:], 2
    return body, 1


def read_column(path: Path | str, column: str | int = 0) -> Series:
    """One numeric column of a CSV file as a finite float vector.

    A non-numeric first row is taken as a header. Blank cells, text and
    non-finite values are rejected with the offending line number.
    """
    path = Path(path)
    frame = _read_table(path)
    body, first_line = _select(frame, column, path)
    cells = body.astype(str).str.strip()
    # nearest-double parsing: a repr-printed value reads back bit for bit
    values = cells.map(_to_float).to_numpy(dtype=np.float64)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        line = first_line + int(bad[0])
        raise ParseError(f"{path}:{line}: not a finite number: {cells.iloc[int(bad[0])]!r}")
    if values.size == 0:
        raise ParseError(f"{path} has a header but no data rows")
    logger.info("read {} values from {} column {!r}", values.size, path, column)
    return values


def read_labels(path: Path | str, column: str | int = 0) -> Partition:
    """Integer group labels from a CSV column."""
    values = read_column(path, column)
    if not np.all(values == np.round(values)):
        raise ParseError(f"{path}: partition labels must be integers")
    return Partition.from_labels(values.astype(np.int64))


def load_basis(path: Path | str) -> OrthonormalColumns:
    """An n x m matrix with orthonormal columns, whitespace or comma separated."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read basis file {path}: {exc}") from exc
    delimiter = "," if "," in text else None
    try:
        matrix = np.loadtxt(path, delimiter=delimiter, ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"cannot parse basis file {path}: {exc}") from exc
    return OrthonormalColumns(matrix)


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ParseError(f"{what} must be an integer, got {text!r}") from exc


def parse_projection(text: str, n: int, anchor: Series | None = None) -> Projection:
    """Build a projection from its command-line form and validate it for dimension n.

    `span-x` projects onto the span of `anchor`.
    """
    raw = text.strip()
    kind, _, arg = raw.partition(":")
    kind = kind.strip().lower()
    spec: Projection
    if kind == "identity" and not arg:
        spec = Identity()
    elif kind == "zero" and not arg:
        spec = Zero()
    elif kind == "mean" and not arg:
        spec = MeanDirection()
    elif kind == "span-x" and not arg:
        if anchor is None:
            raise ParseError("span-x needs the x series")
        spec = SpanOf(anchor)
    elif kind == "prefix" and arg:
        spec = CoordinatePrefix(_parse_int(arg, "prefix length"))
    elif kind == "mask" and arg:
        spec = CoordinateMask(tuple(_parse_int(part, "mask index") for part in arg.split(",") if part.strip()))
    elif kind == "basis" and arg:
        spec = load_basis(arg.strip())
    else:
        raise ParseError(f"unknown projection {raw!r}; expected one of {', '.join(PROJECTION_FORMS)}")
    spec.check(n)
    return spec


def parse_range(text: str) -> tuple[float, float] | None:
    """`a,b` as a float pair; `auto` as None."""
    cleaned = text.strip().lower()
    if cleaned == "auto":
        return None
    parts = cleaned.split(",")
    if len(parts) != 2:
        raise ParseError(f"range must be 'a,b' or 'auto', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ParseError(f"range bounds must be numbers, got {text!r}") from exc
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise InvalidParameter(f"range needs finite a < b, got {text!r}")
    return a, b
